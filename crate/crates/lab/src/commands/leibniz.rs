//! Leibniz expansion check with exact coefficients: the k-fold commutator
//! of a random product must equal its multinomial expansion with deviation
//! exactly zero, not merely small.

use super::metric_for;
use crate::config::LeibnizConfig;
use crate::report::Report;
use crate::rng::stream;
use crate::sampling::{random_ball_point, random_exact_element};
use cqms_core::algebra::ExactElement;
use cqms_core::group::BallTable;
use cqms_core::operator::{verify_leibniz, FinVector};
use cqms_core::{Error, Result};
use serde_json::json;
use std::path::Path;

pub fn run(cfg: &LeibnizConfig, seed: u64, _cache_dir: Option<&Path>) -> Result<Report> {
    if cfg.n_values.is_empty() || cfg.k_values.is_empty() {
        return Err(Error::InvalidParameter(
            "Leibniz check needs at least one factor count and one order".into(),
        ));
    }
    let mut report = Report::new("leibniz", seed, cfg)?;
    let n_top = *cfg.n_values.iter().max().expect("nonempty");
    for gs in &cfg.groups {
        let group = gs.build()?;
        let reach = cfg.support_radius * (n_top + 1);
        let lengths = metric_for(&group, reach)?;
        let mut ball_table = BallTable::new(group.clone());
        ball_table.extend_to(cfg.support_radius)?;
        let ball = ball_table.elements_lex(cfg.support_radius);

        let mut rng = stream(seed, &format!("leibniz/{}", group.descriptor()));
        let mut max_deviation = 0.0f64;
        let mut compositions = 0u64;
        for i in 0..cfg.tuples_per_group {
            let n = cfg.n_values[i as usize % cfg.n_values.len()];
            let k = cfg.k_values[i as usize % cfg.k_values.len()];
            let factors: Vec<ExactElement> = (0..n)
                .map(|_| random_exact_element(&mut rng, &group, &ball, 3))
                .collect::<Result<_>>()?;
            let vectors = vec![
                FinVector::basis(group.clone(), group.identity())?,
                FinVector::basis(group.clone(), random_ball_point(&mut rng, &ball))?,
            ];
            let rep = verify_leibniz(&factors, k, &vectors, &lengths, cfg.composition_cap)?;
            max_deviation = max_deviation.max(rep.max_deviation);
            compositions += rep.compositions;
        }
        let details = json!({
            "tuples": cfg.tuples_per_group,
            "max_deviation": max_deviation,
            "compositions": compositions,
        });
        report.push(&group.name(), max_deviation == 0.0, &details)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::GroupSpec;

    #[test]
    fn small_run_is_exact_on_both_group_kinds() {
        let cfg = LeibnizConfig {
            groups: vec![
                GroupSpec::FreeAbelian { rank: 2 },
                GroupSpec::SemidirectZ {
                    twist: vec![vec![-1, 0], vec![0, -1]],
                },
            ],
            tuples_per_group: 6,
            n_values: vec![2, 3],
            k_values: vec![1, 2],
            support_radius: 2,
            composition_cap: 100_000,
        };
        let r = run(&cfg, 5, None).unwrap();
        assert!(r.pass);
        assert_eq!(r.blocks.len(), 2);
        for b in &r.blocks {
            assert_eq!(b.details["max_deviation"], 0.0);
        }
    }
}
