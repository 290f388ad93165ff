//! Ball-growth measurements: exact counts, then a growth-type fit on a
//! radius window, judged against the expectation declared in the config.

use crate::cache::cached_ball;
use crate::config::{GrowthConfig, GrowthExpect, GrowthScenario};
use crate::report::Report;
use cqms_core::group::{ball_count, growth_exponent_fit, growth_sequence, FitWindow, Group, GrowthFit, GrowthSequence};
use cqms_core::Result;
use serde_json::json;
use std::path::Path;

pub fn run(cfg: &GrowthConfig, seed: u64, cache_dir: Option<&Path>) -> Result<Report> {
    let mut report = Report::new("growth", seed, cfg)?;
    for sc in &cfg.scenarios {
        let group = sc.group.build()?;
        let (mut table, stamp) = cached_ball(&group, sc.n_max, cache_dir)?;
        report.stamp(stamp);
        let seq = growth_sequence(&mut table, sc.n_max)?;
        let window = sc
            .window
            .map(|w| FitWindow { lo: w[0], hi: w[1] })
            .unwrap_or_else(|| FitWindow::tail_of(sc.n_max));
        let fit = growth_exponent_fit(&seq, window)?;
        let (pass, note) = judge(sc, &group, &seq, &fit);
        let details = json!({
            "counts": seq.counts,
            "window": window,
            "fit": fit,
            "note": note,
        });
        report.push(&sc.label, pass, &details)?;
    }
    Ok(report)
}

fn judge(
    sc: &GrowthScenario,
    group: &Group,
    seq: &GrowthSequence,
    fit: &GrowthFit,
) -> (bool, String) {
    match &sc.expect {
        GrowthExpect::ClosedFormExact => {
            for (n, &count) in seq.counts.iter().enumerate() {
                match ball_count(group, n as u32) {
                    Some(expected) if expected == count as u128 => {}
                    Some(expected) => {
                        return (
                            false,
                            format!("count {count} at radius {n} differs from closed form {expected}"),
                        )
                    }
                    None => return (false, "group has no closed-form ball count".into()),
                }
            }
            (true, format!("all {} counts match the closed form", seq.counts.len()))
        }
        GrowthExpect::PolynomialExponentNear { value, tol } => match fit {
            GrowthFit::Polynomial { exponent, .. } => (
                (exponent - value).abs() <= *tol,
                format!("exponent {exponent:.4} vs {value} within {tol}"),
            ),
            other => (false, format!("expected polynomial growth, fit was {other:?}")),
        },
        GrowthExpect::PolynomialExponentAtMost { limit } => match fit {
            GrowthFit::Polynomial { exponent, .. } => (
                *exponent <= *limit,
                format!("exponent {exponent:.4} vs limit {limit}"),
            ),
            other => (false, format!("expected polynomial growth, fit was {other:?}")),
        },
        GrowthExpect::ExponentialRateAtLeast { min } => match fit {
            GrowthFit::Exponential { rate } => {
                (*rate >= *min, format!("rate {rate:.4} vs floor {min}"))
            }
            other => (false, format!("expected exponential growth, fit was {other:?}")),
        },
    }
}
