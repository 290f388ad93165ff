//! Product-set entropy runs: exact cardinality traces for each scenario,
//! a conservative rate from the tail slopes, and whichever upper or
//! comparison certificate the scenario asks for.

use super::metric_for;
use crate::config::{EntropyConfig, EntropyScenario, EntropyVerdict};
use crate::report::Report;
use cqms_core::automorphism::{eigen_entropy, lipschitz_constant};
use cqms_core::entropy::{entropy_lower_estimate, entropy_upper_growth, product_set_growth};
use cqms_core::fit::line_fit;
use cqms_core::{Error, Result};
use serde_json::{json, Value};
use std::path::Path;

pub fn run(cfg: &EntropyConfig, seed: u64, _cache_dir: Option<&Path>) -> Result<Report> {
    let mut report = Report::new("entropy", seed, cfg)?;
    for sc in &cfg.scenarios {
        let group = sc.group.build()?;
        let auto = sc.automorphism.build(&group)?;
        let seed_set = sc.seed_set.build(&group)?;
        let trace = product_set_growth(&auto, &seed_set, sc.n_max, sc.cap)?;
        let lower = entropy_lower_estimate(&trace, sc.delta)?;
        let (pass, extra) = judge(sc, &trace.cardinalities, lower.rate)?;
        let details = json!({
            "cardinalities": trace.cardinalities,
            "truncated": trace.truncated,
            "lower": lower,
            "verdict": extra,
        });
        report.push(&sc.label, pass && !trace.truncated, &details)?;
    }
    Ok(report)
}

fn judge(sc: &EntropyScenario, counts: &[u64], rate: f64) -> Result<(bool, Value)> {
    match &sc.verdict {
        EntropyVerdict::RateNear { value, tol } => Ok((
            (rate - value).abs() <= *tol,
            json!({ "target": value, "tol": tol, "rate": rate }),
        )),
        EntropyVerdict::RateBelow {
            max,
            max_fit_residual,
        } => {
            let fit = log_log_tail_fit(counts);
            let pass = rate <= *max && fit.rms_residual <= *max_fit_residual;
            Ok((
                pass,
                json!({
                    "max": max,
                    "rate": rate,
                    "fit_exponent": fit.slope,
                    "fit_residual": fit.rms_residual,
                }),
            ))
        }
        EntropyVerdict::BracketAgainstGrowthCertificate {
            lower_value,
            lower_tol,
            growth_exponent,
            validation_radius,
        } => {
            let group = sc.group.build()?;
            let auto = sc.automorphism.build(&group)?;
            let lengths = metric_for(&group, *validation_radius)?;
            let cert = lipschitz_constant(&auto, &lengths, *validation_radius)?;
            let upper = entropy_upper_growth(&cert, *growth_exponent)?;
            let pass = (rate - lower_value).abs() <= *lower_tol && rate <= upper.value;
            Ok((
                pass,
                json!({
                    "rate": rate,
                    "target": lower_value,
                    "tol": lower_tol,
                    "lambda": cert.lambda,
                    "upper": upper,
                }),
            ))
        }
        EntropyVerdict::SpectralCeiling { margin } => {
            let m = sc
                .automorphism
                .matrix()
                .ok_or_else(|| {
                    Error::InvalidParameter(
                        "spectral ceiling needs a matrix automorphism".into(),
                    )
                })??;
            let ee = eigen_entropy(&m)?;
            let pass = rate <= ee.entropy + margin && ee.residual < 1e-6;
            Ok((
                pass,
                json!({
                    "rate": rate,
                    "spectral_entropy": ee.entropy,
                    "margin": margin,
                    "residual": ee.residual,
                    "moduli": ee.moduli,
                }),
            ))
        }
    }
}

/// Fit of log count against log step over the last two thirds of the trace,
/// where the early transient has died off. Polynomially growing traces land
/// on a line; the residual quantifies how well.
fn log_log_tail_fit(counts: &[u64]) -> cqms_core::fit::LineFit {
    let start = counts.len() / 3;
    let xs: Vec<f64> = (start..counts.len()).map(|i| ((i + 1) as f64).ln()).collect();
    let ys: Vec<f64> = counts[start..].iter().map(|&c| (c as f64).ln()).collect();
    line_fit(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{AutomorphismSpec, ElementSpec, GroupSpec, SeedSpec};

    fn cat_rows() -> Vec<Vec<i64>> {
        vec![vec![2, 1], vec![1, 1]]
    }

    #[test]
    fn doubling_seed_meets_rate_near_log_two() {
        let cfg = EntropyConfig {
            scenarios: vec![EntropyScenario {
                label: "cat doubling".into(),
                group: GroupSpec::FreeAbelian { rank: 2 },
                automorphism: AutomorphismSpec::Matrix { rows: cat_rows() },
                seed_set: SeedSpec::Elements {
                    elements: vec![ElementSpec::Vector { coords: vec![1, 0] }],
                    include_identity: true,
                },
                n_max: 12,
                cap: 10_000_000,
                delta: 0.5,
                verdict: EntropyVerdict::RateNear {
                    value: 2f64.ln(),
                    tol: 1e-6,
                },
            }],
        };
        let r = run(&cfg, 1, None).unwrap();
        assert!(r.pass, "{}", r.blocks[0].details);
    }

    #[test]
    fn identity_rate_is_flagged_small_with_linear_counts() {
        let cfg = EntropyConfig {
            scenarios: vec![EntropyScenario {
                label: "identity line".into(),
                group: GroupSpec::FreeAbelian { rank: 1 },
                automorphism: AutomorphismSpec::Identity,
                seed_set: SeedSpec::Elements {
                    elements: vec![ElementSpec::Vector { coords: vec![1] }],
                    include_identity: true,
                },
                n_max: 60,
                cap: 10_000_000,
                delta: 0.5,
                verdict: EntropyVerdict::RateBelow {
                    max: 0.02,
                    max_fit_residual: 0.1,
                },
            }],
        };
        let r = run(&cfg, 1, None).unwrap();
        assert!(r.pass, "{}", r.blocks[0].details);
    }

    #[test]
    fn spectral_ceiling_covers_the_cat_rate() {
        let cfg = EntropyConfig {
            scenarios: vec![EntropyScenario {
                label: "cat ceiling".into(),
                group: GroupSpec::FreeAbelian { rank: 2 },
                automorphism: AutomorphismSpec::Matrix { rows: cat_rows() },
                seed_set: SeedSpec::Elements {
                    elements: vec![
                        ElementSpec::Vector { coords: vec![1, 0] },
                        ElementSpec::Vector { coords: vec![0, 1] },
                    ],
                    include_identity: true,
                },
                n_max: 12,
                cap: 10_000_000,
                delta: 0.5,
                verdict: EntropyVerdict::SpectralCeiling { margin: 0.02 },
            }],
        };
        let r = run(&cfg, 1, None).unwrap();
        assert!(r.pass, "{}", r.blocks[0].details);
    }
}
