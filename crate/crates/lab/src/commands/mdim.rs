//! Metric-dimension slope runs: covering counts along a tolerance grid,
//! slopes from log-log fits, judged against the theoretical bracket or the
//! exponential-growth signature.

use crate::config::{MdimConfig, MdimExpect};
use crate::report::Report;
use cqms_core::mdim::{log_delta_grid, mdim_slope_estimate};
use cqms_core::Result;
use serde_json::json;
use std::path::Path;

pub fn run(cfg: &MdimConfig, seed: u64, _cache_dir: Option<&Path>) -> Result<Report> {
    let mut report = Report::new("mdim", seed, cfg)?;
    for case in &cfg.runs {
        let group = case.group.build()?;
        let grid = log_delta_grid(case.grid_lo, case.grid_hi, case.grid_points);
        let slopes = mdim_slope_estimate(&group, case.k, case.growth_exponent, &grid, case.c_hat)?;
        let (pass, note) = match &case.expect {
            MdimExpect::SlopeWithinBracket { slack } => {
                let (lo, hi) = slopes.bracket;
                let inside = slopes.lower_slope >= lo - slack
                    && slopes.lower_slope <= hi + slack
                    && !slopes.infinite_signature;
                (
                    inside,
                    format!(
                        "lower slope {:.4} against [{:.4}, {:.4}] with slack {slack}",
                        slopes.lower_slope, lo, hi
                    ),
                )
            }
            MdimExpect::InfiniteSignature => (
                slopes.infinite_signature,
                format!(
                    "fine-half slope {:.4} vs coarse-half {:.4}",
                    slopes.fine_half_slope, slopes.coarse_half_slope
                ),
            ),
        };
        report.push(&case.label, pass, &json!({ "slopes": slopes, "note": note }))?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{GroupSpec, MdimRun};

    #[test]
    fn line_slope_sits_in_bracket_and_free_group_flags_infinite() {
        let cfg = MdimConfig {
            runs: vec![
                MdimRun {
                    label: "line k2".into(),
                    group: GroupSpec::FreeAbelian { rank: 1 },
                    k: 2,
                    growth_exponent: 1.0,
                    c_hat: 2.0,
                    grid_lo: 1e-4,
                    grid_hi: 1e-1,
                    grid_points: 8,
                    expect: MdimExpect::SlopeWithinBracket { slack: 0.05 },
                },
                MdimRun {
                    label: "free k3".into(),
                    group: GroupSpec::Free { rank: 2 },
                    k: 3,
                    growth_exponent: 2.0,
                    c_hat: 2.0,
                    grid_lo: 1e-4,
                    grid_hi: 1e-1,
                    grid_points: 8,
                    expect: MdimExpect::InfiniteSignature,
                },
            ],
        };
        let r = run(&cfg, 1, None).unwrap();
        assert!(r.pass, "{}", serde_json::to_string(&r.blocks).unwrap());
    }
}
