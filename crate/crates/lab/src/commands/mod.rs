//! One module per experiment command. Each `run` consumes its config
//! section plus the root seed and returns a [`Report`](crate::report::Report)
//! whose blocks carry the pass/fail verdicts.

pub mod entropy;
pub mod growth;
pub mod hyperbolic;
pub mod leibniz;
pub mod lipschitz;
pub mod mdim;
pub mod seminorm;

use crate::config::ExperimentConfig;
use crate::report::Report;
use cqms_core::group::{Group, WordLengths};
use cqms_core::Result;
use std::path::Path;

/// Radius out to which the sign-flip length formula is cross-checked
/// against BFS before being trusted everywhere.
const FORMULA_VALIDATION_RADIUS: u32 = 6;

/// Length oracle ready for queries out to `reach`. Sign-twist semidirect
/// groups get the validated closed formula, which removes the horizon;
/// other semidirect groups fall back to BFS tables.
pub(crate) fn metric_for(group: &Group, reach: u32) -> Result<WordLengths> {
    let mut lengths = WordLengths::new(group.clone());
    match group {
        Group::SemidirectZ { twist, .. } if twist.is_neg_identity() => {
            lengths.validate_sign_flip_formula(FORMULA_VALIDATION_RADIUS)?;
        }
        Group::SemidirectZ { .. } => lengths.ensure_radius(reach)?,
        _ => {}
    }
    Ok(lengths)
}

/// Run every section present in the config, in a fixed order so suite
/// reports always list commands the same way.
pub fn run_suite(cfg: &ExperimentConfig, seed: u64, cache_dir: Option<&Path>) -> Result<Vec<Report>> {
    let mut reports = Vec::new();
    if let Some(c) = &cfg.growth {
        reports.push(growth::run(c, seed, cache_dir)?);
    }
    if let Some(c) = &cfg.leibniz {
        reports.push(leibniz::run(c, seed, cache_dir)?);
    }
    if let Some(c) = &cfg.seminorm {
        reports.push(seminorm::run(c, seed, cache_dir)?);
    }
    if let Some(c) = &cfg.mdim {
        reports.push(mdim::run(c, seed, cache_dir)?);
    }
    if let Some(c) = &cfg.entropy {
        reports.push(entropy::run(c, seed, cache_dir)?);
    }
    if let Some(c) = &cfg.hyperbolic {
        reports.push(hyperbolic::run(c, seed, cache_dir)?);
    }
    if let Some(c) = &cfg.lipschitz {
        reports.push(lipschitz::run(c, seed, cache_dir)?);
    }
    Ok(reports)
}
