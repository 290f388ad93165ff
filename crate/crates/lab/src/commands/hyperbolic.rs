//! Witness search for hyperbolic lattice automorphisms: find a vector whose
//! signed orbit sums stay distinct, then confirm the doubling of the
//! two-point product sets it seeds. Control matrices must yield no witness.

use crate::config::HyperbolicConfig;
use crate::report::Report;
use cqms_core::automorphism::{Action, GroupAutomorphism};
use cqms_core::entropy::{hyperbolic_witness_search, product_set_growth, DEFAULT_CARDINALITY_CAP};
use cqms_core::group::{Group, GroupElement, IntMatrix};
use cqms_core::Result;
use serde_json::json;
use std::path::Path;

pub fn run(cfg: &HyperbolicConfig, seed: u64, _cache_dir: Option<&Path>) -> Result<Report> {
    let mut report = Report::new("hyperbolic", seed, cfg)?;
    let m = IntMatrix::from_rows(&cfg.matrix)?;
    let ws = hyperbolic_witness_search(&m, cfg.search_radius, cfg.n_check)?;

    let mut chain_counts: Vec<u64> = Vec::new();
    let mut chain_ok = false;
    if let Some(w) = &ws.witness {
        let group = Group::free_abelian(m.dim())?;
        let auto = GroupAutomorphism::new(group.clone(), Action::Linear(m.clone()))?;
        let seed_set = vec![group.identity(), GroupElement::Vector(w.clone())];
        let trace = product_set_growth(&auto, &seed_set, cfg.n_check + 1, DEFAULT_CARDINALITY_CAP)?;
        chain_ok = !trace.truncated
            && trace
                .cardinalities
                .iter()
                .enumerate()
                .all(|(i, &c)| c == 1u64 << (i + 1));
        chain_counts = trace.cardinalities;
    }

    let pass = ws.hyperbolic && ws.witness.is_some() && chain_ok;
    let details = json!({
        "search": ws,
        "doubling_counts": chain_counts,
        "doubling_exact": chain_ok,
    });
    report.push("witness", pass, &details)?;

    for control in &cfg.controls {
        let mc = IntMatrix::from_rows(&control.matrix)?;
        let wsc = hyperbolic_witness_search(&mc, cfg.search_radius, cfg.n_check)?;
        report.push(
            &format!("control/{}", control.label),
            wsc.witness.is_none(),
            &json!({ "search": wsc }),
        )?;
    }
    Ok(report)
}
