//! Lipschitz certificates for automorphisms under the word metric, plus the
//! unipotent polynomial length bound and the zero-entropy certificate it
//! grants.

use super::metric_for;
use crate::config::LipschitzConfig;
use crate::report::Report;
use cqms_core::automorphism::{lipschitz_constant, polynomial_length_bound_check};
use cqms_core::entropy::entropy_upper_polynomial_zero;
use cqms_core::group::IntMatrix;
use cqms_core::Result;
use serde_json::json;
use std::path::Path;

pub fn run(cfg: &LipschitzConfig, seed: u64, _cache_dir: Option<&Path>) -> Result<Report> {
    let mut report = Report::new("lipschitz", seed, cfg)?;
    for case in &cfg.cases {
        let group = case.group.build()?;
        let auto = case.automorphism.build(&group)?;
        // Image lengths during the ball scan can exceed the scan radius by
        // the (unknown) constant itself; 8x headroom covers every case that
        // fits the enumeration budget at all.
        let lengths = metric_for(&group, case.validation_radius.saturating_mul(8))?;
        let cert = lipschitz_constant(&auto, &lengths, case.validation_radius)?;
        let pass = case.expected_lambda.map_or(true, |l| cert.lambda == l);
        let note = match case.expected_lambda {
            Some(l) => format!("lambda {} vs expected {l}", cert.lambda),
            None => format!("lambda {}", cert.lambda),
        };
        report.push(&case.label, pass, &json!({ "certificate": cert, "note": note }))?;
    }
    if let Some(pb) = &cfg.polynomial {
        let psi = IntMatrix::from_rows(&pb.rows)?;
        let rep = polynomial_length_bound_check(&psi, pb.ball_radius, pb.n_max)?;
        let zero = if rep.pass {
            Some(entropy_upper_polynomial_zero(&rep)?)
        } else {
            None
        };
        report.push(
            "polynomial-bound",
            rep.pass,
            &json!({ "bound": rep, "zero_certificate": zero }),
        )?;
    }
    Ok(report)
}
