//! Seminorm estimates on random elements: point-mass tightness, the
//! lower/upper ordering of the certified bounds, the Fourier cross-check on
//! lattice groups, and the conjugation inequality.

use super::metric_for;
use crate::cache::cached_ball;
use crate::config::{
    ConjugationConfig, FourierConfig, OrderingConfig, SeminormConfig, TightnessConfig,
};
use crate::report::Report;
use crate::rng::stream;
use crate::sampling::{damped_fourier_element, random_ball_point, random_complex_element};
use cqms_core::group::WordLengths;
use cqms_core::operator::{ad_inequality_check, compress, dft_norm_bounds, seminorm_sandwich};
use cqms_core::Result;
use serde_json::json;
use std::path::Path;

pub fn run(cfg: &SeminormConfig, seed: u64, cache_dir: Option<&Path>) -> Result<Report> {
    let mut report = Report::new("seminorm", seed, cfg)?;
    if let Some(t) = &cfg.tightness {
        tightness(t, seed, cache_dir, &mut report)?;
    }
    if let Some(o) = &cfg.ordering {
        ordering(o, seed, cache_dir, &mut report)?;
    }
    if let Some(f) = &cfg.fourier {
        fourier(f, seed, &mut report)?;
    }
    if let Some(c) = &cfg.conjugation {
        conjugation(c, seed, cache_dir, &mut report)?;
    }
    Ok(report)
}

/// On a point mass at g both certified sides collapse to l(g)^k, so the
/// comparison is exact float equality, not a tolerance.
fn tightness(
    cfg: &TightnessConfig,
    seed: u64,
    cache_dir: Option<&Path>,
    report: &mut Report,
) -> Result<()> {
    for gs in &cfg.groups {
        let group = gs.build()?;
        let (table, stamp) = cached_ball(&group, cfg.ball_radius, cache_dir)?;
        report.stamp(stamp);
        let ball = table.elements_lex(cfg.ball_radius);
        let mut lengths = metric_for(&group, cfg.ball_radius)?;

        let mut rng = stream(seed, &format!("seminorm/tightness/{}", group.descriptor()));
        let mut mismatches = 0u32;
        let mut first_mismatch = None;
        for i in 0..cfg.samples_per_group {
            let g = random_ball_point(&mut rng, &ball);
            let k = cfg.k_values[i as usize % cfg.k_values.len()];
            let f = cqms_core::algebra::ComplexElement::delta(group.clone(), g.clone())?;
            let est = seminorm_sandwich(&f, k, &[], &mut lengths)?;
            let expected = (lengths.length(&g)? as f64).powi(k as i32);
            if est.lower != expected || est.upper != expected {
                mismatches += 1;
                first_mismatch.get_or_insert(json!({
                    "element": format!("{g}"),
                    "k": k,
                    "expected": expected,
                    "lower": est.lower,
                    "upper": est.upper,
                }));
            }
        }
        let details = json!({
            "samples": cfg.samples_per_group,
            "mismatches": mismatches,
            "first_mismatch": first_mismatch,
        });
        report.push(&format!("tightness/{}", group.name()), mismatches == 0, &details)?;
    }
    Ok(())
}

/// The cyclic-vector value must sit below every compression, compressions
/// must be nondecreasing in the domain radius, and all of them must stay
/// below the coefficient majorant. Slack is relative to the majorant.
fn ordering(
    cfg: &OrderingConfig,
    seed: u64,
    cache_dir: Option<&Path>,
    report: &mut Report,
) -> Result<()> {
    for fam in &cfg.families {
        let group = fam.group.build()?;
        let (table, stamp) = cached_ball(&group, cfg.support_radius, cache_dir)?;
        report.stamp(stamp);
        let ball = table.elements_lex(cfg.support_radius);
        let max_n = cfg.schedule.iter().copied().max().unwrap_or(1);
        let mut lengths = metric_for(&group, max_n + cfg.support_radius)?;

        let mut rng = stream(seed, &format!("seminorm/ordering/{}", group.descriptor()));
        let mut violations = 0u32;
        let mut min_above_l2 = f64::INFINITY;
        let mut min_below_l1 = f64::INFINITY;
        let mut min_step = f64::INFINITY;
        let mut unconverged = 0u32;
        for i in 0..fam.samples {
            let f = random_complex_element(&mut rng, &group, &ball, cfg.max_terms as usize)?;
            let k = cfg.k_values[i as usize % cfg.k_values.len()];
            let est = seminorm_sandwich(&f, k, &cfg.schedule, &mut lengths)?;
            let l2 = f.weighted_l2(&lengths, k)?;
            let l1 = est.upper;
            let scale = l1.max(1.0);
            let slack = cfg.slack * scale;
            let step_slack = cfg.monotonicity_slack * scale;
            let mut prev = f64::NEG_INFINITY;
            for c in &est.schedule {
                if !c.converged {
                    unconverged += 1;
                }
                min_above_l2 = min_above_l2.min(c.value - l2);
                min_below_l1 = min_below_l1.min(l1 - c.value);
                min_step = min_step.min(c.value - prev);
                if c.value < l2 - slack || c.value > l1 + slack || c.value < prev - step_slack {
                    violations += 1;
                }
                prev = c.value;
            }
        }
        let details = json!({
            "samples": fam.samples,
            "violations": violations,
            "min_compression_minus_l2": min_above_l2,
            "min_l1_minus_compression": min_below_l1,
            "min_schedule_step": min_step,
            "unconverged": unconverged,
        });
        report.push(&format!("ordering/{}", group.name()), violations == 0, &details)?;
    }
    Ok(())
}

/// On Z^d the operator norm has an independent route through the Fourier
/// transform: a grid maximum below, plus a derivative correction above. The
/// radius-n compression must land between them and close to the grid value.
fn fourier(cfg: &FourierConfig, seed: u64, report: &mut Report) -> Result<()> {
    for (dim, samples, grid) in [
        (1usize, cfg.line_samples, cfg.line_grid),
        (2usize, cfg.plane_samples, cfg.plane_grid),
    ] {
        if samples == 0 {
            continue;
        }
        let mut rng = stream(seed, &format!("seminorm/fourier/d{dim}"));
        let mut worst_undershoot = f64::NEG_INFINITY;
        let mut worst_gap = 0.0f64;
        let mut overshoots = 0u32;
        let mut unconverged = 0u32;
        let mut label = String::new();
        for _ in 0..samples {
            let f = damped_fourier_element(&mut rng, dim, cfg.support_radius)?;
            label = format!("fourier/{}", f.group().name());
            let mut lengths = WordLengths::new(f.group().clone());
            let sigma = compress(&f, 0, cfg.compression_radius, &mut lengths)?
                .norm_lower();
            if !sigma.converged {
                unconverged += 1;
            }
            let (lo, hi) = dft_norm_bounds(&f, grid)?;
            worst_undershoot = worst_undershoot.max(lo - sigma.value);
            worst_gap = worst_gap.max((sigma.value - lo).abs());
            if sigma.value > hi {
                overshoots += 1;
            }
        }
        let pass = worst_undershoot <= cfg.lower_slack && worst_gap <= cfg.gap_tol && overshoots == 0;
        let details = json!({
            "samples": samples,
            "grid_per_dim": grid,
            "worst_undershoot": worst_undershoot,
            "worst_gap": worst_gap,
            "overshoots": overshoots,
            "unconverged": unconverged,
        });
        report.push(&label, pass, &details)?;
    }
    Ok(())
}

fn conjugation(
    cfg: &ConjugationConfig,
    seed: u64,
    cache_dir: Option<&Path>,
    report: &mut Report,
) -> Result<()> {
    let group = cfg.group.build()?;
    let radius = cfg.h_radius.max(cfg.support_radius);
    let (table, stamp) = cached_ball(&group, radius, cache_dir)?;
    report.stamp(stamp);
    let conjugators = table.elements_lex(cfg.h_radius);
    let supports = table.elements_lex(cfg.support_radius);
    let max_n = cfg.schedule.iter().copied().max().unwrap_or(1);
    let mut lengths = metric_for(&group, max_n + cfg.support_radius + 2 * cfg.h_radius)?;

    let mut rng = stream(seed, &format!("seminorm/conjugation/{}", group.descriptor()));
    let mut failures = 0u32;
    let mut min_margin = f64::INFINITY;
    for i in 0..cfg.samples {
        let h = random_ball_point(&mut rng, &conjugators);
        let f = random_complex_element(&mut rng, &group, &supports, cfg.max_terms as usize)?;
        let k = cfg.k_values[i as usize % cfg.k_values.len()];
        let rep = ad_inequality_check(&h, &f, k, &cfg.schedule, &mut lengths)?;
        min_margin = min_margin.min(rep.margin);
        if !rep.pass {
            failures += 1;
        }
    }
    let details = json!({
        "samples": cfg.samples,
        "failures": failures,
        "min_margin": min_margin,
    });
    report.push(
        &format!("conjugation/{}", group.name()),
        failures == 0,
        &details,
    )?;
    Ok(())
}
