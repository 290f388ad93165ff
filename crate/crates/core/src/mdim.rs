//! Metric-dimension slope estimates from covering counts over a delta grid.
//!
//! For order k the covering family at tolerance delta is the set of point
//! masses supported on the ball of radius floor(delta^(-1/k)). Counting
//! that family across a geometric delta grid and regressing log-count
//! against log(1/delta) gives the measured slope; the truncation radius
//! from the rapid-decay tail bound gives the matching upper slope.

use crate::error::{Error, Result};
use crate::fit::line_fit;
use crate::group::{ball_count, Group};
use crate::operator::tail_truncation_radius;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MdimGridRow {
    pub delta: f64,
    /// floor(delta^(-1/k)), at least 1.
    pub radius: u32,
    /// ln of the covering count (3/4 of the point masses on the ball).
    pub log_cover_count: f64,
    /// Truncation radius from the tail bound at this delta.
    pub tail_radius: u32,
    pub log_tail_count: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MdimSlopes {
    pub k: u32,
    pub growth_exponent: f64,
    pub c_hat: f64,
    /// Regression slope of the certified covering count.
    pub lower_slope: f64,
    /// Regression slope of the truncation-radius ball count.
    pub upper_slope: f64,
    /// Theoretical bracket (1/k, 2r/(2k-r)).
    pub bracket: (f64, f64),
    /// Slope over the coarse (large delta) half of the grid.
    pub coarse_half_slope: f64,
    /// Slope over the fine (small delta) half of the grid.
    pub fine_half_slope: f64,
    /// Set when the fine half grows more than twice as fast as the coarse
    /// half: the log-log plot is bending upward, not settling on a line.
    pub infinite_signature: bool,
    pub rows: Vec<MdimGridRow>,
}

/// Geometric grid of tolerances from lo to hi inclusive.
pub fn log_delta_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2 && lo > 0.0 && hi > lo);
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

pub fn mdim_slope_estimate(
    group: &Group,
    k: u32,
    growth_exponent: f64,
    delta_grid: &[f64],
    c_hat: f64,
) -> Result<MdimSlopes> {
    if !(growth_exponent > 0.0) || (k as f64) <= growth_exponent {
        return Err(Error::InvalidParameter(format!(
            "slope estimate needs k > growth exponent > 0, got k = {k}, r = {growth_exponent}"
        )));
    }
    if !(c_hat > 0.0) {
        return Err(Error::InvalidParameter(
            "tail constant estimate must be positive".into(),
        ));
    }
    let mut grid: Vec<f64> = delta_grid.to_vec();
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    grid.dedup();
    if grid.len() < 5 {
        return Err(Error::InvalidParameter(format!(
            "delta grid needs at least 5 distinct points, got {}",
            grid.len()
        )));
    }
    if grid[0] <= 0.0 || *grid.last().unwrap() >= 1.0 {
        return Err(Error::InvalidParameter(
            "delta grid must lie in (0,1)".into(),
        ));
    }
    if grid.last().unwrap() / grid[0] < 100.0 * (1.0 - 1e-9) {
        return Err(Error::InvalidParameter(
            "delta grid must span at least two decades".into(),
        ));
    }

    let p = growth_exponent / 2.0;
    let mut rows = Vec::with_capacity(grid.len());
    for &delta in &grid {
        // Exact decade points hit integer radii; nudge before flooring so
        // a one-ulp-low power does not drop a whole shell.
        let radius = (delta.powf(-1.0 / k as f64) + 1e-9).floor().max(1.0) as u32;
        let tail_radius = tail_truncation_radius(k, p, c_hat, delta)?;
        rows.push(MdimGridRow {
            delta,
            radius,
            log_cover_count: 0.75f64.ln() + ln_ball_count(group, radius)?,
            tail_radius,
            log_tail_count: ln_ball_count(group, tail_radius)?,
        });
    }

    let xs: Vec<f64> = rows.iter().map(|r| (1.0 / r.delta).ln()).collect();
    let lower_ys: Vec<f64> = rows.iter().map(|r| r.log_cover_count).collect();
    let upper_ys: Vec<f64> = rows.iter().map(|r| r.log_tail_count).collect();
    let lower_slope = line_fit(&xs, &lower_ys).slope;
    let upper_slope = line_fit(&xs, &upper_ys).slope;

    // Grid is ascending in delta, so the fine half sits at the front.
    let mid = (grid.len() / 2).max(2);
    let fine_half_slope = line_fit(&xs[..mid], &lower_ys[..mid]).slope;
    let coarse_half_slope =
        line_fit(&xs[grid.len() - mid..], &lower_ys[grid.len() - mid..]).slope;
    let infinite_signature = fine_half_slope > 2.0 * coarse_half_slope;

    let r = growth_exponent;
    Ok(MdimSlopes {
        k,
        growth_exponent,
        c_hat,
        lower_slope,
        upper_slope,
        bracket: (1.0 / k as f64, 2.0 * r / (2.0 * k as f64 - r)),
        coarse_half_slope,
        fine_half_slope,
        infinite_signature,
        rows,
    })
}

/// ln of the ball cardinality. Free-group counts overflow u128 well inside
/// the radii the tail bound produces, so those switch to the closed form
/// in log space once the exact integer count is out of range.
fn ln_ball_count(group: &Group, n: u32) -> Result<f64> {
    if let Some(c) = ball_count(group, n) {
        return Ok((c as f64).ln());
    }
    match group {
        Group::Free { rank } => {
            let m = *rank as f64;
            let q = 2.0 * m - 1.0;
            // (m q^n - 1)/(m - 1); the -1 is invisible at these sizes.
            Ok((m / (m - 1.0)).ln() + n as f64 * q.ln())
        }
        _ => Err(Error::InvalidParameter(format!(
            "no closed-form ball count for {}",
            group.name()
        ))),
    }
}
