//! Ball growth sequences and growth-type classification.

use super::{BallTable, Group};
use crate::error::{Error, Result};
use crate::fit::line_fit;
use serde::{Deserialize, Serialize};

/// Linear-in-n slope of `log |B_n|` at or above which the counts are
/// classified as exponential growth. Separates free-group rates (about
/// 1.1) from the decaying slopes of polynomial families on the window
/// sizes used here.
pub const EXPONENTIAL_RATE_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GrowthSequence {
    /// Cumulative ball cardinalities, index = radius.
    pub counts: Vec<u64>,
}

/// Inclusive radius window used by the fits.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FitWindow {
    pub lo: u32,
    pub hi: u32,
}

impl FitWindow {
    /// Default window: drop the first quarter of the radii, where boundary
    /// effects dominate.
    pub fn tail_of(n_max: u32) -> Self {
        FitWindow {
            lo: (n_max / 4).max(1),
            hi: n_max,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum GrowthFit {
    /// `log |B_n|` grows linearly in `n` with the given slope.
    Exponential { rate: f64 },
    /// `log |B_n|` is linear in `log n`; slope is the growth exponent.
    Polynomial { exponent: f64, rms_residual: f64 },
    /// Counts stopped increasing on the window, as in a finite group.
    Bounded,
}

/// Exact cumulative ball counts out to `n_max`, by BFS enumeration.
pub fn growth_sequence(table: &mut BallTable, n_max: u32) -> Result<GrowthSequence> {
    if n_max < 2 {
        return Err(Error::InvalidParameter(
            "growth sequence needs n_max >= 2".into(),
        ));
    }
    table.extend_to(n_max)?;
    let counts = table.cumulative_counts()[..=n_max as usize].to_vec();
    Ok(GrowthSequence { counts })
}

/// Closed-form ball count where one exists (`Z^d` and `F_m`); `None` means
/// the only route is enumeration.
pub fn ball_count(group: &Group, n: u32) -> Option<u128> {
    match group {
        Group::FreeAbelian { rank } => {
            let mut acc: u128 = 0;
            for j in 0..=(*rank).min(n as usize) {
                acc = acc.checked_add(
                    (1u128 << j)
                        .checked_mul(binomial_u128(*rank as u128, j as u128)?)?
                        .checked_mul(binomial_u128(n as u128, j as u128)?)?,
                )?;
            }
            Some(acc)
        }
        Group::Free { rank } => {
            // 1 + sum_{j=1..n} 2m (2m-1)^(j-1)
            let m = *rank as u128;
            let mut acc: u128 = 1;
            let mut sphere: u128 = 2 * m;
            for _ in 1..=n {
                acc = acc.checked_add(sphere)?;
                sphere = sphere.checked_mul(2 * m - 1)?;
            }
            Some(acc)
        }
        Group::SemidirectZ { .. } => None,
    }
}

fn binomial_u128(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Classify a growth sequence on the given radius window.
///
/// The discriminator is the least-squares slope of `log |B_n|` against `n`:
/// at or above [`EXPONENTIAL_RATE_THRESHOLD`] the sequence is exponential
/// with that rate, otherwise the exponent is fit in log-log coordinates.
pub fn growth_exponent_fit(seq: &GrowthSequence, window: FitWindow) -> Result<GrowthFit> {
    let n_max = seq.counts.len() as u32 - 1;
    if window.lo < 1 || window.lo >= window.hi || window.hi > n_max {
        return Err(Error::InvalidParameter(format!(
            "window [{}, {}] invalid for n_max {}",
            window.lo, window.hi, n_max
        )));
    }
    let radii: Vec<u32> = (window.lo..=window.hi).collect();
    let logs: Vec<f64> = radii
        .iter()
        .map(|&r| (seq.counts[r as usize] as f64).ln())
        .collect();
    if seq.counts[window.lo as usize] == seq.counts[window.hi as usize] {
        return Ok(GrowthFit::Bounded);
    }
    let ns: Vec<f64> = radii.iter().map(|&r| r as f64).collect();
    let lin = line_fit(&ns, &logs);
    if lin.slope >= EXPONENTIAL_RATE_THRESHOLD {
        return Ok(GrowthFit::Exponential { rate: lin.slope });
    }
    let log_ns: Vec<f64> = radii.iter().map(|&r| (r as f64).ln()).collect();
    let ll = line_fit(&log_ns, &logs);
    Ok(GrowthFit::Polynomial {
        exponent: ll.slope,
        rms_residual: ll.rms_residual,
    })
}
