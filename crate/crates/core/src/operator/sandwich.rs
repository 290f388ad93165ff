//! Certified two-sided estimates for the commutator seminorms, the tail
//! truncation radius, and the conjugation inequality check.
//!
//! Nothing here reports a point estimate: the lower side comes from the
//! cyclic vector or from compressions, the upper side from the weighted l1
//! norm, and consumers see the pair.

use super::compress::{compress, CompressedNormLower};
use crate::algebra::ComplexElement;
use crate::error::{Error, Result};
use crate::group::{GroupElement, WordLengths};
use serde::{Deserialize, Serialize};

/// Slack for float comparisons in the conjugation check, relative to the
/// right-hand side.
const AD_CHECK_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LowerMethod {
    WeightedL2,
    Compressed { radius: u32 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeminormEstimate {
    pub k: u32,
    pub lower: f64,
    pub lower_method: LowerMethod,
    /// Weighted l1 norm of the coefficients.
    pub upper: f64,
    /// Every compression evaluated for the lower side, in schedule order.
    pub schedule: Vec<CompressedNormLower>,
}

fn support_radius_extending(f: &ComplexElement, lengths: &mut WordLengths) -> Result<u32> {
    let mut r = 0u32;
    for g in f.support() {
        r = r.max(super::resolve_length(lengths, g)?);
    }
    Ok(r)
}

/// lower = max(cyclic-vector value, best compression over the schedule);
/// upper = weighted l1. The lower side never exceeds the upper side because
/// both bound the same operator norm from opposite sides.
pub fn seminorm_sandwich(
    f: &ComplexElement,
    k: u32,
    n_schedule: &[u32],
    lengths: &mut WordLengths,
) -> Result<SeminormEstimate> {
    support_radius_extending(f, lengths)?;
    let mut lower = f.weighted_l2(lengths, k)?;
    let mut lower_method = LowerMethod::WeightedL2;
    let mut schedule = Vec::with_capacity(n_schedule.len());
    for &n in n_schedule {
        let est = compress(f, k, n, lengths)?.norm_lower();
        if est.value > lower {
            lower = est.value;
            lower_method = LowerMethod::Compressed { radius: n };
        }
        schedule.push(est);
    }
    let upper = f.weighted_l1(lengths, k)?;
    Ok(SeminormEstimate {
        k,
        lower,
        lower_method,
        upper,
        schedule,
    })
}

/// Smallest tail radius guaranteeing that rapid decay pushes everything
/// beyond it below delta: ceil((2^p chat / delta)^(1/(k-p))), floored at 1.
/// The ceiling is taken with a 1e-9 guard so values that are integers up to
/// float noise do not get bumped a step too high.
pub fn tail_truncation_radius(k: u32, p: f64, c_hat: f64, delta: f64) -> Result<u32> {
    if !(p > 0.0) || (k as f64) <= p {
        return Err(Error::InvalidParameter(format!(
            "tail radius needs k > p > 0, got k = {k}, p = {p}"
        )));
    }
    if !(c_hat > 0.0) || !(delta > 0.0) {
        return Err(Error::InvalidParameter(
            "tail radius needs positive constant and delta".into(),
        ));
    }
    let x = (2.0f64.powf(p) * c_hat / delta).powf(1.0 / (k as f64 - p));
    Ok((x - 1e-9).ceil().max(1.0) as u32)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdInequalityReport {
    /// Certified lower estimate for the conjugated element at order k.
    pub lhs_lower: f64,
    /// Binomial majorant built from upper estimates of the original.
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
    pub conjugator_length: u32,
}

/// Checks that the order-k seminorm of the h-conjugate stays below the
/// binomial majorant sum over j of C(k,j) (2 l(h))^(k-j) times the order-j
/// upper estimate of f. The left side uses the certified lower estimate, so
/// a failure would be a genuine counterexample, not noise.
pub fn ad_inequality_check(
    h: &GroupElement,
    f: &ComplexElement,
    k: u32,
    n_schedule: &[u32],
    lengths: &mut WordLengths,
) -> Result<AdInequalityReport> {
    let conjugated = f.conjugated_by(h)?;
    let lhs = seminorm_sandwich(&conjugated, k, n_schedule, lengths)?.lower;

    let lh = super::resolve_length(lengths, h)?;
    let mut rhs = 0.0f64;
    for j in 0..=k {
        let b = binomial(k as u64, j as u64) as f64;
        let weight = (2.0 * lh as f64).powi((k - j) as i32);
        rhs += b * weight * f.weighted_l1(lengths, j)?;
    }

    let pass = lhs <= rhs + AD_CHECK_SLACK * rhs.max(1.0);
    Ok(AdInequalityReport {
        lhs_lower: lhs,
        rhs,
        margin: rhs - lhs,
        pass,
        conjugator_length: lh,
    })
}

fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 1..=k {
        acc = acc * (n - k + i) / i;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Group, IntMatrix};
    use num::complex::Complex64;

    fn z1() -> Group {
        Group::free_abelian(1).unwrap()
    }

    fn v(x: i64) -> GroupElement {
        GroupElement::Vector(vec![x])
    }

    #[test]
    fn point_mass_sandwich_is_tight() {
        let mut lens = WordLengths::new(z1());
        for (x, k) in [(3i64, 1u32), (5, 2), (2, 4)] {
            let f = ComplexElement::delta(z1(), v(x)).unwrap();
            let est = seminorm_sandwich(&f, k, &[], &mut lens).unwrap();
            let expected = (x as f64).powi(k as i32);
            assert_eq!(est.lower, expected);
            assert_eq!(est.upper, expected);
            assert_eq!(est.lower_method, LowerMethod::WeightedL2);
        }
    }

    #[test]
    fn identity_mass_has_zero_seminorm() {
        let mut lens = WordLengths::new(z1());
        let f = ComplexElement::from_terms(z1(), vec![(v(0), Complex64::new(2.5, -1.0))])
            .unwrap();
        let est = seminorm_sandwich(&f, 2, &[4], &mut lens).unwrap();
        assert_eq!(est.lower, 0.0);
        assert_eq!(est.upper, 0.0);
    }

    #[test]
    fn generator_pair_sandwich_brackets_two() {
        let mut lens = WordLengths::new(z1());
        let f = ComplexElement::from_terms(
            z1(),
            vec![
                (v(1), Complex64::new(1.0, 0.0)),
                (v(-1), Complex64::new(1.0, 0.0)),
            ],
        )
        .unwrap();
        let est = seminorm_sandwich(&f, 0, &[16], &mut lens).unwrap();
        assert_eq!(est.upper, 2.0);
        assert!(est.lower > 1.9 && est.lower < 2.0);
        assert!(matches!(est.lower_method, LowerMethod::Compressed { radius: 16 }));
    }

    #[test]
    fn tail_radius_reference_points() {
        assert_eq!(tail_truncation_radius(3, 1.0, 1.0, 0.5).unwrap(), 2);
        assert_eq!(tail_truncation_radius(4, 2.0, 2.0, 0.1).unwrap(), 9);
        assert_eq!(tail_truncation_radius(2, 1.0, 1.0, f64::INFINITY).unwrap(), 1);
        assert!(tail_truncation_radius(2, 2.0, 1.0, 0.5).is_err());
        assert!(tail_truncation_radius(3, 0.0, 1.0, 0.5).is_err());
        assert!(tail_truncation_radius(3, 1.0, -1.0, 0.5).is_err());
    }

    #[test]
    fn conjugation_by_identity_passes() {
        let mut lens = WordLengths::new(z1());
        let f = ComplexElement::from_terms(
            z1(),
            vec![(v(2), Complex64::new(1.0, 0.5)), (v(-1), Complex64::new(0.3, 0.0))],
        )
        .unwrap();
        let rep = ad_inequality_check(&v(0), &f, 2, &[], &mut lens).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.conjugator_length, 0);
        // With h = e the j = k term alone dominates the left side.
        assert!(rep.margin >= 0.0);
    }

    #[test]
    fn conjugated_point_mass_respects_binomial_majorant() {
        let g = Group::semidirect_z(IntMatrix::neg_identity(2)).unwrap();
        let mut lens = WordLengths::new(g.clone());
        let t = GroupElement::Semi { v: vec![0, 0], k: 1 };
        let x = GroupElement::Semi { v: vec![2, -1], k: 0 };
        let f = ComplexElement::delta(g, x).unwrap();
        for k in 1..=3u32 {
            let rep = ad_inequality_check(&t, &f, k, &[], &mut lens).unwrap();
            assert!(rep.pass, "k = {k}: lhs {} rhs {}", rep.lhs_lower, rep.rhs);
        }
    }

    #[test]
    fn binomial_small_table() {
        assert_eq!(binomial(4, 0), 1);
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(5, 3), 10);
        assert_eq!(binomial(6, 6), 1);
    }
}
