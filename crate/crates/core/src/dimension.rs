//! Certified brackets for the delta-approximation dimension of a finite
//! vector family.
//!
//! The exact optimum is a minimum over all subspaces and is not computed.
//! What is computed is a pair that provably brackets it: a counting lower
//! bound from an exactly orthonormal subfamily, and a singular-value upper
//! bound from projecting onto a top singular subspace.

use crate::error::{Error, Result};
use crate::operator::FinVector;
use nalgebra::DMatrix;
use num::complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LowerTag {
    /// ceil((1 - delta^2) m) for an exactly orthonormal subfamily of size m.
    VoiculescuOrthonormal,
    /// Some vector has norm at least delta, so the zero subspace fails.
    SpanTrivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum UpperTag {
    /// Count of singular values at least delta; projecting onto that many
    /// left singular vectors moves every column by less than delta.
    SvdThreshold,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DimensionEstimate {
    pub delta: f64,
    pub lower: usize,
    pub lower_tag: LowerTag,
    /// Size of the exactly orthonormal subfamily behind the lower bound.
    pub orthonormal_count: usize,
    pub upper: usize,
    pub upper_tag: UpperTag,
    pub vector_count: usize,
    /// Singular values of the column family, descending.
    pub singular_values: Vec<f64>,
}

/// Bracket the smallest dimension of a subspace that passes within delta of
/// every vector in the family. The approximation is in the strict sense, so
/// the singular-value cutoff requires sigma < delta to drop a direction.
pub fn dimension_estimate(
    vectors: &[FinVector<Complex64>],
    delta: f64,
) -> Result<DimensionEstimate> {
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "approximation tolerance must be positive, got {delta}"
        )));
    }
    for pair in vectors.windows(2) {
        if pair[0].group() != pair[1].group() {
            return Err(Error::ElementMismatch {
                expected: pair[0].group().name(),
                got: pair[1].group().name(),
            });
        }
    }

    let m = vectors.len();
    let singular_values = if m == 0 {
        Vec::new()
    } else {
        // Singular values via the Hermitian Gram matrix; m stays small
        // here (vector families, not ball dimensions).
        let gram = DMatrix::from_fn(m, m, |i, j| inner(&vectors[i], &vectors[j]));
        let eig = gram.symmetric_eigen();
        let mut sv: Vec<f64> = eig
            .eigenvalues
            .iter()
            .map(|&l| l.max(0.0).sqrt())
            .collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        sv
    };
    let upper = singular_values.iter().take_while(|&&s| s >= delta).count();

    let orthonormal_count = greedy_orthonormal_count(vectors);
    let voiculescu = ceil_guarded((1.0 - delta * delta) * orthonormal_count as f64);
    let (lower, lower_tag) = if voiculescu >= 1 {
        (voiculescu, LowerTag::VoiculescuOrthonormal)
    } else if vectors.iter().any(|v| v.norm() >= delta) {
        (1, LowerTag::SpanTrivial)
    } else {
        (0, LowerTag::VoiculescuOrthonormal)
    };

    Ok(DimensionEstimate {
        delta,
        lower,
        lower_tag,
        orthonormal_count,
        upper,
        upper_tag: UpperTag::SvdThreshold,
        vector_count: m,
        singular_values,
    })
}

fn inner(a: &FinVector<Complex64>, b: &FinVector<Complex64>) -> Complex64 {
    // <a, b> with the conjugation on the first slot; supports are sorted,
    // walk the smaller one.
    let mut acc = Complex64::new(0.0, 0.0);
    for (g, ca) in a.entries() {
        let cb = b.coefficient(g);
        if cb.re != 0.0 || cb.im != 0.0 {
            acc += ca.conj() * cb;
        }
    }
    acc
}

/// Largest subfamily that is orthonormal to the last bit: unit norms and
/// vanishing pairwise inner products with no tolerance. Basis-vector
/// families hit this exactly; generic float data simply contributes
/// nothing, which only weakens the lower bound, never breaks it.
fn greedy_orthonormal_count(vectors: &[FinVector<Complex64>]) -> usize {
    let mut accepted: Vec<&FinVector<Complex64>> = Vec::new();
    'outer: for v in vectors {
        let n: f64 = v.entries().map(|(_, c)| c.norm_sqr()).sum();
        if n != 1.0 {
            continue;
        }
        for u in &accepted {
            let ip = inner(u, v);
            if ip.re != 0.0 || ip.im != 0.0 {
                continue 'outer;
            }
        }
        accepted.push(v);
    }
    accepted.len()
}

/// Ceiling with a 1e-9 guard: arguments that are integers up to float
/// noise land on that integer instead of one above.
fn ceil_guarded(x: f64) -> usize {
    let c = (x - 1e-9).ceil();
    if c <= 0.0 {
        0
    } else {
        c as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Group, GroupElement};

    fn z1() -> Group {
        Group::free_abelian(1).unwrap()
    }

    fn basis(x: i64) -> FinVector<Complex64> {
        FinVector::basis(z1(), GroupElement::Vector(vec![x])).unwrap()
    }

    #[test]
    fn orthonormal_family_is_pinned_between_counting_and_rank() {
        let vs = vec![basis(0), basis(1), basis(-1)];
        let est = dimension_estimate(&vs, 0.5).unwrap();
        assert_eq!(est.lower, 3);
        assert_eq!(est.upper, 3);
        assert_eq!(est.orthonormal_count, 3);
        assert_eq!(est.lower_tag, LowerTag::VoiculescuOrthonormal);
    }

    #[test]
    fn loose_tolerance_admits_the_zero_subspace() {
        let vs = vec![basis(2)];
        let est = dimension_estimate(&vs, 2.0).unwrap();
        assert_eq!(est.lower, 0);
        assert_eq!(est.upper, 0);
    }

    #[test]
    fn ball_basis_family() {
        let vs: Vec<_> = (-2..=2).map(basis).collect();
        let est = dimension_estimate(&vs, 0.5).unwrap();
        assert_eq!(est.lower, 4);
        assert_eq!(est.upper, 5);
        assert!(est.singular_values.iter().all(|&s| (s - 1.0).abs() < 1e-12));
    }

    #[test]
    fn duplicates_do_not_inflate_the_orthonormal_count() {
        let vs = vec![basis(0), basis(0), basis(1)];
        let est = dimension_estimate(&vs, 0.5).unwrap();
        assert_eq!(est.orthonormal_count, 2);
        // One singular value doubles up (sqrt 2), one stays 1, one is 0.
        assert!((est.singular_values[0] - 2.0f64.sqrt()).abs() < 1e-12);
        assert_eq!(est.upper, 2);
    }

    #[test]
    fn delta_monotonicity() {
        let vs: Vec<_> = (-3..=3).map(basis).collect();
        let mut prev_lower = usize::MAX;
        let mut prev_upper = usize::MAX;
        for delta in [0.1, 0.3, 0.5, 0.7, 0.9, 1.1] {
            let est = dimension_estimate(&vs, delta).unwrap();
            assert!(est.lower <= est.upper);
            assert!(est.lower <= prev_lower);
            assert!(est.upper <= prev_upper);
            prev_lower = est.lower;
            prev_upper = est.upper;
        }
    }

    #[test]
    fn trivial_span_bump() {
        // A single vector of norm 2 is not orthonormal, but at delta = 1.5
        // the zero subspace misses it, so the lower bound must be 1.
        let v = FinVector::from_entries(
            z1(),
            vec![(GroupElement::Vector(vec![0]), Complex64::new(2.0, 0.0))],
        )
        .unwrap();
        let est = dimension_estimate(&[v], 1.5).unwrap();
        assert_eq!(est.lower, 1);
        assert_eq!(est.lower_tag, LowerTag::SpanTrivial);
        assert_eq!(est.upper, 1);
    }

    #[test]
    fn rejects_nonpositive_delta() {
        assert!(dimension_estimate(&[basis(0)], 0.0).is_err());
        assert!(dimension_estimate(&[basis(0)], -0.5).is_err());
    }
}
