//! The left regular representation and the iterated length commutators,
//! applied exactly to finitely supported vectors.
//!
//! The commutator of the length multiplier with a translation acts on basis
//! vectors by `delta_h -> (l(gh) - l(h)) delta_{gh}`, so the k-fold
//! commutator picks up the k-th power of that integer jump. Everything in
//! this module works coefficient-exactly; norm estimation lives in the
//! submodules.

mod compress;
mod oracle;
mod sandwich;

pub use compress::{compress, CompressedNormLower, CompressedOperator, POWER_ITERATION_CAP};
pub use oracle::dft_norm_bounds;
pub use sandwich::{
    ad_inequality_check, seminorm_sandwich, tail_truncation_radius, AdInequalityReport,
    LowerMethod, SeminormEstimate,
};

use crate::algebra::{AlgebraElement, Coefficient};
use crate::error::{Error, Result};
use crate::group::{Group, GroupElement, WordLengths};
use std::collections::BTreeMap;

pub const DEFAULT_COMPOSITION_CAP: u64 = 100_000;

/// Resolve a length, growing the BFS horizon in small steps when the
/// oracle is table-backed. The ball budget bounds the loop.
pub(crate) fn resolve_length(lengths: &mut WordLengths, g: &GroupElement) -> Result<u32> {
    loop {
        match lengths.length(g) {
            Ok(l) => return Ok(l),
            Err(Error::HorizonExhausted { horizon }) => {
                lengths
                    .table_mut()
                    .expect("horizon errors only come from table-backed oracles")
                    .extend_to(horizon + 4)?;
            }
            Err(e) => return Err(e),
        }
    }
}

/// Finitely supported vector in the l2 space over the group.
#[derive(Debug, Clone, PartialEq)]
pub struct FinVector<C: Coefficient> {
    group: Group,
    entries: BTreeMap<GroupElement, C>,
}

impl<C: Coefficient> FinVector<C> {
    pub fn zero(group: Group) -> Self {
        FinVector {
            group,
            entries: BTreeMap::new(),
        }
    }

    pub fn basis(group: Group, h: GroupElement) -> Result<Self> {
        Self::from_entries(group, vec![(h, C::one())])
    }

    pub fn from_entries(group: Group, entries: Vec<(GroupElement, C)>) -> Result<Self> {
        let mut map: BTreeMap<GroupElement, C> = BTreeMap::new();
        for (h, c) in entries {
            if !group.contains(&h) {
                return Err(Error::ElementMismatch {
                    expected: group.name(),
                    got: format!("{h}"),
                });
            }
            let entry = map.entry(h).or_insert_with(C::zero);
            *entry = entry.add(&c);
        }
        map.retain(|_, c| !c.is_zero());
        Ok(FinVector { group, entries: map })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn entries(&self) -> impl Iterator<Item = (&GroupElement, &C)> {
        self.entries.iter()
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn coefficient(&self, h: &GroupElement) -> C {
        self.entries.get(h).cloned().unwrap_or_else(C::zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::ElementMismatch {
                expected: self.group.name(),
                got: other.group.name(),
            });
        }
        let mut entries = self.entries.clone();
        for (h, c) in &other.entries {
            let entry = entries.entry(h.clone()).or_insert_with(C::zero);
            *entry = entry.add(c);
        }
        entries.retain(|_, c| !c.is_zero());
        Ok(FinVector {
            group: self.group.clone(),
            entries,
        })
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut entries = BTreeMap::new();
        for (h, a) in &self.entries {
            let p = a.mul(c);
            if !p.is_zero() {
                entries.insert(h.clone(), p);
            }
        }
        FinVector {
            group: self.group.clone(),
            entries,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&C::one().neg()))
    }

    pub fn norm(&self) -> f64 {
        self.entries
            .values()
            .map(|c| c.abs_sq())
            .sum::<f64>()
            .sqrt()
    }

    /// l2 distance; exactly 0.0 when the coefficients cancel exactly.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.norm())
    }
}

/// lambda(f) v: each support point of f left-translates v.
pub fn apply_regular<C: Coefficient>(
    f: &AlgebraElement<C>,
    v: &FinVector<C>,
) -> Result<FinVector<C>> {
    apply_delta(f, 0, v, None)
}

/// The k-fold commutator applied to v:
/// sum over g, h of a_g v(h) (l(gh) - l(h))^k delta_{gh}.
/// k = 0 degenerates to the regular representation, for which no length
/// oracle is needed.
pub fn apply_delta<C: Coefficient>(
    f: &AlgebraElement<C>,
    k: u32,
    v: &FinVector<C>,
    lengths: Option<&WordLengths>,
) -> Result<FinVector<C>> {
    let group = f.group();
    if *group != *v.group() {
        return Err(Error::ElementMismatch {
            expected: group.name(),
            got: v.group().name(),
        });
    }
    let lengths = match (k, lengths) {
        (0, _) => None,
        (_, Some(l)) => Some(l),
        (_, None) => {
            return Err(Error::InvalidParameter(
                "commutator of positive order needs a length oracle".into(),
            ))
        }
    };

    let mut out: BTreeMap<GroupElement, C> = BTreeMap::new();
    for (g, a) in f.terms() {
        for (h, x) in v.entries() {
            let gh = group.multiply(g, h)?;
            let weight = match lengths {
                None => C::one(),
                Some(oracle) => {
                    let jump = oracle.length(&gh)? as i64 - oracle.length(h)? as i64;
                    let p = jump
                        .checked_pow(k)
                        .ok_or(Error::Overflow { op: "length jump power" })?;
                    C::from_int(p)
                }
            };
            let term = a.mul(x).mul(&weight);
            if term.is_zero() {
                continue;
            }
            let entry = out.entry(gh).or_insert_with(C::zero);
            *entry = entry.add(&term);
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(FinVector {
        group: group.clone(),
        entries: out,
    })
}

/// Number of weak compositions of k into n parts, for the blow-up guard.
fn composition_count(k: u32, n: u32) -> u128 {
    // (k + n - 1 choose n - 1)
    let mut acc: u128 = 1;
    let top = (k + n - 1) as u128;
    let bot = (n - 1) as u128;
    for i in 1..=bot {
        acc = acc * (top - bot + i) / i;
    }
    acc
}

fn multinomial(parts: &[u32]) -> u128 {
    // Product of binomials over prefix sums; exact in u128 at the sizes
    // the composition cap admits.
    let mut acc: u128 = 1;
    let mut seen: u32 = 0;
    for &r in parts {
        seen += r;
        let mut b: u128 = 1;
        for i in 1..=r as u128 {
            b = b * (seen as u128 - r as u128 + i) / i;
        }
        acc *= b;
    }
    acc
}

fn weak_compositions(k: u32, n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n as usize];
    fn rec(cur: &mut Vec<u32>, idx: usize, remaining: u32, out: &mut Vec<Vec<u32>>) {
        if idx + 1 == cur.len() {
            cur[idx] = remaining;
            out.push(cur.clone());
            return;
        }
        for r in 0..=remaining {
            cur[idx] = r;
            rec(cur, idx + 1, remaining - r, out);
        }
    }
    rec(&mut cur, 0, k, &mut out);
    out
}

#[derive(Debug, Clone)]
pub struct LeibnizReport {
    pub max_deviation: f64,
    pub compositions: u64,
    pub vectors_tested: usize,
}

/// Expands the k-fold commutator of a product into the multinomial sum of
/// per-factor commutators and measures the worst l2 distance between the
/// two sides over the supplied test vectors. With exact coefficients the
/// distance is exactly zero whenever the expansion is correct.
pub fn verify_leibniz<C: Coefficient>(
    factors: &[AlgebraElement<C>],
    k: u32,
    vectors: &[FinVector<C>],
    lengths: &WordLengths,
    composition_cap: u64,
) -> Result<LeibnizReport> {
    if factors.is_empty() || k == 0 {
        return Err(Error::InvalidParameter(
            "Leibniz expansion needs at least one factor and k >= 1".into(),
        ));
    }
    let n = factors.len() as u32;
    let count = composition_count(k, n);
    if count > composition_cap as u128 {
        return Err(Error::CompositionCap {
            count,
            cap: composition_cap,
        });
    }

    let mut product = factors[0].clone();
    for f in &factors[1..] {
        product = product.convolve(f)?;
    }

    let compositions = weak_compositions(k, n);
    let mut max_deviation = 0.0f64;
    for v in vectors {
        let lhs = apply_delta(&product, k, v, Some(lengths))?;
        let mut rhs = FinVector::zero(product.group().clone());
        for parts in &compositions {
            let coeff = multinomial(parts);
            let coeff = i64::try_from(coeff).map_err(|_| Error::Overflow {
                op: "multinomial coefficient",
            })?;
            // Operator product acts right to left.
            let mut w = v.clone();
            for (f, &r) in factors.iter().zip(parts.iter()).rev() {
                w = apply_delta(f, r, &w, Some(lengths))?;
            }
            rhs = rhs.add(&w.scale(&C::from_int(coeff)))?;
        }
        max_deviation = max_deviation.max(lhs.distance(&rhs)?);
    }
    Ok(LeibnizReport {
        max_deviation,
        compositions: compositions.len() as u64,
        vectors_tested: vectors.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ComplexElement, ExactElement, GaussianRational};
    use num::complex::Complex64;

    fn z1() -> Group {
        Group::free_abelian(1).unwrap()
    }

    fn v(x: i64) -> GroupElement {
        GroupElement::Vector(vec![x])
    }

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn regular_action_translates_basis_vectors() {
        let g = Group::free(2).unwrap();
        let f = ComplexElement::delta(g.clone(), GroupElement::Word(vec![1])).unwrap();
        let e2 = FinVector::basis(g.clone(), GroupElement::Word(vec![2])).unwrap();
        let out = apply_regular(&f, &e2).unwrap();
        assert_eq!(out.coefficient(&GroupElement::Word(vec![1, 2])), one());
        assert_eq!(out.support_size(), 1);
    }

    #[test]
    fn regular_action_on_cyclic_vector_reads_off_coefficients() {
        let f = ComplexElement::from_terms(
            z1(),
            vec![(v(1), Complex64::new(2.0, 1.0)), (v(-3), Complex64::new(0.0, 4.0))],
        )
        .unwrap();
        let e = FinVector::basis(z1(), v(0)).unwrap();
        let out = apply_regular(&f, &e).unwrap();
        assert_eq!(out.coefficient(&v(1)), Complex64::new(2.0, 1.0));
        assert_eq!(out.coefficient(&v(-3)), Complex64::new(0.0, 4.0));
    }

    #[test]
    fn regular_action_spreads_sums() {
        let f = ComplexElement::from_terms(z1(), vec![(v(1), one()), (v(-1), one())]).unwrap();
        let x = FinVector::from_entries(z1(), vec![(v(0), one()), (v(1), one())]).unwrap();
        let out = apply_regular(&f, &x).unwrap();
        for target in [-1i64, 0, 1, 2] {
            assert_eq!(out.coefficient(&v(target)), one(), "at {target}");
        }
        assert_eq!(out.support_size(), 4);
    }

    #[test]
    fn commutator_on_cyclic_vector_weights_by_length_powers() {
        let lens = WordLengths::new(z1());
        let f = ComplexElement::delta(z1(), v(-4)).unwrap();
        for k in 1..=4u32 {
            let e = FinVector::basis(z1(), v(0)).unwrap();
            let out = apply_delta(&f, k, &e, Some(&lens)).unwrap();
            assert_eq!(
                out.coefficient(&v(-4)),
                Complex64::new(4.0f64.powi(k as i32), 0.0)
            );
        }
    }

    #[test]
    fn commutator_jump_can_be_negative() {
        let lens = WordLengths::new(z1());
        let f = ComplexElement::delta(z1(), v(1)).unwrap();
        let x = FinVector::basis(z1(), v(-1)).unwrap();
        let out = apply_delta(&f, 1, &x, Some(&lens)).unwrap();
        // l(0) - l(-1) = -1.
        assert_eq!(out.coefficient(&v(0)), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn symmetric_generator_pair_has_unit_jumps_at_identity() {
        let lens = WordLengths::new(z1());
        let f = ComplexElement::from_terms(z1(), vec![(v(1), one()), (v(-1), one())]).unwrap();
        let e = FinVector::basis(z1(), v(0)).unwrap();
        let out = apply_delta(&f, 1, &e, Some(&lens)).unwrap();
        assert_eq!(out.coefficient(&v(1)), one());
        assert_eq!(out.coefficient(&v(-1)), one());
    }

    #[test]
    fn order_zero_commutator_is_the_regular_action() {
        let lens = WordLengths::new(z1());
        let f = ComplexElement::from_terms(
            z1(),
            vec![(v(2), Complex64::new(0.5, -0.5)), (v(-1), one())],
        )
        .unwrap();
        let x = FinVector::from_entries(
            z1(),
            vec![(v(0), one()), (v(3), Complex64::new(0.0, 2.0))],
        )
        .unwrap();
        let a = apply_delta(&f, 0, &x, Some(&lens)).unwrap();
        let b = apply_regular(&f, &x).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn leibniz_two_factors_first_order_exact() {
        let lens = WordLengths::new(z1());
        let f1 = ExactElement::from_terms(
            z1(),
            vec![
                (v(1), GaussianRational::from_ratios(1, 2, 1, 3)),
                (v(-2), GaussianRational::from_ratios(-2, 5, 0, 1)),
            ],
        )
        .unwrap();
        let f2 = ExactElement::from_terms(
            z1(),
            vec![
                (v(2), GaussianRational::from_ratios(3, 1, -1, 4)),
                (v(0), GaussianRational::from_ratios(0, 1, 1, 1)),
            ],
        )
        .unwrap();
        let vectors = vec![
            FinVector::basis(z1(), v(0)).unwrap(),
            FinVector::from_entries(
                z1(),
                vec![
                    (v(-1), GaussianRational::from_ratios(1, 1, 0, 1)),
                    (v(2), GaussianRational::from_ratios(0, 1, -1, 2)),
                ],
            )
            .unwrap(),
        ];
        let rep =
            verify_leibniz(&[f1, f2], 1, &vectors, &lens, DEFAULT_COMPOSITION_CAP).unwrap();
        assert_eq!(rep.max_deviation, 0.0);
        assert_eq!(rep.compositions, 2);
    }

    #[test]
    fn leibniz_identity_factors_collapse() {
        let lens = WordLengths::new(z1());
        let e = ExactElement::delta(z1(), v(0)).unwrap();
        let vecs = vec![FinVector::basis(z1(), v(1)).unwrap()];
        let rep = verify_leibniz(
            &[e.clone(), e.clone(), e],
            3,
            &vecs,
            &lens,
            DEFAULT_COMPOSITION_CAP,
        )
        .unwrap();
        assert_eq!(rep.max_deviation, 0.0);
        // Weak compositions of 3 into 3 parts.
        assert_eq!(rep.compositions, 10);
    }

    #[test]
    fn leibniz_composition_cap_trips() {
        let lens = WordLengths::new(z1());
        let f = ExactElement::delta(z1(), v(1)).unwrap();
        let vecs = vec![FinVector::basis(z1(), v(0)).unwrap()];
        let err = verify_leibniz(&[f.clone(), f.clone(), f], 2, &vecs, &lens, 3).unwrap_err();
        assert!(matches!(err, Error::CompositionCap { count: 6, cap: 3 }));
    }

    #[test]
    fn multinomial_values() {
        assert_eq!(multinomial(&[4]), 1);
        assert_eq!(multinomial(&[2, 2]), 6);
        assert_eq!(multinomial(&[1, 1, 1]), 6);
        assert_eq!(multinomial(&[0, 2]), 1);
        assert_eq!(composition_count(3, 3), 10);
        assert_eq!(composition_count(2, 3), 6);
    }

    #[test]
    fn float_leibniz_deviation_is_tiny() {
        let lens = WordLengths::new(z1());
        let f1 = ComplexElement::from_terms(
            z1(),
            vec![(v(1), Complex64::new(0.3, 0.7)), (v(-1), Complex64::new(-0.2, 0.1))],
        )
        .unwrap();
        let f2 = ComplexElement::from_terms(
            z1(),
            vec![(v(2), Complex64::new(1.5, 0.0)), (v(0), Complex64::new(0.0, -0.4))],
        )
        .unwrap();
        let vecs = vec![FinVector::basis(z1(), v(0)).unwrap()];
        let rep =
            verify_leibniz(&[f1, f2], 2, &vecs, &lens, DEFAULT_COMPOSITION_CAP).unwrap();
        assert!(rep.max_deviation < 1e-12, "got {}", rep.max_deviation);
    }
}
