//! Finitely supported coefficient functions on a group, with convolution,
//! adjoint, and the length-weighted norms.
//!
//! Elements are stored sparsely over the element order, so iteration is
//! deterministic and zero coefficients are never kept.

mod coeff;

pub use coeff::{Coefficient, GaussianRational};

use crate::automorphism::GroupAutomorphism;
use crate::error::{Error, Result};
use crate::group::{Group, GroupElement, WordLengths};
use num::complex::Complex64;
use std::collections::BTreeMap;

pub type ComplexElement = AlgebraElement<Complex64>;
pub type ExactElement = AlgebraElement<GaussianRational>;

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement<C: Coefficient> {
    group: Group,
    terms: BTreeMap<GroupElement, C>,
}

impl<C: Coefficient> AlgebraElement<C> {
    pub fn zero(group: Group) -> Self {
        AlgebraElement {
            group,
            terms: BTreeMap::new(),
        }
    }

    pub fn delta(group: Group, g: GroupElement) -> Result<Self> {
        Self::from_terms(group, vec![(g, C::one())])
    }

    /// Builds the element, folding duplicate support points together and
    /// dropping exact zeros.
    pub fn from_terms(group: Group, terms: Vec<(GroupElement, C)>) -> Result<Self> {
        let mut map: BTreeMap<GroupElement, C> = BTreeMap::new();
        for (g, c) in terms {
            if !group.contains(&g) {
                return Err(Error::ElementMismatch {
                    expected: group.name(),
                    got: format!("{g}"),
                });
            }
            let entry = map.entry(g).or_insert_with(C::zero);
            *entry = entry.add(&c);
        }
        map.retain(|_, c| !c.is_zero());
        Ok(AlgebraElement { group, terms: map })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &C)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.terms.keys()
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, g: &GroupElement) -> C {
        self.terms.get(g).cloned().unwrap_or_else(C::zero)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut terms = BTreeMap::new();
        for (g, a) in &self.terms {
            let p = a.mul(c);
            if !p.is_zero() {
                terms.insert(g.clone(), p);
            }
        }
        AlgebraElement {
            group: self.group.clone(),
            terms,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_group(other)?;
        let mut terms = self.terms.clone();
        for (g, c) in &other.terms {
            let entry = terms.entry(g.clone()).or_insert_with(C::zero);
            *entry = entry.add(c);
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(AlgebraElement {
            group: self.group.clone(),
            terms,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&C::one().neg()))
    }

    fn check_same_group(&self, other: &Self) -> Result<()> {
        if self.group != other.group {
            return Err(Error::ElementMismatch {
                expected: self.group.name(),
                got: other.group.name(),
            });
        }
        Ok(())
    }

    /// (f1 * f2)(g) = sum over h of f1(h) f2(h^-1 g), realized by expanding
    /// all support products.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.check_same_group(other)?;
        let mut terms: BTreeMap<GroupElement, C> = BTreeMap::new();
        for (g1, c1) in &self.terms {
            for (g2, c2) in &other.terms {
                let g = self.group.multiply(g1, g2)?;
                let p = c1.mul(c2);
                let entry = terms.entry(g).or_insert_with(C::zero);
                *entry = entry.add(&p);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(AlgebraElement {
            group: self.group.clone(),
            terms,
        })
    }

    /// f*(g) = conj(f(g^-1)).
    pub fn adjoint(&self) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (g, c) in &self.terms {
            terms.insert(self.group.inverse(g)?, c.conj());
        }
        Ok(AlgebraElement {
            group: self.group.clone(),
            terms,
        })
    }

    pub fn is_self_adjoint(&self) -> Result<bool> {
        Ok(*self == self.adjoint()?)
    }

    /// delta_h * f * delta_{h^-1}: conjugates every support point by h.
    pub fn conjugated_by(&self, h: &GroupElement) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (g, c) in &self.terms {
            terms.insert(self.group.conjugate(h, g)?, c.clone());
        }
        Ok(AlgebraElement {
            group: self.group.clone(),
            terms,
        })
    }

    /// Pushes the support through an automorphism, keeping coefficients.
    pub fn transported(&self, auto: &GroupAutomorphism) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (g, c) in &self.terms {
            terms.insert(auto.apply(g)?, c.clone());
        }
        Ok(AlgebraElement {
            group: self.group.clone(),
            terms,
        })
    }

    /// sum over the support of l(g)^k |a_g|. Upper bound for the commutator
    /// seminorm at order k.
    pub fn weighted_l1(&self, lengths: &WordLengths, k: u32) -> Result<f64> {
        let mut acc = 0.0;
        for (g, c) in &self.terms {
            let l = lengths.length(g)? as f64;
            acc += l.powi(k as i32) * c.abs();
        }
        Ok(acc)
    }

    /// sqrt of sum of l(g)^{2k} |a_g|^2. Lower bound for the seminorm at
    /// order k: it is the norm of the commutator applied to delta_e.
    pub fn weighted_l2(&self, lengths: &WordLengths, k: u32) -> Result<f64> {
        let mut acc = 0.0;
        for (g, c) in &self.terms {
            let lk = (lengths.length(g)? as f64).powi(k as i32);
            acc += lk * lk * c.abs_sq();
        }
        Ok(acc.sqrt())
    }

    pub fn support_radius(&self, lengths: &WordLengths) -> Result<u32> {
        let mut r = 0;
        for g in self.terms.keys() {
            r = r.max(lengths.length(g)?);
        }
        Ok(r)
    }

    /// norm_upper / (sum |a_g|^2 (1 + l(g))^{2r})^{1/2}; a running max of
    /// this over samples estimates the rapid-decay constant.
    pub fn rapid_decay_ratio(
        &self,
        lengths: &WordLengths,
        r: u32,
        norm_upper: f64,
    ) -> Result<f64> {
        if self.is_zero() {
            return Err(Error::InvalidParameter(
                "rapid-decay ratio undefined for the zero element".into(),
            ));
        }
        let mut denom_sq = 0.0;
        for (g, c) in &self.terms {
            let w = (1.0 + lengths.length(g)? as f64).powi(r as i32);
            denom_sq += c.abs_sq() * w * w;
        }
        Ok(norm_upper / denom_sq.sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z1() -> Group {
        Group::free_abelian(1).unwrap()
    }

    fn v(x: i64) -> GroupElement {
        GroupElement::Vector(vec![x])
    }

    fn cx(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn convolution_of_symmetric_generator_pair() {
        let f = ComplexElement::from_terms(
            z1(),
            vec![(v(1), cx(1.0, 0.0)), (v(-1), cx(1.0, 0.0))],
        )
        .unwrap();
        let sq = f.convolve(&f).unwrap();
        assert_eq!(sq.coefficient(&v(2)), cx(1.0, 0.0));
        assert_eq!(sq.coefficient(&v(0)), cx(2.0, 0.0));
        assert_eq!(sq.coefficient(&v(-2)), cx(1.0, 0.0));
        assert_eq!(sq.support_size(), 3);
    }

    #[test]
    fn delta_convolution_follows_group_law() {
        let g = Group::free(2).unwrap();
        let a = ComplexElement::delta(g.clone(), GroupElement::Word(vec![1])).unwrap();
        let b = ComplexElement::delta(g.clone(), GroupElement::Word(vec![-1, 2])).unwrap();
        let ab = a.convolve(&b).unwrap();
        // a * a^-1 b = b: the free reduction happens inside multiply.
        assert_eq!(ab.coefficient(&GroupElement::Word(vec![2])), cx(1.0, 0.0));
        assert_eq!(ab.support_size(), 1);

        let e = ComplexElement::delta(g.clone(), g.identity()).unwrap();
        assert_eq!(e.convolve(&b).unwrap(), b);
    }

    #[test]
    fn adjoint_is_an_involution_and_antihomomorphism() {
        let f = ComplexElement::from_terms(
            z1(),
            vec![(v(2), cx(2.0, 1.0)), (v(0), cx(0.0, -3.0))],
        )
        .unwrap();
        assert_eq!(f.adjoint().unwrap().coefficient(&v(-2)), cx(2.0, -1.0));
        assert_eq!(f.adjoint().unwrap().adjoint().unwrap(), f);

        let h = ComplexElement::from_terms(z1(), vec![(v(1), cx(0.5, 0.25))]).unwrap();
        let lhs = f.convolve(&h).unwrap().adjoint().unwrap();
        let rhs = h.adjoint().unwrap().convolve(&f.adjoint().unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn self_adjoint_detection() {
        let f = ComplexElement::from_terms(
            z1(),
            vec![(v(1), cx(1.0, 0.0)), (v(-1), cx(1.0, 0.0))],
        )
        .unwrap();
        assert!(f.is_self_adjoint().unwrap());
        let g = ComplexElement::delta(z1(), v(1)).unwrap();
        assert!(!g.is_self_adjoint().unwrap());
    }

    #[test]
    fn weighted_norms_on_small_support() {
        let lens = WordLengths::new(z1());
        let f = ComplexElement::from_terms(
            z1(),
            vec![(v(2), cx(1.0, 0.0)), (v(-1), cx(3.0, 0.0))],
        )
        .unwrap();
        // k=2: 2^2 * 1 + 1^2 * 3 = 7.
        assert_eq!(f.weighted_l1(&lens, 2).unwrap(), 7.0);
        // k=1: sqrt(4 + 9).
        assert_eq!(f.weighted_l2(&lens, 1).unwrap(), 13.0f64.sqrt());
        // k=0 reduces to the plain coefficient norms.
        assert_eq!(f.weighted_l1(&lens, 0).unwrap(), 4.0);
        assert_eq!(f.weighted_l2(&lens, 0).unwrap(), 10.0f64.sqrt());
        assert_eq!(f.support_radius(&lens).unwrap(), 2);
    }

    #[test]
    fn zero_terms_are_pruned_exactly() {
        let f = ComplexElement::from_terms(
            z1(),
            vec![(v(1), cx(1.0, 0.0)), (v(1), cx(-1.0, 0.0)), (v(0), cx(1e-300, 0.0))],
        )
        .unwrap();
        // The +1/-1 pair cancels to exact zero and is dropped; the tiny
        // coefficient survives untouched.
        assert_eq!(f.support_size(), 1);
        assert_eq!(f.coefficient(&v(0)), cx(1e-300, 0.0));
    }

    #[test]
    fn exact_ring_convolution_has_no_rounding() {
        let a = ExactElement::from_terms(
            z1(),
            vec![
                (v(1), GaussianRational::from_ratios(1, 3, 0, 1)),
                (v(0), GaussianRational::from_ratios(1, 7, 2, 5)),
            ],
        )
        .unwrap();
        let prod = a.convolve(&a).unwrap();
        assert_eq!(
            prod.coefficient(&v(2)),
            GaussianRational::from_ratios(1, 9, 0, 1)
        );
        // Cross term appears twice: 2 * (1/3)(1/7 + 2i/5).
        assert_eq!(
            prod.coefficient(&v(1)),
            GaussianRational::from_ratios(2, 21, 4, 15)
        );
    }

    #[test]
    fn conjugation_matches_sandwich_product() {
        let grp = Group::semidirect_z(crate::group::IntMatrix::neg_identity(2)).unwrap();
        let t = GroupElement::Semi { v: vec![0, 0], k: 1 };
        let x = GroupElement::Semi { v: vec![1, 2], k: 0 };
        let f = ComplexElement::from_terms(grp.clone(), vec![(x, cx(1.0, 1.0))]).unwrap();

        let direct = f.conjugated_by(&t).unwrap();
        let dt = ComplexElement::delta(grp.clone(), t.clone()).unwrap();
        let dti = ComplexElement::delta(grp.clone(), grp.inverse(&t).unwrap()).unwrap();
        let sandwich = dt.convolve(&f).unwrap().convolve(&dti).unwrap();
        assert_eq!(direct, sandwich);
        assert_eq!(
            direct.coefficient(&GroupElement::Semi { v: vec![-1, -2], k: 0 }),
            cx(1.0, 1.0)
        );
    }

    #[test]
    fn cross_group_operations_are_rejected() {
        let f = ComplexElement::delta(z1(), v(1)).unwrap();
        let g2 = Group::free_abelian(2).unwrap();
        let h = ComplexElement::delta(g2, GroupElement::Vector(vec![1, 0])).unwrap();
        assert!(f.convolve(&h).is_err());
        assert!(f.add(&h).is_err());
    }

    #[test]
    fn rapid_decay_ratio_for_point_masses() {
        let lens = WordLengths::new(z1());
        let f = ComplexElement::delta(z1(), v(3)).unwrap();
        // Point mass of norm 1: ratio is (1 + l)^{-r}.
        let ratio = f.rapid_decay_ratio(&lens, 2, 1.0).unwrap();
        assert!((ratio - 1.0 / 16.0).abs() < 1e-15);
        let e = ComplexElement::delta(z1(), v(0)).unwrap();
        assert_eq!(e.rapid_decay_ratio(&lens, 0, 1.0).unwrap(), 1.0);
    }
}
