//! Randomized law checks across the group, algebra, and spectral layers.

use cqms_core::algebra::{AlgebraElement, ComplexElement, ExactElement, GaussianRational};
use cqms_core::automorphism::{
    char_poly, eigen_entropy, Action, GroupAutomorphism,
};
use cqms_core::dimension::dimension_estimate;
use cqms_core::group::{Group, GroupElement, IntMatrix, WordLengths};
use cqms_core::operator::{seminorm_sandwich, FinVector};
use num::complex::Complex64;
use proptest::prelude::*;

fn cat() -> IntMatrix {
    IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap()
}

fn sign_twist() -> Group {
    Group::semidirect_z(IntMatrix::neg_identity(2)).unwrap()
}

fn coords(d: usize, bound: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-bound..=bound, d)
}

fn semi_el(bound: i64, k_bound: i64) -> impl Strategy<Value = GroupElement> {
    (coords(2, bound), -k_bound..=k_bound).prop_map(|(v, k)| GroupElement::Semi { v, k })
}

/// Random reduced word, built by multiplying generators one at a time.
fn free_word(max_len: usize) -> impl Strategy<Value = GroupElement> {
    prop::collection::vec(
        prop_oneof![Just(1i16), Just(-1), Just(2), Just(-2)],
        0..=max_len,
    )
    .prop_map(|letters| {
        let g = Group::free(2).unwrap();
        let mut acc = g.identity();
        for l in letters {
            acc = g.multiply(&acc, &GroupElement::Word(vec![l])).unwrap();
        }
        acc
    })
}

fn rational() -> impl Strategy<Value = GaussianRational> {
    (-3i64..=3, 1i64..=3, -3i64..=3, 1i64..=3)
        .prop_map(|(rn, rd, im, id)| GaussianRational::from_ratios(rn, rd, im, id))
}

fn exact_free_element() -> impl Strategy<Value = ExactElement> {
    prop::collection::vec((free_word(2), rational()), 1..=3).prop_map(|terms| {
        AlgebraElement::from_terms(Group::free(2).unwrap(), terms).unwrap()
    })
}

fn complex_plane_element() -> impl Strategy<Value = ComplexElement> {
    prop::collection::vec(
        (coords(2, 4), -1.0..1.0f64, -1.0..1.0f64),
        1..=4,
    )
    .prop_map(|terms| {
        let g = Group::free_abelian(2).unwrap();
        let terms = terms
            .into_iter()
            .map(|(v, re, im)| (GroupElement::Vector(v), Complex64::new(re, im)))
            .collect();
        AlgebraElement::from_terms(g, terms).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn semidirect_multiplication_associates(
        a in semi_el(6, 3),
        b in semi_el(6, 3),
        c in semi_el(6, 3),
    ) {
        let g = Group::semidirect_z(cat()).unwrap();
        let ab_c = g.multiply(&g.multiply(&a, &b).unwrap(), &c).unwrap();
        let a_bc = g.multiply(&a, &g.multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
    }

    #[test]
    fn inverses_cancel_everywhere(
        v in coords(3, 50),
        w in free_word(8),
        s in semi_el(10, 4),
    ) {
        for (g, el) in [
            (Group::free_abelian(3).unwrap(), GroupElement::Vector(v)),
            (Group::free(2).unwrap(), w),
            (Group::semidirect_z(cat()).unwrap(), s),
        ] {
            let inv = g.inverse(&el).unwrap();
            prop_assert_eq!(g.multiply(&el, &inv).unwrap(), g.identity());
            prop_assert_eq!(g.multiply(&inv, &el).unwrap(), g.identity());
        }
    }

    #[test]
    fn sign_twist_length_is_symmetric_and_subadditive(
        a in semi_el(10, 5),
        b in semi_el(10, 5),
    ) {
        let g = sign_twist();
        let mut lens = WordLengths::new(g.clone());
        lens.validate_sign_flip_formula(6).unwrap();
        let la = lens.length(&a).unwrap();
        prop_assert_eq!(lens.length(&g.inverse(&a).unwrap()).unwrap(), la);
        prop_assert_eq!(la == 0, g.is_identity(&a));
        let lb = lens.length(&b).unwrap();
        let lab = lens.length(&g.multiply(&a, &b).unwrap()).unwrap();
        prop_assert!(lab <= la + lb);
    }

    #[test]
    fn free_length_is_subadditive(a in free_word(8), b in free_word(8)) {
        let g = Group::free(2).unwrap();
        let lens = WordLengths::new(g.clone());
        let la = lens.length(&a).unwrap();
        let lb = lens.length(&b).unwrap();
        let lab = lens.length(&g.multiply(&a, &b).unwrap()).unwrap();
        prop_assert!(lab <= la + lb);
        // Cancellation removes letters in pairs.
        prop_assert_eq!((la + lb - lab) % 2, 0);
    }

    #[test]
    fn exact_convolution_associates(
        f in exact_free_element(),
        g in exact_free_element(),
        h in exact_free_element(),
    ) {
        let left = f.convolve(&g).unwrap().convolve(&h).unwrap();
        let right = f.convolve(&g.convolve(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn adjoint_reverses_exact_products(
        f in exact_free_element(),
        g in exact_free_element(),
    ) {
        let lhs = f.convolve(&g).unwrap().adjoint().unwrap();
        let rhs = g.adjoint().unwrap().convolve(&f.adjoint().unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn weighted_norms_are_ordered(f in complex_plane_element(), k in 0u32..=3) {
        let lens = WordLengths::new(Group::free_abelian(2).unwrap());
        let l2 = f.weighted_l2(&lens, k).unwrap();
        let l1 = f.weighted_l1(&lens, k).unwrap();
        prop_assert!(l2 <= l1 * (1.0 + 1e-12) + 1e-12, "l2 {l2} > l1 {l1}");
    }

    #[test]
    fn point_mass_sandwich_is_tight_everywhere(v in coords(2, 8), k in 1u32..=3) {
        let g = Group::free_abelian(2).unwrap();
        let f = ComplexElement::delta(g.clone(), GroupElement::Vector(v.clone())).unwrap();
        let mut lens = WordLengths::new(g);
        let est = seminorm_sandwich(&f, k, &[], &mut lens).unwrap();
        let len: i64 = v.iter().map(|c| c.abs()).sum();
        let expect = (len as f64).powi(k as i32);
        prop_assert_eq!(est.lower, expect);
        prop_assert_eq!(est.upper, expect);
    }

    #[test]
    fn char_poly_survives_conjugation(picks in prop::collection::vec(0u8..2, 0..=5)) {
        let s = IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let t = IntMatrix::from_rows(&[vec![1, 0], vec![1, 1]]).unwrap();
        let mut u = IntMatrix::identity(2);
        for p in picks {
            u = u.mul(if p == 0 { &s } else { &t }).unwrap();
        }
        let u_inv = u.inverse_unimodular().unwrap();
        let m = u.mul(&cat()).unwrap().mul(&u_inv).unwrap();
        prop_assert_eq!(char_poly(&m).unwrap(), char_poly(&cat()).unwrap());
        let e1 = eigen_entropy(&m).unwrap().entropy;
        let e2 = eigen_entropy(&cat()).unwrap().entropy;
        prop_assert!((e1 - e2).abs() < 1e-9);
    }

    #[test]
    fn extended_action_is_multiplicative(a in semi_el(8, 3), b in semi_el(8, 3)) {
        let g = sign_twist();
        let alpha = GroupAutomorphism::new(g.clone(), Action::ExtendedLinear(cat())).unwrap();
        let lhs = alpha.apply(&g.multiply(&a, &b).unwrap()).unwrap();
        let rhs = g
            .multiply(&alpha.apply(&a).unwrap(), &alpha.apply(&b).unwrap())
            .unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inner_transport_matches_sandwich_product(
        support in prop::collection::vec((semi_el(3, 1), -1.0..1.0f64), 1..=3),
        h in semi_el(3, 2),
    ) {
        let g = sign_twist();
        let terms = support
            .into_iter()
            .map(|(el, re)| (el, Complex64::new(re, 0.25)))
            .collect();
        let f = ComplexElement::from_terms(g.clone(), terms).unwrap();
        let inner = GroupAutomorphism::new(g, Action::Inner(h.clone())).unwrap();
        prop_assert_eq!(f.transported(&inner).unwrap(), f.conjugated_by(&h).unwrap());
    }

    #[test]
    fn dimension_bracket_orders(
        cols in prop::collection::vec(
            prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 3),
            1..=4,
        ),
        delta in 0.05..1.5f64,
    ) {
        let g = Group::free_abelian(1).unwrap();
        let basis: Vec<GroupElement> = (0..3)
            .map(|i| GroupElement::Vector(vec![i]))
            .collect();
        let vectors: Vec<FinVector<Complex64>> = cols
            .into_iter()
            .map(|col| {
                let entries = col
                    .into_iter()
                    .zip(&basis)
                    .map(|((re, im), b)| (b.clone(), Complex64::new(re, im)))
                    .collect();
                FinVector::from_entries(g.clone(), entries).unwrap()
            })
            .collect();
        let est = dimension_estimate(&vectors, delta).unwrap();
        prop_assert!(est.lower <= est.upper);
        prop_assert!(est.upper <= est.vector_count);
    }
}
