//! Random test elements. Every sampler takes the random stream explicitly
//! so each experiment block owns an independent, replayable sequence.

use cqms_core::algebra::{
    AlgebraElement, Coefficient, ComplexElement, ExactElement, GaussianRational,
};
use cqms_core::group::{BallTable, Group, GroupElement};
use cqms_core::Result;
use num::complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;

/// Box-Muller pair of independent standard normals.
pub fn normal_pair<R: Rng>(rng: &mut R) -> (f64, f64) {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    (r * theta.cos(), r * theta.sin())
}

pub fn complex_normal<R: Rng>(rng: &mut R) -> Complex64 {
    let (re, im) = normal_pair(rng);
    Complex64::new(re, im)
}

/// Element on Z^dim supported on the whole ball of the given radius, with
/// Gaussian coefficients damped by (1 + |v|^2)^-2 and scaled to total
/// coefficient mass one. The damping keeps the Fourier series dominated by
/// low frequencies, so a modest grid already resolves its maximum.
pub fn damped_fourier_element<R: Rng>(
    rng: &mut R,
    dim: usize,
    radius: u32,
) -> Result<ComplexElement> {
    let group = Group::free_abelian(dim)?;
    let mut table = BallTable::new(group.clone());
    table.extend_to(radius)?;
    let mut terms: Vec<(GroupElement, Complex64)> = Vec::new();
    let mut mass = 0.0;
    for g in table.elements_lex(radius) {
        let v = g.vector_coords().expect("lattice ball holds vectors");
        let sq: f64 = v.iter().map(|&c| (c as f64) * (c as f64)).sum();
        let damp = (1.0 + sq).powi(-2);
        let c = complex_normal(rng) * damp;
        mass += c.norm();
        terms.push((g, c));
    }
    let inv = 1.0 / mass;
    for (_, c) in &mut terms {
        *c *= inv;
    }
    AlgebraElement::from_terms(group, terms)
}

/// Element with Gaussian-rational coefficients on up to `max_terms` points
/// of the ball. Exact coefficients keep convolution identities decidable
/// without tolerances.
pub fn random_exact_element<R: Rng>(
    rng: &mut R,
    group: &Group,
    ball: &[GroupElement],
    max_terms: usize,
) -> Result<ExactElement> {
    let count = rng.gen_range(1..=max_terms.min(ball.len()));
    let mut terms: Vec<(GroupElement, GaussianRational)> = sample(rng, ball.len(), count)
        .into_iter()
        .map(|i| {
            let c = GaussianRational::from_ratios(
                rng.gen_range(-3..=3),
                rng.gen_range(1..=3),
                rng.gen_range(-3..=3),
                rng.gen_range(1..=3),
            );
            (ball[i].clone(), c)
        })
        .collect();
    if terms.iter().all(|(_, c)| c.is_zero()) {
        terms[0].1 = GaussianRational::from_ratios(1, 1, 0, 1);
    }
    AlgebraElement::from_terms(group.clone(), terms)
}

/// Element with standard complex Gaussian coefficients on up to `max_terms`
/// points of the ball.
pub fn random_complex_element<R: Rng>(
    rng: &mut R,
    group: &Group,
    ball: &[GroupElement],
    max_terms: usize,
) -> Result<ComplexElement> {
    let count = rng.gen_range(1..=max_terms.min(ball.len()));
    let terms: Vec<(GroupElement, Complex64)> = sample(rng, ball.len(), count)
        .into_iter()
        .map(|i| (ball[i].clone(), complex_normal(rng)))
        .collect();
    AlgebraElement::from_terms(group.clone(), terms)
}

pub fn random_ball_point<R: Rng>(rng: &mut R, ball: &[GroupElement]) -> GroupElement {
    ball[rng.gen_range(0..ball.len())].clone()
}
