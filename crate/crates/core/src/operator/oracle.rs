//! Certified reduced-norm bounds on free abelian groups via the Fourier
//! transform.
//!
//! On Z^d the reduced norm of f is the sup of |F(theta)| over the torus,
//! where F is the trigonometric polynomial with f's coefficients. A grid
//! maximum is a rigorous lower bound; padding it by the gradient bound
//! times the farthest-point distance of the grid gives a rigorous upper
//! bound. No other module gets an independent value of this norm, which is
//! what makes the pair usable as an oracle.

use crate::algebra::{Coefficient, ComplexElement};
use crate::error::{Error, Result};
use crate::group::Group;
use num::complex::Complex64;
use std::f64::consts::TAU;

pub fn dft_norm_bounds(f: &ComplexElement, grid_per_dim: usize) -> Result<(f64, f64)> {
    let d = match f.group() {
        Group::FreeAbelian { rank } => *rank,
        _ => {
            return Err(Error::InvalidParameter(
                "Fourier bounds exist only on free abelian groups".into(),
            ))
        }
    };
    if grid_per_dim < 2 {
        return Err(Error::InvalidParameter(
            "Fourier grid needs at least 2 points per dimension".into(),
        ));
    }

    let terms: Vec<(&[i64], Complex64)> = f
        .terms()
        .map(|(g, c)| (g.vector_coords().expect("free abelian support"), *c))
        .collect();

    let mut max_abs = 0.0f64;
    let g = grid_per_dim as f64;
    let mut idx = vec![0usize; d];
    loop {
        let mut acc = Complex64::new(0.0, 0.0);
        for (v, c) in &terms {
            let mut dot = 0.0f64;
            for (vi, ii) in v.iter().zip(idx.iter()) {
                dot += *vi as f64 * *ii as f64;
            }
            let phase = TAU * dot / g;
            acc += c * Complex64::new(phase.cos(), phase.sin());
        }
        max_abs = max_abs.max(acc.norm());

        // Odometer over the d-dimensional grid.
        let mut pos = 0;
        loop {
            if pos == d {
                break;
            }
            idx[pos] += 1;
            if idx[pos] < grid_per_dim {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == d {
            break;
        }
    }

    // |grad F| <= 2 pi sum of |v|_2 |a_v|; the farthest torus point from
    // the grid is half a cell diagonal away.
    let gradient_bound: f64 = terms
        .iter()
        .map(|(v, c)| {
            let n2 = v.iter().map(|&x| (x as f64) * (x as f64)).sum::<f64>().sqrt();
            TAU * n2 * Coefficient::abs(c)
        })
        .sum();
    let reach = (d as f64).sqrt() / (2.0 * g);
    Ok((max_abs, max_abs + gradient_bound * reach))
}
