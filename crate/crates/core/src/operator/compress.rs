//! Finite compressions of the regular representation and its commutators,
//! and the power-iteration lower bound on their largest singular value.
//!
//! A compression of a bounded operator never overshoots its norm, so every
//! number this module produces is a certified lower bound. The codomain
//! ball is the domain ball padded by the largest support length, which
//! keeps every image column intact; clipping rows would forfeit the
//! guarantee.

use super::FinVector;
use crate::algebra::{Coefficient, ComplexElement};
use crate::error::{Error, Result};
use crate::group::{BallTable, Group, GroupElement, WordLengths};
use num::complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

pub const POWER_ITERATION_CAP: u32 = 10_000;
const POWER_ITERATION_RELTOL: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct CompressedOperator {
    group: Group,
    /// Commutator order; 0 is the plain regular representation.
    k: u32,
    domain: Vec<GroupElement>,
    codomain: Vec<GroupElement>,
    /// Column-major sparse entries: per domain index, (codomain index, value),
    /// sorted by row.
    columns: Vec<Vec<(usize, Complex64)>>,
    domain_radius: u32,
    codomain_radius: u32,
    nnz: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CompressedNormLower {
    pub value: f64,
    pub domain_radius: u32,
    pub iterations: u32,
    pub converged: bool,
    pub flag: Option<String>,
}

/// Build the compression of the order-k commutator of f to the ball of
/// radius `n`. Entry (gh, h) carries a_g (l(gh) - l(h))^k.
pub fn compress(
    f: &ComplexElement,
    k: u32,
    n: u32,
    lengths: &mut WordLengths,
) -> Result<CompressedOperator> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "compression needs a domain ball of radius at least 1".into(),
        ));
    }
    let group = f.group().clone();
    if group != *lengths.group() {
        return Err(Error::ElementMismatch {
            expected: group.name(),
            got: lengths.group().name(),
        });
    }

    let mut max_supp = 0u32;
    for g in f.support() {
        max_supp = max_supp.max(super::resolve_length(lengths, g)?);
    }
    let n_prime = n + max_supp;

    // Enumeration needs a BFS table regardless of whether lengths have a
    // closed form; reuse the oracle's table when it has one.
    let owned: Option<BallTable> = if lengths.table().is_some() {
        lengths.table_mut().unwrap().extend_to(n_prime)?;
        None
    } else {
        let mut t = BallTable::new(group.clone());
        t.extend_to(n_prime)?;
        Some(t)
    };
    let table = owned
        .as_ref()
        .unwrap_or_else(|| lengths.table().expect("just extended"));

    let domain = table.elements_lex(n);
    let codomain = table.elements_lex(n_prime);
    let codomain_index: HashMap<&GroupElement, usize> =
        codomain.iter().enumerate().map(|(i, g)| (g, i)).collect();

    let mut columns = Vec::with_capacity(domain.len());
    let mut nnz = 0usize;
    for h in &domain {
        let lh = table.length(h)? as i64;
        let mut col: Vec<(usize, Complex64)> = Vec::with_capacity(f.support_size());
        for (g, a) in f.terms() {
            let gh = group.multiply(g, h)?;
            let row = *codomain_index
                .get(&gh)
                .expect("padded codomain contains every image");
            let value = if k == 0 {
                *a
            } else {
                let jump = table.length(&gh)? as i64 - lh;
                let p = jump
                    .checked_pow(k)
                    .ok_or(Error::Overflow { op: "length jump power" })?;
                if p == 0 {
                    continue;
                }
                a * p as f64
            };
            if Coefficient::is_zero(&value) {
                continue;
            }
            col.push((row, value));
        }
        col.sort_unstable_by_key(|&(row, _)| row);
        nnz += col.len();
        columns.push(col);
    }

    Ok(CompressedOperator {
        group,
        k,
        domain,
        codomain,
        columns,
        domain_radius: n,
        codomain_radius: n_prime,
        nnz,
    })
}

impl CompressedOperator {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn order(&self) -> u32 {
        self.k
    }

    pub fn domain_radius(&self) -> u32 {
        self.domain_radius
    }

    pub fn codomain_radius(&self) -> u32 {
        self.codomain_radius
    }

    /// (rows, cols).
    pub fn dims(&self) -> (usize, usize) {
        (self.codomain.len(), self.domain.len())
    }

    pub fn nnz(&self) -> usize {
        self.nnz
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) {
        y.fill(Complex64::new(0.0, 0.0));
        for (col, &xj) in self.columns.iter().zip(x.iter()) {
            if xj.re == 0.0 && xj.im == 0.0 {
                continue;
            }
            for &(i, v) in col {
                y[i] += v * xj;
            }
        }
    }

    fn adjoint_apply(&self, y: &[Complex64], z: &mut [Complex64]) {
        for (col, zj) in self.columns.iter().zip(z.iter_mut()) {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(i, v) in col {
                acc += v.conj() * y[i];
            }
            *zj = acc;
        }
    }

    /// Largest-singular-value lower bound by power iteration on the Gram
    /// operator. Deterministic: the start vector is the normalized all-ones
    /// vector, and the stop rule is a relative increment of 1e-8 on the
    /// Rayleigh value. Hitting the iteration cap is reported, not hidden;
    /// the last iterate is still a valid lower bound.
    pub fn norm_lower(&self) -> CompressedNormLower {
        let dim = self.domain.len();
        if dim == 0 || self.nnz == 0 {
            return CompressedNormLower {
                value: 0.0,
                domain_radius: self.domain_radius,
                iterations: 0,
                converged: true,
                flag: None,
            };
        }
        let mut x = vec![Complex64::new(1.0 / (dim as f64).sqrt(), 0.0); dim];
        let mut y = vec![Complex64::new(0.0, 0.0); self.codomain.len()];
        let mut z = vec![Complex64::new(0.0, 0.0); dim];
        let mut prev: Option<f64> = None;

        for it in 1..=POWER_ITERATION_CAP {
            self.apply(&x, &mut y);
            let sigma = l2(&y);
            if let Some(p) = prev {
                if (sigma - p).abs() <= POWER_ITERATION_RELTOL * sigma {
                    return CompressedNormLower {
                        value: sigma,
                        domain_radius: self.domain_radius,
                        iterations: it,
                        converged: true,
                        flag: None,
                    };
                }
            }
            prev = Some(sigma);
            self.adjoint_apply(&y, &mut z);
            let nz = l2(&z);
            if nz == 0.0 {
                // Gram-stationary start: sigma is then 0 as well, and 0 is
                // a (trivially) valid bound.
                return CompressedNormLower {
                    value: sigma,
                    domain_radius: self.domain_radius,
                    iterations: it,
                    converged: true,
                    flag: Some("start-vector-annihilated-trivial-bound".into()),
                };
            }
            for (xi, zi) in x.iter_mut().zip(z.iter()) {
                *xi = zi / nz;
            }
        }

        CompressedNormLower {
            value: prev.unwrap_or(0.0),
            domain_radius: self.domain_radius,
            iterations: POWER_ITERATION_CAP,
            converged: false,
            flag: Some("unconverged-lower-bound-still-valid".into()),
        }
    }

    /// Coordinate-format text dump: a dimension header, then one
    /// "row col re im" line per stored entry, column-major.
    pub fn to_coo_string(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        let (rows, cols) = self.dims();
        let _ = writeln!(out, "{} {} {}", rows, cols, self.nnz);
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, v) in col {
                let _ = writeln!(out, "{} {} {:.17e} {:.17e}", i, j, v.re, v.im);
            }
        }
        out
    }

    /// The square part indexed by domain elements on both sides, as a
    /// dense row-major matrix. Rows outside the domain ball are dropped;
    /// used to inspect symmetry of self-adjoint compressions.
    pub fn square_part(&self) -> Vec<Vec<Complex64>> {
        let dim = self.domain.len();
        let domain_index: HashMap<&GroupElement, usize> =
            self.domain.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let mut m = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, v) in col {
                if let Some(&i2) = domain_index.get(&self.codomain[i]) {
                    m[i2][j] = v;
                }
            }
        }
        m
    }

    /// Apply the compression to a finitely supported vector after
    /// projecting it onto the domain ball. Exposed for cross-checks
    /// against the exact commutator action.
    pub fn apply_projected(&self, v: &FinVector<Complex64>) -> Result<FinVector<Complex64>> {
        let domain_index: HashMap<&GroupElement, usize> =
            self.domain.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let mut x = vec![Complex64::new(0.0, 0.0); self.domain.len()];
        for (g, c) in v.entries() {
            if let Some(&j) = domain_index.get(g) {
                x[j] = *c;
            }
        }
        let mut y = vec![Complex64::new(0.0, 0.0); self.codomain.len()];
        self.apply(&x, &mut y);
        let entries = self
            .codomain
            .iter()
            .zip(y.iter())
            .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
            .map(|(g, c)| (g.clone(), *c))
            .collect();
        FinVector::from_entries(self.group.clone(), entries)
    }
}

fn l2(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}
