//! Eigenvalue certificates for integer matrices.
//!
//! The characteristic polynomial is computed exactly over i128, unit roots
//! x = 1 and x = -1 are split off by exact synthetic division, and only the
//! remaining factor goes to the floating-point root finder. Every result is
//! gated by the residual identity |det T| = prod |lambda_i|, which the
//! deflated part satisfies by construction.

use crate::error::{Error, Result};
use crate::group::IntMatrix;
use num::complex::Complex64;

/// Tolerance on | |det T| - prod |lambda_i| |.
pub const SPECTRAL_RESIDUAL_TOL: f64 = 1e-6;

/// Moduli this close to 1 are treated as lying on the unit circle.
const UNIT_CIRCLE_SNAP: f64 = 1e-9;

/// Coefficients of det(xI - A) in ascending degree order, monic.
///
/// Faddeev-LeVerrier recurrence; the trace divisions are exact for integer
/// input, so a non-zero remainder or an i128 overflow aborts rather than
/// rounding.
pub fn char_poly(a: &IntMatrix) -> Result<Vec<i128>> {
    let d = a.dim();
    let entries: Vec<Vec<i128>> = a
        .rows()
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();

    let mut coeffs = vec![0i128; d + 1];
    coeffs[d] = 1;
    // m starts as M_1 = I.
    let mut m: Vec<Vec<i128>> = (0..d)
        .map(|i| (0..d).map(|j| i128::from(i == j)).collect())
        .collect();

    for k in 1..=d {
        let am = mat_mul_i128(&entries, &m)?;
        let mut tr = 0i128;
        for (i, row) in am.iter().enumerate() {
            tr = tr
                .checked_add(row[i])
                .ok_or(Error::Overflow { op: "char_poly trace" })?;
        }
        if tr % (k as i128) != 0 {
            return Err(Error::RootFinding(format!(
                "Faddeev-LeVerrier trace {tr} not divisible by {k}"
            )));
        }
        coeffs[d - k] = -(tr / k as i128);
        if k < d {
            m = am;
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = row[i]
                    .checked_add(coeffs[d - k])
                    .ok_or(Error::Overflow { op: "char_poly update" })?;
            }
        }
    }
    Ok(coeffs)
}

fn mat_mul_i128(a: &[Vec<i128>], b: &[Vec<i128>]) -> Result<Vec<Vec<i128>>> {
    let d = a.len();
    let mut out = vec![vec![0i128; d]; d];
    for i in 0..d {
        for j in 0..d {
            let mut acc = 0i128;
            for k in 0..d {
                let prod = a[i][k]
                    .checked_mul(b[k][j])
                    .ok_or(Error::Overflow { op: "char_poly matmul" })?;
                acc = acc
                    .checked_add(prod)
                    .ok_or(Error::Overflow { op: "char_poly matmul" })?;
            }
            out[i][j] = acc;
        }
    }
    Ok(out)
}

/// Split off all (x - 1) and (x + 1) factors by exact synthetic division.
/// Returns the remaining monic factor and the two multiplicities.
fn deflate_unit_roots(coeffs: &[i128]) -> Result<(Vec<i128>, u32, u32)> {
    let mut p = coeffs.to_vec();
    let mut plus = 0u32;
    let mut minus = 0u32;
    for (root, count) in [(1i128, &mut plus), (-1i128, &mut minus)] {
        loop {
            if p.len() < 2 || eval_i128(&p, root)? != 0 {
                break;
            }
            p = synthetic_divide(&p, root)?;
            *count += 1;
        }
    }
    Ok((p, plus, minus))
}

fn eval_i128(coeffs: &[i128], x: i128) -> Result<i128> {
    let mut acc = 0i128;
    for &c in coeffs.iter().rev() {
        acc = acc
            .checked_mul(x)
            .and_then(|v| v.checked_add(c))
            .ok_or(Error::Overflow { op: "char_poly eval" })?;
    }
    Ok(acc)
}

fn synthetic_divide(coeffs: &[i128], root: i128) -> Result<Vec<i128>> {
    let n = coeffs.len() - 1;
    let mut q = vec![0i128; n];
    q[n - 1] = coeffs[n];
    for k in (0..n - 1).rev() {
        q[k] = coeffs[k + 1]
            .checked_add(
                root.checked_mul(q[k + 1])
                    .ok_or(Error::Overflow { op: "deflation" })?,
            )
            .ok_or(Error::Overflow { op: "deflation" })?;
    }
    let rem = coeffs[0] + root * q[0];
    if rem != 0 {
        return Err(Error::RootFinding(format!(
            "deflation at root {root} left remainder {rem}"
        )));
    }
    Ok(q)
}

fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// All complex roots of a monic integer polynomial.
///
/// Degrees one and two are solved in closed form; higher degrees run
/// Durand-Kerner followed by a Newton polish on each root.
fn poly_roots(coeffs: &[i128]) -> Result<Vec<Complex64>> {
    let deg = coeffs.len() - 1;
    match deg {
        0 => Ok(Vec::new()),
        1 => Ok(vec![Complex64::new(-(coeffs[0] as f64), 0.0)]),
        2 => Ok(quadratic_roots(coeffs[1] as f64, coeffs[0] as f64)),
        _ => durand_kerner(coeffs),
    }
}

/// Roots of x^2 + b x + c with the cancellation-safe split.
fn quadratic_roots(b: f64, c: f64) -> Vec<Complex64> {
    let disc = b * b - 4.0 * c;
    if disc >= 0.0 {
        let s = disc.sqrt();
        let q = -0.5 * (b + b.signum() * s);
        if q == 0.0 {
            // b = 0 and c <= 0: symmetric real pair.
            let r = (-c).sqrt();
            return vec![Complex64::new(r, 0.0), Complex64::new(-r, 0.0)];
        }
        vec![Complex64::new(q, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let im = (-disc).sqrt() * 0.5;
        let re = -b * 0.5;
        vec![Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

fn durand_kerner(coeffs: &[i128]) -> Result<Vec<Complex64>> {
    let deg = coeffs.len() - 1;
    let cf: Vec<f64> = coeffs.iter().map(|&c| c as f64).collect();
    let bound = 1.0
        + cf[..deg]
            .iter()
            .fold(0.0f64, |m, &c| m.max(c.abs()));

    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| {
            Complex64::from_polar(
                bound * 0.9,
                0.37 + 2.0 * std::f64::consts::PI * k as f64 / deg as f64,
            )
        })
        .collect();

    let mut converged = false;
    for _ in 0..2000 {
        let mut max_step = 0.0f64;
        for i in 0..deg {
            let p = horner(&cf, z[i]);
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if j != i {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                return Err(Error::RootFinding("Durand-Kerner collision".into()));
            }
            let step = p / denom;
            z[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-13 * (1.0 + bound) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::RootFinding(
            "Durand-Kerner did not converge within 2000 sweeps".into(),
        ));
    }

    // Newton polish squeezes out the last digits of the simultaneous pass.
    let dcf: Vec<f64> = cf
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * i as f64)
        .collect();
    for zi in &mut z {
        for _ in 0..4 {
            let dp = horner(&dcf, *zi);
            if dp.norm() < 1e-300 {
                break;
            }
            *zi -= horner(&cf, *zi) / dp;
        }
    }
    Ok(z)
}

#[derive(Debug, Clone)]
pub struct EigenEntropy {
    /// Sum of log-moduli over eigenvalues of modulus at least 1.
    pub entropy: f64,
    /// All eigenvalue moduli, descending, unit roots included.
    pub moduli: Vec<f64>,
    /// | |det T| - prod of moduli |, already checked against tolerance.
    pub residual: f64,
}

pub fn eigen_entropy(t: &IntMatrix) -> Result<EigenEntropy> {
    let moduli = eigen_moduli(t)?;
    let det_abs = t.det().unsigned_abs() as f64;
    let product: f64 = moduli.iter().product();
    let residual = (det_abs - product).abs();
    if residual > SPECTRAL_RESIDUAL_TOL {
        return Err(Error::SpectralResidual {
            residual,
            tol: SPECTRAL_RESIDUAL_TOL,
        });
    }
    let entropy = moduli
        .iter()
        .map(|&m| {
            if (m - 1.0).abs() <= UNIT_CIRCLE_SNAP || m < 1.0 {
                0.0
            } else {
                m.ln()
            }
        })
        .sum();
    Ok(EigenEntropy {
        entropy,
        moduli,
        residual,
    })
}

fn eigen_moduli(t: &IntMatrix) -> Result<Vec<f64>> {
    let coeffs = char_poly(t)?;
    let (rest, plus, minus) = deflate_unit_roots(&coeffs)?;
    let mut moduli: Vec<f64> = vec![1.0; (plus + minus) as usize];
    moduli.extend(poly_roots(&rest)?.iter().map(|z| z.norm()));
    moduli.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(moduli)
}

#[derive(Debug, Clone)]
pub struct HyperbolicityReport {
    pub is_hyperbolic: bool,
    pub max_modulus: f64,
}

/// A matrix counts as hyperbolic here when some eigenvalue has modulus at
/// least 2, the hypothesis needed for the distinct-signed-sums argument.
/// Unimodularity rules out a modulus of exactly 2, so the strict float
/// comparison is safe.
pub fn hyperbolicity(psi: &IntMatrix) -> Result<HyperbolicityReport> {
    let moduli = eigen_moduli(psi)?;
    let max_modulus = moduli.first().copied().unwrap_or(1.0);
    Ok(HyperbolicityReport {
        is_hyperbolic: max_modulus >= 2.0,
        max_modulus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat() -> IntMatrix {
        IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap()
    }

    #[test]
    fn cat_char_poly() {
        assert_eq!(char_poly(&cat()).unwrap(), vec![1, -3, 1]);
    }

    #[test]
    fn heisenberg_char_poly_is_shifted_power() {
        // (x - 1)^3 = x^3 - 3x^2 + 3x - 1.
        let h = IntMatrix::heisenberg(3);
        assert_eq!(char_poly(&h).unwrap(), vec![-1, 3, -3, 1]);
        let (rest, plus, minus) = deflate_unit_roots(&char_poly(&h).unwrap()).unwrap();
        assert_eq!((plus, minus), (3, 0));
        assert_eq!(rest, vec![1]);
    }

    #[test]
    fn cat_entropy_matches_golden_ratio_square() {
        let e = eigen_entropy(&cat()).unwrap();
        let expected = ((3.0 + 5.0f64.sqrt()) / 2.0).ln();
        assert!((e.entropy - expected).abs() < 1e-12, "got {}", e.entropy);
        assert!(e.residual < 1e-12);
    }

    #[test]
    fn unit_circle_spectra_have_zero_entropy() {
        let id = IntMatrix::identity(3);
        assert_eq!(eigen_entropy(&id).unwrap().entropy, 0.0);
        let rot = IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]).unwrap();
        // x^2 + 1: complex pair on the unit circle.
        let e = eigen_entropy(&rot).unwrap();
        assert!(e.entropy.abs() < 1e-12);
    }

    #[test]
    fn hyperbolicity_thresholds() {
        let h = hyperbolicity(&cat()).unwrap();
        assert!(h.is_hyperbolic);
        assert!((h.max_modulus - (3.0 + 5.0f64.sqrt()) / 2.0).abs() < 1e-9);
        assert!(!hyperbolicity(&IntMatrix::neg_identity(2)).unwrap().is_hyperbolic);
        assert!(!hyperbolicity(&IntMatrix::heisenberg(3)).unwrap().is_hyperbolic);
    }

    #[test]
    fn cubic_path_through_durand_kerner() {
        // Companion matrix of x^3 - x - 1; the real root is the plastic
        // number 1.3247..., the complex pair has modulus 1/sqrt(rho) < 1.
        let c = IntMatrix::from_rows(&[vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 0]]).unwrap();
        assert_eq!(char_poly(&c).unwrap(), vec![-1, -1, 0, 1]);
        let e = eigen_entropy(&c).unwrap();
        let mut rho = 1.3f64;
        for _ in 0..80 {
            rho = (1.0 + rho).powf(1.0 / 3.0);
        }
        assert!((e.entropy - rho.ln()).abs() < 1e-9, "got {}", e.entropy);
    }

    #[test]
    fn entropy_agrees_with_inverse_for_unimodular_input() {
        let inv = cat().inverse_unimodular().unwrap();
        let a = eigen_entropy(&cat()).unwrap().entropy;
        let b = eigen_entropy(&inv).unwrap().entropy;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn conjugation_leaves_hyperbolicity_alone() {
        let u = IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let ui = u.inverse_unimodular().unwrap();
        let conj = u.mul(&cat()).unwrap().mul(&ui).unwrap();
        let a = hyperbolicity(&cat()).unwrap();
        let b = hyperbolicity(&conj).unwrap();
        assert_eq!(a.is_hyperbolic, b.is_hyperbolic);
        assert!((a.max_modulus - b.max_modulus).abs() < 1e-9);
    }
}
