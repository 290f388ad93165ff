//! Coefficient rings for algebra elements.
//!
//! Two are supported: double-precision complex numbers for everything that
//! feeds a norm computation, and Gaussian rationals (exact rational real and
//! imaginary parts) for identity checks where any epsilon would weaken the
//! statement being tested.

use num::complex::Complex64;
use num::{BigRational, ToPrimitive, Zero};
use std::fmt;

pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    /// Exact zero test; float coefficients are pruned only when both parts
    /// are literally 0.0 so support sets never change silently.
    fn is_zero(&self) -> bool;
    fn abs(&self) -> f64;
    fn abs_sq(&self) -> f64;

    fn scale_int(&self, n: i64) -> Self {
        self.mul(&Self::from_int(n))
    }
}

impl Coefficient for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn abs(&self) -> f64 {
        self.norm()
    }
    fn abs_sq(&self) -> f64 {
        self.norm_sqr()
    }
}

/// Exact complex number with rational real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    /// `re_num/re_den + (im_num/im_den) i`; denominators must be non-zero.
    pub fn from_ratios(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        GaussianRational {
            re: BigRational::new(re_num.into(), re_den.into()),
            im: BigRational::new(im_num.into(), im_den.into()),
        }
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", self.re, self.im)
    }
}

impl Coefficient for GaussianRational {
    fn zero() -> Self {
        GaussianRational {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }
    fn one() -> Self {
        GaussianRational {
            re: BigRational::from_integer(1.into()),
            im: BigRational::zero(),
        }
    }
    fn from_int(n: i64) -> Self {
        GaussianRational {
            re: BigRational::from_integer(n.into()),
            im: BigRational::zero(),
        }
    }
    fn add(&self, other: &Self) -> Self {
        GaussianRational {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }
    fn sub(&self, other: &Self) -> Self {
        GaussianRational {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        }
    }
    fn mul(&self, other: &Self) -> Self {
        GaussianRational {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }
    fn neg(&self) -> Self {
        GaussianRational {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
    fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn abs(&self) -> f64 {
        self.abs_sq().sqrt()
    }
    fn abs_sq(&self) -> f64 {
        let sq = &self.re * &self.re + &self.im * &self.im;
        sq.to_f64().expect("rational magnitude out of f64 range")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_rational_field_ops() {
        let a = GaussianRational::from_ratios(1, 2, 1, 3);
        let b = GaussianRational::from_ratios(-1, 2, 2, 3);
        // (1/2 + i/3)(-1/2 + 2i/3) = -1/4 - 2/9 + i(1/3 - 1/6)... expand:
        // re: (1/2)(-1/2) - (1/3)(2/3) = -1/4 - 2/9 = -17/36
        // im: (1/2)(2/3) + (1/3)(-1/2) = 1/3 - 1/6 = 1/6
        let p = a.mul(&b);
        assert_eq!(p, GaussianRational::from_ratios(-17, 36, 1, 6));
        assert_eq!(a.add(&a.neg()), Coefficient::zero());
        assert_eq!(a.conj().conj(), a);
        assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn complex_pruning_is_exact_zero_only() {
        let tiny = Complex64::new(1e-300, 0.0);
        assert!(!Coefficient::is_zero(&tiny));
        assert!(Coefficient::is_zero(&Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn magnitudes_agree_between_rings() {
        let q = GaussianRational::from_ratios(3, 1, 4, 1);
        assert_eq!(q.abs(), 5.0);
        let z = Complex64::new(3.0, 4.0);
        assert_eq!(Coefficient::abs(&z), 5.0);
    }
}
