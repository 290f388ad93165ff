//! Computational toolkit for word metrics, commutator-weighted seminorms,
//! and dimension/entropy estimates on reduced group algebras of finitely
//! generated groups.
//!
//! Everything downstream of a measurement is a certified bound pair, never
//! a bare point estimate: norm estimates come as (lower, upper) with the
//! method of each side recorded, and dimension/entropy quantities carry the
//! counts or spectra that justify them.
//!
//! Layering, bottom up:
//!
//! * [`group`]: normal forms, word lengths, ball enumeration, growth fits;
//! * [`automorphism`]: lattice and inner automorphisms, Lipschitz
//!   certificates, spectra of integer matrices;
//! * [`algebra`]: finitely supported convolution algebra over `f64` complex
//!   or exact Gaussian-rational coefficients;
//! * [`operator`]: the regular representation, iterated commutator weights,
//!   compressions and their certified norm bounds;
//! * [`dimension`], [`mdim`], [`entropy`]: finite-approximation dimension,
//!   metric-dimension slopes, product-set entropy estimates.

#![forbid(unsafe_code)]

pub mod algebra;
pub mod automorphism;
pub mod dimension;
pub mod entropy;
pub mod error;
pub mod fit;
pub mod group;
pub mod hash;
pub mod mdim;
pub mod operator;

pub use error::{Error, Result};

/// Crate version, echoed into experiment reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
