//! Automorphisms of the supported groups and their metric certificates.
//!
//! Lattice automorphisms are unimodular integer matrices; on a semidirect
//! product `Z^d x| Z` a matrix acts as `(v, k) -> (psi v, k)` provided it
//! commutes with the twist. Inner automorphisms conjugate by a fixed
//! element and exist for every group.

mod spectral;

pub use spectral::{char_poly, eigen_entropy, hyperbolicity, EigenEntropy, HyperbolicityReport};

use crate::error::{Error, Result};
use crate::group::{Group, GroupElement, IntMatrix, WordLengths};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Action {
    Identity,
    /// `v -> psi v` on a free abelian group.
    Linear(IntMatrix),
    /// `(v, k) -> (psi v, k)` on a semidirect product; requires
    /// `psi phi = phi psi` so the map respects the twisted multiplication.
    ExtendedLinear(IntMatrix),
    /// `g -> h g h^-1`.
    Inner(GroupElement),
}

#[derive(Debug, Clone)]
pub struct GroupAutomorphism {
    group: Group,
    action: Action,
}

impl GroupAutomorphism {
    pub fn new(group: Group, action: Action) -> Result<Self> {
        match (&group, &action) {
            (_, Action::Identity) => {}
            (Group::FreeAbelian { rank }, Action::Linear(m)) => {
                if m.dim() != *rank {
                    return Err(Error::DimensionMismatch {
                        expected: *rank,
                        got: m.dim(),
                    });
                }
                m.inverse_unimodular()?;
            }
            (Group::SemidirectZ { rank, twist, .. }, Action::ExtendedLinear(m)) => {
                if m.dim() != *rank {
                    return Err(Error::DimensionMismatch {
                        expected: *rank,
                        got: m.dim(),
                    });
                }
                m.inverse_unimodular()?;
                if !m.commutes_with(twist)? {
                    return Err(Error::InvalidParameter(
                        "matrix does not commute with the twist, so (v,k) -> (psi v, k) \
                         is not a homomorphism"
                            .into(),
                    ));
                }
            }
            (g, Action::Inner(h)) => {
                if !g.contains(h) {
                    return Err(Error::ElementMismatch {
                        expected: g.name(),
                        got: format!("{h}"),
                    });
                }
            }
            _ => {
                return Err(Error::InvalidParameter(
                    "action kind does not match the group family".into(),
                ))
            }
        }
        Ok(GroupAutomorphism { group, action })
    }

    pub fn identity(group: Group) -> Self {
        GroupAutomorphism {
            group,
            action: Action::Identity,
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn action(&self) -> &Action {
        &self.action
    }

    pub fn describe(&self) -> String {
        match &self.action {
            Action::Identity => "identity".into(),
            Action::Linear(m) => format!("linear {m}"),
            Action::ExtendedLinear(m) => format!("extended linear {m}"),
            Action::Inner(h) => format!("inner Ad_{h}"),
        }
    }

    pub fn apply(&self, g: &GroupElement) -> Result<GroupElement> {
        match &self.action {
            Action::Identity => Ok(g.clone()),
            Action::Linear(m) => match g {
                GroupElement::Vector(v) => Ok(GroupElement::Vector(m.matvec(v)?)),
                _ => Err(Error::ElementMismatch {
                    expected: self.group.name(),
                    got: format!("{g}"),
                }),
            },
            Action::ExtendedLinear(m) => match g {
                GroupElement::Semi { v, k } => Ok(GroupElement::Semi {
                    v: m.matvec(v)?,
                    k: *k,
                }),
                _ => Err(Error::ElementMismatch {
                    expected: self.group.name(),
                    got: format!("{g}"),
                }),
            },
            Action::Inner(h) => self.group.conjugate(h, g),
        }
    }
}

/// Word-metric Lipschitz certificate for an automorphism.
///
/// By subadditivity of word length, `max_s l(alpha(s))` over the symmetric
/// generating set is an exact Lipschitz constant: any length-n word maps to
/// a product of n generator images. The ball scan recorded alongside is
/// defense in depth, not the source of the constant.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LipschitzCertificate {
    pub lambda: u32,
    /// A generator attaining the maximum image length.
    pub witness_generator: String,
    /// Per-generator image lengths backing the maximum.
    pub generator_lengths: Vec<(String, u32)>,
    pub validation_radius: u32,
    /// max over the scanned ball minus identity of l(alpha(g)) / l(g).
    pub max_observed_ratio: f64,
}

pub fn lipschitz_constant(
    auto: &GroupAutomorphism,
    lengths: &WordLengths,
    validation_radius: u32,
) -> Result<LipschitzCertificate> {
    let mut lambda = 0u32;
    let mut witness = String::new();
    let mut per = Vec::new();
    for s in auto.group().generators() {
        let image = auto.apply(&s)?;
        let l = lengths.length(&image)?;
        if l > lambda {
            lambda = l;
            witness = format!("{s}");
        }
        per.push((format!("{s}"), l));
    }

    let table = match lengths.table() {
        Some(t) if t.radius() >= validation_radius => t.clone(),
        _ => {
            let mut t = crate::group::BallTable::new(auto.group().clone());
            t.extend_to(validation_radius)?;
            t
        }
    };
    let mut max_ratio = 0.0f64;
    for r in 1..=validation_radius {
        for g in table.layer(r) {
            let image = auto.apply(g)?;
            let li = lengths.length(&image)?;
            max_ratio = max_ratio.max(li as f64 / r as f64);
            if li > lambda * r {
                return Err(Error::InvalidParameter(format!(
                    "Lipschitz violation at {g}: l(image) = {li} > {lambda} * {r}"
                )));
            }
        }
    }
    Ok(LipschitzCertificate {
        lambda,
        witness_generator: witness,
        generator_lengths: per,
        validation_radius,
        max_observed_ratio: max_ratio,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolynomialBoundReport {
    pub checked: usize,
    /// max over samples of l(psi^n v) / (d n^(d-1) l(v)).
    pub max_ratio: f64,
    pub pass: bool,
}

/// Check `l(psi^n v) <= d n^(d-1) l(v)` for every `v` in the l1 ball of
/// `ball_radius` and every `n <= n_max`, where `psi` is the generalized
/// Heisenberg matrix (ones on diagonal and superdiagonal) and lengths are
/// l1 norms on the lattice. Rejects any other matrix shape because the
/// bound is specific to that unipotent form.
pub fn polynomial_length_bound_check(
    psi: &IntMatrix,
    ball_radius: u32,
    n_max: u32,
) -> Result<PolynomialBoundReport> {
    if !psi.is_heisenberg() {
        return Err(Error::InvalidParameter(
            "polynomial length bound requires the Heisenberg matrix shape".into(),
        ));
    }
    let d = psi.dim() as f64;
    let group = Group::free_abelian(psi.dim())?;
    let mut table = crate::group::BallTable::new(group);
    table.extend_to(ball_radius)?;
    let mut checked = 0usize;
    let mut max_ratio: f64 = 0.0;
    for r in 1..=ball_radius {
        for g in table.layer(r) {
            let v = g.vector_coords().unwrap();
            let lv: u64 = v.iter().map(|c| c.unsigned_abs()).sum();
            let mut cur = v.to_vec();
            for n in 1..=n_max {
                cur = psi.matvec(&cur)?;
                let ln: u64 = cur.iter().map(|c| c.unsigned_abs()).sum();
                let bound = d * (n as f64).powi(psi.dim() as i32 - 1) * lv as f64;
                let ratio = ln as f64 / bound;
                max_ratio = max_ratio.max(ratio);
                checked += 1;
                if ratio > 1.0 {
                    return Ok(PolynomialBoundReport {
                        checked,
                        max_ratio,
                        pass: false,
                    });
                }
            }
        }
    }
    Ok(PolynomialBoundReport {
        checked,
        max_ratio,
        pass: true,
    })
}
