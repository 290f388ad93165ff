//! Product-set growth under an automorphism, the distinct-signed-sums
//! witness search, and the entropy certificates built from them.
//!
//! Cardinalities are exact: sets are deduplicated on normal forms, never
//! estimated. Lattice seeds with rank at most four run on fixed-size
//! integer keys; everything else falls back to hashing full normal forms.

use crate::automorphism::{
    Action, GroupAutomorphism, LipschitzCertificate, PolynomialBoundReport,
};
use crate::error::{Error, Result};
use crate::group::{BallTable, Coord, Group, GroupElement, IntMatrix};
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

pub const DEFAULT_CARDINALITY_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProductSetTrace {
    pub automorphism: String,
    pub seed: Vec<String>,
    /// cardinalities[i] is the exact size of the i+1 step product set.
    pub cardinalities: Vec<u64>,
    /// rates[i] = ln(cardinalities[i]) / (i+1).
    pub rates: Vec<f64>,
    /// Set when the cap cut the trace short; the recorded prefix is exact.
    pub truncated: bool,
    pub cap: u64,
}

impl ProductSetTrace {
    pub fn steps(&self) -> u32 {
        self.cardinalities.len() as u32
    }
}

/// Exact |P_n| for P_1 = seed and P_{n+1} = P_n * alpha^n(seed).
pub fn product_set_growth(
    auto: &GroupAutomorphism,
    seed: &[GroupElement],
    n_max: u32,
    cap: u64,
) -> Result<ProductSetTrace> {
    if seed.is_empty() || n_max == 0 {
        return Err(Error::InvalidParameter(
            "product-set growth needs a nonempty seed and n_max >= 1".into(),
        ));
    }
    let group = auto.group();
    for g in seed {
        if !group.contains(g) {
            return Err(Error::ElementMismatch {
                expected: group.name(),
                got: format!("{g}"),
            });
        }
    }

    let counts = match lattice_fast_path(auto) {
        Some(psi) => lattice_product_counts(group, psi, seed, n_max, cap)?,
        None => general_product_counts(auto, seed, n_max, cap)?,
    };

    let truncated = (counts.len() as u32) < n_max;
    let rates = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| (c as f64).ln() / (i + 1) as f64)
        .collect();
    Ok(ProductSetTrace {
        automorphism: auto.describe(),
        seed: seed.iter().map(|g| format!("{g}")).collect(),
        cardinalities: counts,
        rates,
        truncated,
        cap,
    })
}

/// Lattice seeds under a linear (or trivial) action multiply by key
/// addition; rank at most four fits the fixed-size key.
fn lattice_fast_path(auto: &GroupAutomorphism) -> Option<Option<&IntMatrix>> {
    match (auto.group(), auto.action()) {
        (Group::FreeAbelian { rank }, Action::Identity) if *rank <= 4 => Some(None),
        (Group::FreeAbelian { rank }, Action::Linear(m)) if *rank <= 4 => Some(Some(m)),
        _ => None,
    }
}

type Key = [i64; 4];

fn encode(v: &[Coord]) -> Key {
    let mut k = [0i64; 4];
    k[..v.len()].copy_from_slice(v);
    k
}

fn lattice_product_counts(
    group: &Group,
    psi: Option<&IntMatrix>,
    seed: &[GroupElement],
    n_max: u32,
    cap: u64,
) -> Result<Vec<u64>> {
    let rank = group.rank();
    let mut omega: Vec<Key> = seed
        .iter()
        .map(|g| encode(g.vector_coords().expect("lattice seed")))
        .collect();
    omega.sort_unstable();
    omega.dedup();

    let mut current: HashSet<Key> = omega.iter().copied().collect();
    let mut counts = vec![current.len() as u64];

    for _ in 2..=n_max {
        if let Some(m) = psi {
            for w in &mut omega {
                let image = m.matvec(&w[..rank])?;
                *w = encode(&image);
            }
        }
        let mut next: HashSet<Key> =
            HashSet::with_capacity(current.len().saturating_mul(2));
        'layer: for p in &current {
            for w in &omega {
                let mut s = [0i64; 4];
                for i in 0..rank {
                    s[i] = p[i]
                        .checked_add(w[i])
                        .ok_or(Error::Overflow { op: "product set sum" })?;
                }
                next.insert(s);
                if next.len() as u64 > cap {
                    break 'layer;
                }
            }
        }
        if next.len() as u64 > cap {
            return Ok(counts);
        }
        counts.push(next.len() as u64);
        current = next;
    }
    Ok(counts)
}

fn general_product_counts(
    auto: &GroupAutomorphism,
    seed: &[GroupElement],
    n_max: u32,
    cap: u64,
) -> Result<Vec<u64>> {
    let group = auto.group();
    let mut omega: Vec<GroupElement> = seed.to_vec();
    omega.sort_unstable();
    omega.dedup();

    let mut current: HashSet<GroupElement> = omega.iter().cloned().collect();
    let mut counts = vec![current.len() as u64];

    for _ in 2..=n_max {
        omega = omega
            .iter()
            .map(|w| auto.apply(w))
            .collect::<Result<Vec<_>>>()?;
        let mut next: HashSet<GroupElement> =
            HashSet::with_capacity(current.len().saturating_mul(2));
        'layer: for p in &current {
            for w in &omega {
                next.insert(group.multiply(p, w)?);
                if next.len() as u64 > cap {
                    break 'layer;
                }
            }
        }
        if next.len() as u64 > cap {
            return Ok(counts);
        }
        counts.push(next.len() as u64);
        current = next;
    }
    Ok(counts)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessSearch {
    /// First lattice vector (in ball order) whose signed sums stay distinct.
    pub witness: Option<Vec<Coord>>,
    pub candidates_checked: usize,
    /// Whether the matrix meets the modulus-2 eigenvalue hypothesis; the
    /// search runs either way, the flag records the theory context.
    pub hyperbolic: bool,
    pub max_modulus: f64,
    pub n_check: u32,
    pub search_radius: u32,
}

/// Scan the lattice ball for a vector v whose 2^(n_check+1) sums
/// sum of eps_k psi^k(v), eps in {0,1}, are pairwise distinct.
pub fn hyperbolic_witness_search(
    psi: &IntMatrix,
    search_radius: u32,
    n_check: u32,
) -> Result<WitnessSearch> {
    let hyp = crate::automorphism::hyperbolicity(psi)?;
    let group = Group::free_abelian(psi.dim())?;
    let mut ball = BallTable::new(group);
    ball.extend_to(search_radius)?;

    let mut checked = 0usize;
    let mut witness = None;
    for v in ball.elements_lex(search_radius) {
        let coords = v.vector_coords().expect("lattice ball");
        if coords.iter().all(|&c| c == 0) {
            continue;
        }
        checked += 1;
        if signed_sums_distinct(psi, coords, n_check)? {
            witness = Some(coords.to_vec());
            break;
        }
    }
    Ok(WitnessSearch {
        witness,
        candidates_checked: checked,
        hyperbolic: hyp.is_hyperbolic,
        max_modulus: hyp.max_modulus,
        n_check,
        search_radius,
    })
}

/// Grows the sum set one power at a time; any collision shows up as a
/// failed insertion, so a doubling failure aborts early.
fn signed_sums_distinct(psi: &IntMatrix, v: &[Coord], n_check: u32) -> Result<bool> {
    let rank = psi.dim();
    let mut power = v.to_vec();
    let mut sums: HashSet<Key> = HashSet::with_capacity(1 << (n_check + 1));
    sums.insert([0; 4]);
    let mut elems: Vec<Key> = vec![[0; 4]];

    for k in 0..=n_check {
        if k > 0 {
            power = psi.matvec(&power)?;
        }
        let pk = encode(&power);
        let mut fresh = Vec::with_capacity(elems.len());
        for e in &elems {
            let mut s = [0i64; 4];
            for i in 0..rank {
                s[i] = e[i]
                    .checked_add(pk[i])
                    .ok_or(Error::Overflow { op: "signed sum" })?;
            }
            if !sums.insert(s) {
                return Ok(false);
            }
            fresh.push(s);
        }
        elems.extend(fresh);
    }
    Ok(true)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntropyLower {
    /// Minimum consecutive log-slope over the tail window: a conservative
    /// reading of the asymptotic rate.
    pub rate: f64,
    /// Inclusive step range (1-based) the slopes were taken from.
    pub window: (u32, u32),
    /// Per-step certified quantity ln((1 - delta^2) |P_n|) / n.
    pub per_step_certified: Vec<f64>,
    pub delta: f64,
}

/// Conservative growth rate of a product-set trace. The counting argument
/// certifies (1 - delta^2)|P_n| approximation dimensions; the limiting
/// rate does not depend on delta and is estimated as the minimum of the
/// consecutive slopes of ln|P_n| over the last third of the trace.
pub fn entropy_lower_estimate(trace: &ProductSetTrace, delta: f64) -> Result<EntropyLower> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "counting certificate needs delta in (0,1), got {delta}"
        )));
    }
    let len = trace.cardinalities.len();
    if len < 6 {
        return Err(Error::InvalidParameter(format!(
            "trace too short for a tail estimate: {len} < 6 steps"
        )));
    }

    let start = (2 * len) / 3 - 1;
    let mut rate = f64::INFINITY;
    for i in start..len - 1 {
        let slope =
            (trace.cardinalities[i + 1] as f64).ln() - (trace.cardinalities[i] as f64).ln();
        rate = rate.min(slope);
    }

    let factor = (1.0 - delta * delta).ln();
    let per_step_certified = trace
        .cardinalities
        .iter()
        .enumerate()
        .map(|(i, &c)| ((c as f64).ln() + factor) / (i + 1) as f64)
        .collect();

    Ok(EntropyLower {
        rate,
        window: (start as u32 + 1, len as u32),
        per_step_certified,
        delta,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum UpperCertificate {
    /// rate bound r ln(lambda) from a growth exponent r.
    GrowthExponent { exponent: f64 },
    /// k d ln(lambda) from the seminorm order and a dimension bound.
    SeminormOrder { k: u32, dim: usize },
    /// Certified zero from the unipotent polynomial length bound.
    PolynomialLengthBound,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntropyUpper {
    pub value: f64,
    pub lambda: Option<u32>,
    pub certificate: UpperCertificate,
}

pub fn entropy_upper_growth(
    lip: &LipschitzCertificate,
    exponent: f64,
) -> Result<EntropyUpper> {
    if !(exponent > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "growth exponent must be positive, got {exponent}"
        )));
    }
    Ok(EntropyUpper {
        value: exponent * (lip.lambda as f64).ln(),
        lambda: Some(lip.lambda),
        certificate: UpperCertificate::GrowthExponent { exponent },
    })
}

pub fn entropy_upper_order(
    lip: &LipschitzCertificate,
    k: u32,
    dim: usize,
) -> Result<EntropyUpper> {
    if k == 0 || dim == 0 {
        return Err(Error::InvalidParameter(
            "order certificate needs k >= 1 and a positive dimension bound".into(),
        ));
    }
    Ok(EntropyUpper {
        value: (k as f64) * (dim as f64) * (lip.lambda as f64).ln(),
        lambda: Some(lip.lambda),
        certificate: UpperCertificate::SeminormOrder { k, dim },
    })
}

pub fn entropy_upper_polynomial_zero(bound: &PolynomialBoundReport) -> Result<EntropyUpper> {
    if !bound.pass {
        return Err(Error::InvalidParameter(
            "polynomial length bound did not hold; no zero certificate".into(),
        ));
    }
    Ok(EntropyUpper {
        value: 0.0,
        lambda: None,
        certificate: UpperCertificate::PolynomialLengthBound,
    })
}
