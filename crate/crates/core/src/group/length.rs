//! Word lengths for the standard symmetric generating sets.
//!
//! `Z^d` and `F_m` have closed forms (the l1 norm, respectively the reduced
//! word length). Semidirect products fall back to the BFS table. For the
//! sign-flip twist `phi = -I` the formula `l(v, k) = |v|_1 + |k|` is
//! plausible but is treated as a conjecture: it becomes available only
//! after an explicit validation pass against BFS on a caller-chosen radius,
//! and the validation radius is recorded on the oracle.

use super::{BallTable, Coord, Group, GroupElement};
use crate::error::{Error, Result};

/// Word-length oracle for one group.
///
/// Lookups never extend the BFS horizon on their own; a miss is a
/// [`Error::HorizonExhausted`] and the caller decides whether to pay for
/// [`WordLengths::ensure_radius`]. This keeps enumeration cost explicit.
#[derive(Debug, Clone)]
pub struct WordLengths {
    group: Group,
    table: Option<BallTable>,
    accel_validated_to: Option<u32>,
}

impl WordLengths {
    pub fn new(group: Group) -> Self {
        let table = match group {
            Group::SemidirectZ { .. } => Some(BallTable::new(group.clone())),
            _ => None,
        };
        WordLengths {
            group,
            table,
            accel_validated_to: None,
        }
    }

    /// Build a semidirect oracle around an existing (possibly cached) table.
    pub fn from_table(table: BallTable) -> Self {
        WordLengths {
            group: table.group().clone(),
            table: Some(table),
            accel_validated_to: None,
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn table(&self) -> Option<&BallTable> {
        self.table.as_ref()
    }

    pub fn table_mut(&mut self) -> Option<&mut BallTable> {
        self.table.as_mut()
    }

    /// Radius below which lengths resolve without error. Closed forms have
    /// no horizon.
    pub fn horizon(&self) -> Option<u32> {
        match &self.group {
            Group::FreeAbelian { .. } | Group::Free { .. } => None,
            Group::SemidirectZ { .. } => {
                if self.accel_validated_to.is_some() {
                    None
                } else {
                    self.table.as_ref().map(|t| t.radius())
                }
            }
        }
    }

    /// Extend the BFS horizon to `r` (no-op for closed-form groups, and for
    /// semidirect oracles whose validated formula already covers everything).
    pub fn ensure_radius(&mut self, r: u32) -> Result<()> {
        if self.accel_validated_to.is_some() {
            return Ok(());
        }
        if let Some(t) = self.table.as_mut() {
            t.extend_to(r)?;
        }
        Ok(())
    }

    /// Validate `l(v, k) = |v|_1 + |k|` against BFS out to `radius` and, if
    /// every element agrees, enable it as the length formula from then on.
    /// Only meaningful for `phi = -I`; other twists are rejected because no
    /// formula is conjectured for them.
    pub fn validate_sign_flip_formula(&mut self, radius: u32) -> Result<()> {
        match &self.group {
            Group::SemidirectZ { twist, .. } if twist.is_neg_identity() => {}
            _ => {
                return Err(Error::InvalidParameter(
                    "length formula is only conjectured for the -I twist".into(),
                ))
            }
        }
        let table = self.table.as_mut().expect("semidirect oracle has a table");
        table.extend_to(radius)?;
        for r in 0..=radius {
            for g in table.layer(r) {
                let formula = sign_flip_length(g)?;
                if formula != r {
                    return Err(Error::InvalidParameter(format!(
                        "length formula fails at {g}: BFS {r}, formula {formula}"
                    )));
                }
            }
        }
        // BFS must also have seen every formula-ball element, otherwise the
        // formula undercounts somewhere outside the enumerated set.
        let expected = z1_cross_zd_ball(self.group.rank(), radius);
        let seen = table.ball_size(radius);
        if seen != expected {
            return Err(Error::InvalidParameter(format!(
                "ball size {seen} at radius {radius} disagrees with formula count {expected}"
            )));
        }
        self.accel_validated_to = Some(radius);
        Ok(())
    }

    pub fn formula_validated_to(&self) -> Option<u32> {
        self.accel_validated_to
    }

    pub fn length(&self, g: &GroupElement) -> Result<u32> {
        match (&self.group, g) {
            (Group::FreeAbelian { rank }, GroupElement::Vector(v)) if v.len() == *rank => {
                l1_norm(v)
            }
            (Group::Free { .. }, GroupElement::Word(w)) => Ok(w.len() as u32),
            (Group::SemidirectZ { .. }, GroupElement::Semi { .. }) => {
                if self.accel_validated_to.is_some() {
                    sign_flip_length(g)
                } else {
                    self.table
                        .as_ref()
                        .expect("semidirect oracle has a table")
                        .length(g)
                }
            }
            _ => Err(Error::ElementMismatch {
                expected: self.group.name(),
                got: format!("{g}"),
            }),
        }
    }

    /// Largest word length over the support of `elems`.
    pub fn max_length<'a>(
        &self,
        elems: impl IntoIterator<Item = &'a GroupElement>,
    ) -> Result<u32> {
        let mut max = 0;
        for g in elems {
            max = max.max(self.length(g)?);
        }
        Ok(max)
    }
}

fn l1_norm(v: &[Coord]) -> Result<u32> {
    let mut acc: u64 = 0;
    for &c in v {
        acc = acc
            .checked_add(c.unsigned_abs())
            .ok_or(Error::Overflow { op: "l1 norm" })?;
    }
    u32::try_from(acc).map_err(|_| Error::Overflow { op: "l1 norm" })
}

fn sign_flip_length(g: &GroupElement) -> Result<u32> {
    match g {
        GroupElement::Semi { v, k } => {
            let base = l1_norm(v)? as u64 + k.unsigned_abs();
            u32::try_from(base).map_err(|_| Error::Overflow { op: "word length" })
        }
        _ => unreachable!(),
    }
}

/// `|{(v, k) : |v|_1 + |k| <= n}|`, i.e. the l1 ball of `Z^(rank+1)`.
fn z1_cross_zd_ball(rank: usize, n: u32) -> u64 {
    let mut acc: u64 = 0;
    for k in -(n as i64)..=n as i64 {
        acc += zd_ball_count(rank, n - k.unsigned_abs() as u32);
    }
    acc
}

fn zd_ball_count(d: usize, n: u32) -> u64 {
    // sum_j 2^j C(d, j) C(n, j)
    let mut acc: u64 = 0;
    for j in 0..=d.min(n as usize) {
        acc += (1u64 << j) * binomial(d as u64, j as u64) * binomial(n as u64, j as u64);
    }
    acc
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}
