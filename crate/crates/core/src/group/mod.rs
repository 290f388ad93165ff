//! Finitely generated groups with explicit normal forms.
//!
//! Three families are supported:
//!
//! * free abelian groups `Z^d`, elements stored as coordinate vectors;
//! * free groups `F_m`, elements stored as reduced words over signed
//!   generator indices;
//! * semidirect products `Z^d x| Z` twisted by a unimodular integer matrix
//!   `phi`, elements stored as a pair `(v, k)` with multiplication
//!   `(v, k) * (w, m) = (v + phi^k(w), k + m)`.
//!
//! Normal forms are canonical, so derived equality, hashing, and ordering
//! are structural. The derived `Ord` is the lexicographic order on normal
//! forms used wherever a deterministic enumeration order is needed.
//!
//! All coordinate arithmetic is checked; an overflow aborts the computation
//! with [`Error::Overflow`] rather than wrapping silently.

mod ball;
mod growth;
mod length;

pub use ball::{BallTable, CACHE_FORMAT_VERSION};
pub use growth::{
    ball_count, growth_exponent_fit, growth_sequence, FitWindow, GrowthFit, GrowthSequence,
    EXPONENTIAL_RATE_THRESHOLD,
};
pub use length::WordLengths;

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Lattice coordinate type. Machine words with checked arithmetic: the
/// experiments stay far below `i64` range, and any excursion past it is a
/// hard error instead of a silent wrap.
pub type Coord = i64;

fn checked_add(a: Coord, b: Coord, op: &'static str) -> Result<Coord> {
    a.checked_add(b).ok_or(Error::Overflow { op })
}

/// Dense square integer matrix, row major. Small: `dim` is the lattice rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<Coord>,
}

impl IntMatrix {
    pub fn from_rows(rows: &[Vec<Coord>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidParameter(
                "matrix rows must be nonempty and square".into(),
            ));
        }
        Ok(IntMatrix {
            dim,
            entries: rows.concat(),
        })
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = IntMatrix {
            dim,
            entries: vec![0; dim * dim],
        };
        for i in 0..dim {
            m.entries[i * dim + i] = 1;
        }
        m
    }

    pub fn neg_identity(dim: usize) -> Self {
        let mut m = IntMatrix::identity(dim);
        for e in &mut m.entries {
            *e = -*e;
        }
        m
    }

    /// Ones on the diagonal and the superdiagonal, zero elsewhere.
    pub fn heisenberg(dim: usize) -> Self {
        let mut m = IntMatrix::identity(dim);
        for i in 0..dim.saturating_sub(1) {
            m.entries[i * dim + i + 1] = 1;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Coord {
        self.entries[i * self.dim + j]
    }

    pub fn rows(&self) -> Vec<Vec<Coord>> {
        self.entries.chunks(self.dim).map(|c| c.to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.dim)
    }

    pub fn is_neg_identity(&self) -> bool {
        *self == IntMatrix::neg_identity(self.dim)
    }

    pub fn is_heisenberg(&self) -> bool {
        *self == IntMatrix::heisenberg(self.dim)
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let d = self.dim;
        let mut out = vec![0 as Coord; d * d];
        for i in 0..d {
            for j in 0..d {
                let mut acc: i128 = 0;
                for l in 0..d {
                    acc += self.get(i, l) as i128 * other.get(l, j) as i128;
                }
                out[i * d + j] = i128_to_coord(acc, "matrix product")?;
            }
        }
        Ok(IntMatrix {
            dim: d,
            entries: out,
        })
    }

    pub fn matvec(&self, v: &[Coord]) -> Result<Vec<Coord>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        let d = self.dim;
        let mut out = vec![0 as Coord; d];
        for i in 0..d {
            let mut acc: i128 = 0;
            for j in 0..d {
                acc += self.get(i, j) as i128 * v[j] as i128;
            }
            out[i] = i128_to_coord(acc, "matrix-vector product")?;
        }
        Ok(out)
    }

    pub fn commutes_with(&self, other: &IntMatrix) -> Result<bool> {
        Ok(self.mul(other)? == other.mul(self)?)
    }

    /// Exact determinant by cofactor expansion. Rank stays tiny here (the
    /// lattice rank of a group), so the factorial cost is irrelevant.
    pub fn det(&self) -> i128 {
        fn det_rec(d: usize, m: &[i128]) -> i128 {
            if d == 1 {
                return m[0];
            }
            let mut acc: i128 = 0;
            let mut sign: i128 = 1;
            for col in 0..d {
                let mut minor = Vec::with_capacity((d - 1) * (d - 1));
                for i in 1..d {
                    for j in 0..d {
                        if j != col {
                            minor.push(m[i * d + j]);
                        }
                    }
                }
                acc += sign * m[col] * det_rec(d - 1, &minor);
                sign = -sign;
            }
            acc
        }
        let wide: Vec<i128> = self.entries.iter().map(|&e| e as i128).collect();
        det_rec(self.dim, &wide)
    }

    /// Inverse over the integers via the adjugate. Exists iff `det = +-1`.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        let det = self.det();
        if det != 1 && det != -1 {
            return Err(Error::NotUnimodular { det });
        }
        let d = self.dim;
        let mut out = vec![0 as Coord; d * d];
        for i in 0..d {
            for j in 0..d {
                // Cofactor C_ji for the adjugate transpose.
                let mut minor = Vec::with_capacity((d - 1) * (d - 1));
                for r in 0..d {
                    if r == j {
                        continue;
                    }
                    for c in 0..d {
                        if c == i {
                            continue;
                        }
                        minor.push(self.get(r, c) as i128);
                    }
                }
                let m = if d == 1 {
                    1
                } else {
                    fn det_rec(d: usize, m: &[i128]) -> i128 {
                        if d == 1 {
                            return m[0];
                        }
                        let mut acc: i128 = 0;
                        let mut sign: i128 = 1;
                        for col in 0..d {
                            let mut minor = Vec::with_capacity((d - 1) * (d - 1));
                            for i in 1..d {
                                for j in 0..d {
                                    if j != col {
                                        minor.push(m[i * d + j]);
                                    }
                                }
                            }
                            acc += sign * m[col] * det_rec(d - 1, &minor);
                            sign = -sign;
                        }
                        acc
                    }
                    det_rec(d - 1, &minor)
                };
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                out[i * d + j] = i128_to_coord(sign * m * det, "matrix inverse")?;
            }
        }
        Ok(IntMatrix {
            dim: d,
            entries: out,
        })
    }
}

fn i128_to_coord(v: i128, op: &'static str) -> Result<Coord> {
    Coord::try_from(v).map_err(|_| Error::Overflow { op })
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// A group element in canonical normal form.
///
/// The variant must match the owning [`Group`]. `Word` letters are signed
/// one-based generator indices with no adjacent cancelling pair. `Semi`
/// orders `v` before `k`, so the derived lexicographic order is coordinate
/// major.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupElement {
    Vector(Vec<Coord>),
    Word(Vec<i16>),
    Semi { v: Vec<Coord>, k: Coord },
}

impl GroupElement {
    pub fn word_letters(&self) -> Option<&[i16]> {
        match self {
            GroupElement::Word(w) => Some(w),
            _ => None,
        }
    }

    pub fn vector_coords(&self) -> Option<&[Coord]> {
        match self {
            GroupElement::Vector(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Vector(v) => {
                write!(f, "(")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            GroupElement::Word(w) => {
                if w.is_empty() {
                    return write!(f, "e");
                }
                for (i, &l) in w.iter().enumerate() {
                    if i > 0 {
                        write!(f, ".")?;
                    }
                    let idx = l.unsigned_abs();
                    if idx <= 26 {
                        let c = (b'a' + (idx as u8 - 1)) as char;
                        if l > 0 {
                            write!(f, "{c}")?;
                        } else {
                            write!(f, "{}", c.to_ascii_uppercase())?;
                        }
                    } else if l > 0 {
                        write!(f, "x{idx}")?;
                    } else {
                        write!(f, "x{idx}'")?;
                    }
                }
                Ok(())
            }
            GroupElement::Semi { v, k } => {
                write!(f, "(")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "|{k})")
            }
        }
    }
}

/// Group descriptor plus the operations that interpret normal forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Group {
    FreeAbelian {
        rank: usize,
    },
    Free {
        rank: usize,
    },
    /// `Z^rank x| Z` twisted by `twist` (an automorphism of `Z^rank`, so the
    /// matrix must be invertible over the integers).
    SemidirectZ {
        rank: usize,
        twist: IntMatrix,
        twist_inv: IntMatrix,
    },
}

impl Group {
    pub fn free_abelian(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidParameter("rank must be positive".into()));
        }
        Ok(Group::FreeAbelian { rank })
    }

    pub fn free(rank: usize) -> Result<Self> {
        if rank == 0 || rank > i16::MAX as usize {
            return Err(Error::InvalidParameter(
                "free rank must be in 1..=32767".into(),
            ));
        }
        Ok(Group::Free { rank })
    }

    pub fn semidirect_z(twist: IntMatrix) -> Result<Self> {
        let twist_inv = twist.inverse_unimodular()?;
        Ok(Group::SemidirectZ {
            rank: twist.dim(),
            twist,
            twist_inv,
        })
    }

    /// Stable descriptor string; feeds cache fingerprints and report headers.
    pub fn descriptor(&self) -> String {
        match self {
            Group::FreeAbelian { rank } => format!("free_abelian:{rank}"),
            Group::Free { rank } => format!("free:{rank}"),
            Group::SemidirectZ { rank, twist, .. } => {
                let rows: Vec<String> = (0..*rank)
                    .map(|i| {
                        (0..*rank)
                            .map(|j| twist.get(i, j).to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    })
                    .collect();
                format!("semidirect_z:{rank}:[{}]", rows.join(";"))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            Group::FreeAbelian { rank } => format!("Z^{rank}"),
            Group::Free { rank } => format!("F_{rank}"),
            Group::SemidirectZ { rank, twist, .. } => {
                if twist.is_neg_identity() {
                    format!("Z^{rank} x|_-I Z")
                } else {
                    format!("Z^{rank} x|_{twist} Z")
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Group::FreeAbelian { rank } | Group::Free { rank } | Group::SemidirectZ { rank, .. } => {
                *rank
            }
        }
    }

    pub fn twist(&self) -> Option<&IntMatrix> {
        match self {
            Group::SemidirectZ { twist, .. } => Some(twist),
            _ => None,
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            Group::FreeAbelian { rank } => GroupElement::Vector(vec![0; *rank]),
            Group::Free { .. } => GroupElement::Word(Vec::new()),
            Group::SemidirectZ { rank, .. } => GroupElement::Semi {
                v: vec![0; *rank],
                k: 0,
            },
        }
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        *g == self.identity()
    }

    /// Symmetric generating set in a fixed order: lattice generators and
    /// their inverses first, then (for semidirect products) the `Z` factor.
    pub fn generators(&self) -> Vec<GroupElement> {
        match self {
            Group::FreeAbelian { rank } => {
                let mut out = Vec::with_capacity(2 * rank);
                for i in 0..*rank {
                    for sign in [1, -1] {
                        let mut v = vec![0; *rank];
                        v[i] = sign;
                        out.push(GroupElement::Vector(v));
                    }
                }
                out
            }
            Group::Free { rank } => {
                let mut out = Vec::with_capacity(2 * rank);
                for i in 1..=*rank as i16 {
                    out.push(GroupElement::Word(vec![i]));
                    out.push(GroupElement::Word(vec![-i]));
                }
                out
            }
            Group::SemidirectZ { rank, .. } => {
                let mut out = Vec::with_capacity(2 * rank + 2);
                for i in 0..*rank {
                    for sign in [1, -1] {
                        let mut v = vec![0; *rank];
                        v[i] = sign;
                        out.push(GroupElement::Semi { v, k: 0 });
                    }
                }
                out.push(GroupElement::Semi {
                    v: vec![0; *rank],
                    k: 1,
                });
                out.push(GroupElement::Semi {
                    v: vec![0; *rank],
                    k: -1,
                });
                out
            }
        }
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match (self, g) {
            (Group::FreeAbelian { rank }, GroupElement::Vector(v)) => v.len() == *rank,
            (Group::Free { rank }, GroupElement::Word(w)) => {
                w.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= *rank)
                    && w.windows(2).all(|p| p[0] != -p[1])
            }
            (Group::SemidirectZ { rank, .. }, GroupElement::Semi { v, .. }) => v.len() == *rank,
            _ => false,
        }
    }

    fn check_member(&self, g: &GroupElement) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            Err(Error::ElementMismatch {
                expected: self.name(),
                got: format!("{g}"),
            })
        }
    }

    /// Apply `twist^k` to `w`. Cost is `|k|` checked matrix-vector products;
    /// exponents stay small at the scales this library targets.
    pub fn twist_pow_apply(&self, k: Coord, w: &[Coord]) -> Result<Vec<Coord>> {
        let (twist, twist_inv) = match self {
            Group::SemidirectZ {
                twist, twist_inv, ..
            } => (twist, twist_inv),
            _ => {
                return Err(Error::InvalidParameter(
                    "twist power only defined for semidirect products".into(),
                ))
            }
        };
        let m = if k >= 0 { twist } else { twist_inv };
        let mut v = w.to_vec();
        for _ in 0..k.unsigned_abs() {
            v = m.matvec(&v)?;
        }
        Ok(v)
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check_member(a)?;
        self.check_member(b)?;
        match (self, a, b) {
            (Group::FreeAbelian { .. }, GroupElement::Vector(x), GroupElement::Vector(y)) => {
                let v = x
                    .iter()
                    .zip(y)
                    .map(|(&p, &q)| checked_add(p, q, "vector sum"))
                    .collect::<Result<Vec<_>>>()?;
                Ok(GroupElement::Vector(v))
            }
            (Group::Free { .. }, GroupElement::Word(x), GroupElement::Word(y)) => {
                let mut out = x.clone();
                for &l in y {
                    if out.last() == Some(&-l) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                Ok(GroupElement::Word(out))
            }
            (
                Group::SemidirectZ { .. },
                GroupElement::Semi { v, k },
                GroupElement::Semi { v: w, k: m },
            ) => {
                let tw = self.twist_pow_apply(*k, w)?;
                let nv = v
                    .iter()
                    .zip(&tw)
                    .map(|(&p, &q)| checked_add(p, q, "semidirect sum"))
                    .collect::<Result<Vec<_>>>()?;
                Ok(GroupElement::Semi {
                    v: nv,
                    k: checked_add(*k, *m, "semidirect shift")?,
                })
            }
            _ => unreachable!("check_member validated the variants"),
        }
    }

    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check_member(g)?;
        match g {
            GroupElement::Vector(v) => Ok(GroupElement::Vector(
                v.iter()
                    .map(|&c| c.checked_neg().ok_or(Error::Overflow { op: "negate" }))
                    .collect::<Result<Vec<_>>>()?,
            )),
            GroupElement::Word(w) => {
                Ok(GroupElement::Word(w.iter().rev().map(|&l| -l).collect()))
            }
            GroupElement::Semi { v, k } => {
                // (v, k)^-1 = (-twist^-k(v), -k).
                let tw = self.twist_pow_apply(-*k, v)?;
                let nv = tw
                    .iter()
                    .map(|&c| c.checked_neg().ok_or(Error::Overflow { op: "negate" }))
                    .collect::<Result<Vec<_>>>()?;
                Ok(GroupElement::Semi { v: nv, k: -*k })
            }
        }
    }

    /// `h g h^-1`.
    pub fn conjugate(&self, h: &GroupElement, g: &GroupElement) -> Result<GroupElement> {
        let hg = self.multiply(h, g)?;
        let hinv = self.inverse(h)?;
        self.multiply(&hg, &hinv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cat() -> IntMatrix {
        IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]).unwrap()
    }

    #[test]
    fn free_word_reduction() {
        let g = Group::free(2).unwrap();
        let a = GroupElement::Word(vec![1, 2]);
        let b = GroupElement::Word(vec![-2, -1, 2]);
        // Cascade: [1,2] * [-2] -> [1]; * [-1] -> []; * [2] -> [2].
        assert_eq!(g.multiply(&a, &b).unwrap(), GroupElement::Word(vec![2]));
        let w = GroupElement::Word(vec![1, 2, -1]);
        let winv = g.inverse(&w).unwrap();
        assert_eq!(g.multiply(&w, &winv).unwrap(), g.identity());
    }

    #[test]
    fn semidirect_twist_flips_sign() {
        let g = Group::semidirect_z(IntMatrix::neg_identity(2)).unwrap();
        let t = GroupElement::Semi { v: vec![0, 0], k: 1 };
        let x = GroupElement::Semi { v: vec![1, 0], k: 0 };
        let tx = g.multiply(&t, &x).unwrap();
        assert_eq!(tx, GroupElement::Semi { v: vec![-1, 0], k: 1 });
        // t x t^-1 = phi(x) = x^-1 for phi = -I.
        let conj = g.conjugate(&t, &x).unwrap();
        assert_eq!(conj, g.inverse(&x).unwrap());
    }

    #[test]
    fn semidirect_multiply_cancels() {
        // ((1,0), 1) * ((1,0), 0) = ((0,0), 1) when phi = -I.
        let g = Group::semidirect_z(IntMatrix::neg_identity(2)).unwrap();
        let a = GroupElement::Semi { v: vec![1, 0], k: 1 };
        let b = GroupElement::Semi { v: vec![1, 0], k: 0 };
        assert_eq!(
            g.multiply(&a, &b).unwrap(),
            GroupElement::Semi { v: vec![0, 0], k: 1 }
        );
    }

    #[test]
    fn cat_map_group_law() {
        let g = Group::semidirect_z(cat()).unwrap();
        let a = GroupElement::Semi { v: vec![1, 2], k: 3 };
        let ai = g.inverse(&a).unwrap();
        assert_eq!(g.multiply(&a, &ai).unwrap(), g.identity());
        assert_eq!(g.multiply(&ai, &a).unwrap(), g.identity());
    }

    #[test]
    fn unimodular_inverse_exact() {
        let m = cat();
        let mi = m.inverse_unimodular().unwrap();
        assert!(m.mul(&mi).unwrap().is_identity());
        let not = IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]).unwrap();
        assert!(matches!(
            not.inverse_unimodular(),
            Err(Error::NotUnimodular { det: 2 })
        ));
    }

    #[test]
    fn rejects_foreign_elements() {
        let g = Group::free_abelian(2).unwrap();
        let w = GroupElement::Word(vec![1]);
        assert!(g.multiply(&g.identity(), &w).is_err());
        let short = GroupElement::Vector(vec![1]);
        assert!(g.multiply(&g.identity(), &short).is_err());
    }

    #[test]
    fn overflow_is_loud() {
        let g = Group::free_abelian(1).unwrap();
        let big = GroupElement::Vector(vec![Coord::MAX]);
        let one = GroupElement::Vector(vec![1]);
        assert!(matches!(
            g.multiply(&big, &one),
            Err(Error::Overflow { .. })
        ));
    }

    #[test]
    fn lexicographic_order_on_normal_forms() {
        let a = GroupElement::Vector(vec![-1, 5]);
        let b = GroupElement::Vector(vec![0, -7]);
        assert!(a < b);
        let u = GroupElement::Word(vec![1]);
        let v = GroupElement::Word(vec![1, -2]);
        assert!(u < v);
    }

    #[test]
    fn display_forms() {
        assert_eq!(GroupElement::Word(vec![]).to_string(), "e");
        assert_eq!(GroupElement::Word(vec![1, -2, 1]).to_string(), "a.B.a");
        assert_eq!(GroupElement::Vector(vec![1, -2]).to_string(), "(1,-2)");
        assert_eq!(
            GroupElement::Semi { v: vec![1, -2], k: 3 }.to_string(),
            "(1,-2|3)"
        );
    }

    #[test]
    fn heisenberg_shape() {
        let h = IntMatrix::heisenberg(3);
        assert_eq!(h.rows(), vec![vec![1, 1, 0], vec![0, 1, 1], vec![0, 0, 1]]);
        assert!(h.is_heisenberg());
        assert_eq!(h.det(), 1);
    }
}
