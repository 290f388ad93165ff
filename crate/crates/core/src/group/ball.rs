//! Breadth-first enumeration of word-metric balls.
//!
//! A [`BallTable`] holds the BFS layering of a group out to some radius:
//! layer `r` is the sphere of word length exactly `r`, sorted
//! lexicographically on normal forms so every traversal of the table is
//! deterministic. The table doubles as the word-length oracle for groups
//! without a closed-form length.
//!
//! Tables persist as JSON lines: a header record naming the descriptor,
//! radius, and format version, then one record per element. A cache file
//! for a different descriptor or format version is rejected, never reused.

use super::{Group, GroupElement};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

pub const CACHE_FORMAT_VERSION: u32 = 1;

/// Elements kept in memory at once before enumeration aborts with a
/// resource error. Generous for the polynomial-growth groups; the free
/// group hits it first.
pub const DEFAULT_BALL_BUDGET: usize = 5_000_000;

#[derive(Debug, Clone)]
pub struct BallTable {
    group: Group,
    layers: Vec<Vec<GroupElement>>,
    lengths: HashMap<GroupElement, u32>,
    budget: usize,
}

#[derive(Serialize, Deserialize)]
struct CacheHeader {
    descriptor: String,
    radius: u32,
    format_version: u32,
}

#[derive(Serialize, Deserialize)]
struct CacheRecord {
    g: GroupElement,
    len: u32,
}

impl BallTable {
    pub fn new(group: Group) -> Self {
        Self::with_budget(group, DEFAULT_BALL_BUDGET)
    }

    pub fn with_budget(group: Group, budget: usize) -> Self {
        let e = group.identity();
        let mut lengths = HashMap::new();
        lengths.insert(e.clone(), 0);
        BallTable {
            group,
            layers: vec![vec![e]],
            lengths,
            budget,
        }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn radius(&self) -> u32 {
        (self.layers.len() - 1) as u32
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Extend the BFS layering out to radius `n`. No-op if already there.
    pub fn extend_to(&mut self, n: u32) -> Result<()> {
        while self.radius() < n {
            let mut total: usize = self.lengths.len();
            let frontier = self.layers.last().unwrap();
            let next_len = self.layers.len() as u32;
            let mut next = Vec::new();
            let gens = self.group.generators();
            for g in frontier {
                for s in &gens {
                    let h = self.group.multiply(g, s)?;
                    if !self.lengths.contains_key(&h) {
                        total += 1;
                        if total > self.budget {
                            return Err(Error::BudgetExceeded {
                                budget: self.budget,
                                reached: self.radius(),
                            });
                        }
                        self.lengths.insert(h.clone(), next_len);
                        next.push(h);
                    }
                }
            }
            next.sort_unstable();
            self.layers.push(next);
        }
        Ok(())
    }

    /// Word length of `g`, if within the enumerated horizon.
    pub fn length(&self, g: &GroupElement) -> Result<u32> {
        self.lengths.get(g).copied().ok_or(Error::HorizonExhausted {
            horizon: self.radius(),
        })
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.lengths.contains_key(g)
    }

    /// Sphere of radius exactly `r`, lexicographically sorted.
    pub fn layer(&self, r: u32) -> &[GroupElement] {
        &self.layers[r as usize]
    }

    /// Ball of radius `n` in lexicographic normal-form order.
    pub fn elements_lex(&self, n: u32) -> Vec<GroupElement> {
        assert!(n <= self.radius(), "ball radius beyond enumerated horizon");
        let mut out: Vec<GroupElement> = self.layers[..=n as usize].concat();
        out.sort_unstable();
        out
    }

    /// Cumulative ball cardinalities `|B_0|, ..., |B_radius|`.
    pub fn cumulative_counts(&self) -> Vec<u64> {
        let mut acc = 0u64;
        self.layers
            .iter()
            .map(|l| {
                acc += l.len() as u64;
                acc
            })
            .collect()
    }

    pub fn ball_size(&self, n: u32) -> u64 {
        assert!(n <= self.radius(), "ball radius beyond enumerated horizon");
        self.layers[..=n as usize].iter().map(|l| l.len() as u64).sum()
    }

    /// Write the table as JSON lines, header first. The write is atomic
    /// (temp file then rename) so a crashed run never leaves a torn cache.
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        {
            let file = std::fs::File::create(&tmp)?;
            let mut w = BufWriter::new(file);
            let header = CacheHeader {
                descriptor: self.group.descriptor(),
                radius: self.radius(),
                format_version: CACHE_FORMAT_VERSION,
            };
            serde_json::to_writer(&mut w, &header)?;
            w.write_all(b"\n")?;
            for (r, layer) in self.layers.iter().enumerate() {
                for g in layer {
                    let rec = CacheRecord {
                        g: g.clone(),
                        len: r as u32,
                    };
                    serde_json::to_writer(&mut w, &rec)?;
                    w.write_all(b"\n")?;
                }
            }
            w.flush()?;
        }
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    /// Load a table previously written by [`BallTable::save`]. The header
    /// descriptor must match `group` exactly.
    pub fn load(group: Group, path: &Path, budget: usize) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        let mut lines = BufReader::new(file).lines();
        let header_line = lines
            .next()
            .ok_or_else(|| Error::CacheMismatch("empty cache file".into()))??;
        let header: CacheHeader = serde_json::from_str(&header_line)?;
        if header.format_version != CACHE_FORMAT_VERSION {
            return Err(Error::CacheMismatch(format!(
                "format version {} (expected {})",
                header.format_version, CACHE_FORMAT_VERSION
            )));
        }
        if header.descriptor != group.descriptor() {
            return Err(Error::CacheMismatch(format!(
                "descriptor {} does not match {}",
                header.descriptor,
                group.descriptor()
            )));
        }
        let mut layers: Vec<Vec<GroupElement>> = vec![Vec::new(); header.radius as usize + 1];
        let mut lengths = HashMap::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: CacheRecord = serde_json::from_str(&line)?;
            if rec.len > header.radius {
                return Err(Error::CacheMismatch(format!(
                    "record length {} beyond advertised radius {}",
                    rec.len, header.radius
                )));
            }
            if !group.contains(&rec.g) {
                return Err(Error::CacheMismatch(format!(
                    "element {} not a normal form in {}",
                    rec.g,
                    group.name()
                )));
            }
            lengths.insert(rec.g.clone(), rec.len);
            layers[rec.len as usize].push(rec.g);
        }
        if lengths.len() > budget {
            return Err(Error::BudgetExceeded {
                budget,
                reached: header.radius,
            });
        }
        if layers[0] != vec![group.identity()] {
            return Err(Error::CacheMismatch("layer 0 must be the identity".into()));
        }
        for layer in &mut layers {
            layer.sort_unstable();
        }
        Ok(BallTable {
            group,
            layers,
            lengths,
            budget,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::IntMatrix;

    #[test]
    fn z2_layer_sizes() {
        let mut t = BallTable::new(Group::free_abelian(2).unwrap());
        t.extend_to(4).unwrap();
        // |B_n| = 2n^2 + 2n + 1.
        assert_eq!(t.cumulative_counts(), vec![1, 5, 13, 25, 41]);
        assert_eq!(t.layer(2).len(), 8);
    }

    #[test]
    fn free_group_sphere_sizes() {
        let mut t = BallTable::new(Group::free(2).unwrap());
        t.extend_to(5).unwrap();
        // |B_n| = 2 * 3^n - 1.
        assert_eq!(t.cumulative_counts(), vec![1, 5, 17, 53, 161, 485]);
    }

    #[test]
    fn lex_order_within_ball() {
        let mut t = BallTable::new(Group::free_abelian(1).unwrap());
        t.extend_to(3).unwrap();
        let els = t.elements_lex(3);
        let coords: Vec<i64> = els.iter().map(|g| g.vector_coords().unwrap()[0]).collect();
        assert_eq!(coords, vec![-3, -2, -1, 0, 1, 2, 3]);
    }

    #[test]
    fn budget_error_reports_partial_radius() {
        let mut t = BallTable::with_budget(Group::free(2).unwrap(), 100);
        let err = t.extend_to(10).unwrap_err();
        match err {
            Error::BudgetExceeded { budget, reached } => {
                assert_eq!(budget, 100);
                assert!(reached < 10);
                // The table is still valid out to the reached radius.
                assert!(t.ball_size(reached) <= 100);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn horizon_error_on_unknown_length() {
        let mut t = BallTable::new(Group::free_abelian(1).unwrap());
        t.extend_to(2).unwrap();
        let far = GroupElement::Vector(vec![9]);
        assert!(matches!(
            t.length(&far),
            Err(Error::HorizonExhausted { horizon: 2 })
        ));
    }

    #[test]
    fn cache_roundtrip_and_descriptor_check() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ball.jsonl");
        let grp = Group::semidirect_z(IntMatrix::neg_identity(2)).unwrap();
        let mut t = BallTable::new(grp.clone());
        t.extend_to(4).unwrap();
        t.save(&path).unwrap();

        let loaded = BallTable::load(grp, &path, DEFAULT_BALL_BUDGET).unwrap();
        assert_eq!(loaded.radius(), 4);
        assert_eq!(loaded.cumulative_counts(), t.cumulative_counts());
        for r in 0..=4 {
            assert_eq!(loaded.layer(r), t.layer(r));
        }

        let other = Group::free_abelian(2).unwrap();
        assert!(matches!(
            BallTable::load(other, &path, DEFAULT_BALL_BUDGET),
            Err(Error::CacheMismatch(_))
        ));
    }
}
