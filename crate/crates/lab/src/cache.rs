//! Ball-table caching. Tables are keyed by the group descriptor hash; a
//! cached file whose descriptor or format version disagrees is rebuilt
//! rather than trusted.

use cqms_core::group::{BallTable, Group};
use cqms_core::hash::fnv1a64;
use cqms_core::Result;
use serde::Serialize;
use std::path::Path;

const BALL_BUDGET: usize = 5_000_000;

#[derive(Debug, Clone, Serialize)]
pub struct CacheStamp {
    pub descriptor: String,
    pub radius: u32,
    pub elements: u64,
    pub reused: bool,
}

/// A ball table covering the requested radius, loaded from `dir` when a
/// compatible file is present and written back after any extension.
pub fn cached_ball(group: &Group, radius: u32, dir: Option<&Path>) -> Result<(BallTable, CacheStamp)> {
    let path =
        dir.map(|d| d.join(format!("ball-{:016x}.jsonl", fnv1a64(group.descriptor().as_bytes()))));
    let mut reused = false;
    let mut table = match &path {
        Some(p) if p.exists() => match BallTable::load(group.clone(), p, BALL_BUDGET) {
            Ok(t) => {
                reused = t.radius() >= radius;
                t
            }
            Err(_) => BallTable::new(group.clone()),
        },
        _ => BallTable::new(group.clone()),
    };
    if table.radius() < radius {
        table.extend_to(radius)?;
        if let Some(p) = &path {
            if let Some(parent) = p.parent() {
                std::fs::create_dir_all(parent)?;
            }
            table.save(p)?;
        }
    }
    let stamp = CacheStamp {
        descriptor: group.descriptor(),
        radius,
        elements: table.ball_size(radius),
        reused,
    };
    Ok((table, stamp))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_load_reuses_the_file() {
        let dir = tempfile::tempdir().unwrap();
        let g = Group::free_abelian(2).unwrap();
        let (t1, s1) = cached_ball(&g, 5, Some(dir.path())).unwrap();
        assert!(!s1.reused);
        let (t2, s2) = cached_ball(&g, 5, Some(dir.path())).unwrap();
        assert!(s2.reused);
        assert_eq!(t1.ball_size(5), t2.ball_size(5));
        assert_eq!(s1.elements, 61);
    }

    #[test]
    fn deeper_request_extends_and_rewrites() {
        let dir = tempfile::tempdir().unwrap();
        let g = Group::free(2).unwrap();
        cached_ball(&g, 3, Some(dir.path())).unwrap();
        let (_, s) = cached_ball(&g, 6, Some(dir.path())).unwrap();
        assert!(!s.reused);
        assert_eq!(s.elements, 2 * 3u64.pow(6) - 1);
        let (_, s3) = cached_ball(&g, 6, Some(dir.path())).unwrap();
        assert!(s3.reused);
    }
}
