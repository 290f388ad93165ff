//! Experiment reports. A report is a list of labeled pass/fail blocks with
//! their numeric evidence, plus enough header material (seed, versions,
//! config echo, cache stamps) to rerun the experiment bit for bit.
//!
//! Canonical JSON is the determinism contract: identical seed and config
//! must yield identical bytes, so timing data stays out of the document.

use crate::cache::CacheStamp;
use cqms_core::Result;
use serde::Serialize;
use serde_json::Value;
use std::io::Write;
use std::path::Path;

pub const REPORT_FORMAT: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Versions {
    pub core: &'static str,
    pub lab: &'static str,
    pub format: u32,
}

#[derive(Debug, Serialize)]
pub struct Block {
    pub label: String,
    pub pass: bool,
    pub details: Value,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub versions: Versions,
    pub config: Value,
    pub caches: Vec<CacheStamp>,
    pub blocks: Vec<Block>,
    pub pass: bool,
}

impl Report {
    pub fn new<C: Serialize>(command: &str, seed: u64, config: &C) -> Result<Self> {
        Ok(Report {
            command: command.to_string(),
            seed,
            versions: Versions {
                core: cqms_core::VERSION,
                lab: env!("CARGO_PKG_VERSION"),
                format: REPORT_FORMAT,
            },
            config: serde_json::to_value(config)?,
            caches: Vec::new(),
            blocks: Vec::new(),
            pass: true,
        })
    }

    pub fn push<D: Serialize>(&mut self, label: &str, pass: bool, details: &D) -> Result<()> {
        self.blocks.push(Block {
            label: label.to_string(),
            pass,
            details: serde_json::to_value(details)?,
        });
        self.pass &= pass;
        Ok(())
    }

    pub fn stamp(&mut self, stamp: CacheStamp) {
        self.caches.push(stamp);
    }

    pub fn to_canonical_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(path, self.to_canonical_json())?;
        Ok(())
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        let mut out = String::from("command,block,pass\n");
        for b in &self.blocks {
            out.push_str(&format!("{},{},{}\n", self.command, b.label, b.pass));
        }
        std::fs::write(path, out)?;
        Ok(())
    }

    pub fn print_verdicts<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for b in &self.blocks {
            let tag = if b.pass { "PASS" } else { "FAIL" };
            writeln!(w, "[{tag}] {}: {}", self.command, b.label)?;
        }
        Ok(())
    }
}
