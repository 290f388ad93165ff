//! Experiment harness around `cqms-core`: JSON-configured commands that
//! measure growth, seminorm, dimension, and entropy quantities and write
//! deterministic pass/fail reports.
//!
//! Determinism contract: a config (including its seed) fully determines the
//! report bytes. All randomness flows through named ChaCha streams derived
//! from the root seed, and reports carry no wall-clock data.

#![forbid(unsafe_code)]

pub mod cache;
pub mod commands;
pub mod config;
pub mod report;
pub mod rng;
pub mod sampling;
