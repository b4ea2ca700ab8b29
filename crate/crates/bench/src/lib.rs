//! Shared fixtures for the criterion benchmarks.

use coxwalk::{CartanType, RootSystem};

/// Seed shared by every benchmark run.
pub const SEED: u64 = 7;

pub fn root_system(tag: &str) -> RootSystem {
    RootSystem::new(tag.parse::<CartanType>().expect("valid type")).expect("supported type")
}
