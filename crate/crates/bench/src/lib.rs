//! Fixtures shared by the criterion benches.

use lsmap_core::circuit::Circuit;
use lsmap_core::generate::{random_circuit, RandomCircuitConfig};

/// Seeded circuit filling a `rows x cols` plane.
pub fn grid_circuit(rows: u32, cols: u32, gates: usize, seed: u64) -> Circuit {
    random_circuit(&RandomCircuitConfig::new((rows * cols) as usize, gates), seed)
}
