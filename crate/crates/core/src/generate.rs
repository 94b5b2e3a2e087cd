//! Seeded random circuits for tests, benches and experiments.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateKind};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomCircuitConfig {
    pub n_qubits: usize,
    pub n_gates: usize,
    /// Probability that a gate is a CNOT (needs at least two qubits).
    pub cnot_fraction: f64,
    /// Probability that a CNOT reuses the previous CNOT's control, which
    /// produces commuting runs.
    pub shared_control: f64,
}

impl RandomCircuitConfig {
    pub fn new(n_qubits: usize, n_gates: usize) -> Self {
        RandomCircuitConfig {
            n_qubits,
            n_gates,
            cnot_fraction: 0.5,
            shared_control: 0.3,
        }
    }
}

const SINGLE: [GateKind; 7] = [
    GateKind::H,
    GateKind::X,
    GateKind::Z,
    GateKind::S,
    GateKind::T,
    GateKind::Tdag,
    GateKind::PrepZ,
];

pub fn random_circuit(cfg: &RandomCircuitConfig, seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = cfg.n_qubits as u32;
    let mut c = Circuit::new(cfg.n_qubits);
    let mut last_control: Option<u32> = None;
    for _ in 0..cfg.n_gates {
        if n >= 2 && rng.gen_bool(cfg.cnot_fraction) {
            let control = match last_control {
                Some(q) if rng.gen_bool(cfg.shared_control) => q,
                _ => rng.gen_range(0..n),
            };
            let mut target = rng.gen_range(0..n - 1);
            if target >= control {
                target += 1;
            }
            c.push_serial(GateKind::Cnot, &[control, target]);
            last_control = Some(control);
        } else if n >= 1 {
            let kind = *SINGLE.choose(&mut rng).expect("non-empty");
            c.push_serial(kind, &[rng.gen_range(0..n)]);
        }
    }
    c
}
