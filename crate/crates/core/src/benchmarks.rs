//! Circuits shipped with the crate.

use crate::circuit::{parse_qasm, Circuit};

/// Encoder of the `[[7,1,3]]` Steane code: 7 qubits, 21 gates, 12 CNOTs.
pub const STEANE7_QASM: &str = include_str!("../benchmarks/steane7.qasm");

pub fn steane7() -> Circuit {
    parse_qasm(STEANE7_QASM).expect("shipped benchmark parses")
}

/// Every shipped benchmark by name.
pub fn all() -> Vec<(&'static str, Circuit)> {
    vec![("7-enc", steane7())]
}

pub fn by_name(name: &str) -> Option<Circuit> {
    all().into_iter().find(|(n, _)| *n == name).map(|(_, c)| c)
}
