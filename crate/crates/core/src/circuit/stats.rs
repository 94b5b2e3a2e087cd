use serde::{Deserialize, Serialize};

use super::{build_qodg, Circuit, DependencyKind, GateKind};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CircuitStats {
    pub n_qubits: usize,
    pub n_gates: usize,
    pub n_cnots: usize,
    /// CNOTs over gates.
    pub rcg: f64,
    /// NAME edges over all QODG edges.
    pub rcd: f64,
    /// S, T and adjoints over gates.
    pub rtsg: f64,
    pub n_edges: usize,
    pub n_name_edges: usize,
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

pub fn characterize(c: &Circuit) -> CircuitStats {
    let n_gates = c.gates().count();
    let n_cnots = c.count(GateKind::Cnot);
    let n_magic = c.gates().filter(|i| i.kind.is_magic()).count();
    let g = build_qodg(c);
    let n_name_edges = g.count(DependencyKind::Name);
    CircuitStats {
        n_qubits: c.n_qubits(),
        n_gates,
        n_cnots,
        rcg: ratio(n_cnots, n_gates),
        rcd: ratio(n_name_edges, g.edges.len()),
        rtsg: ratio(n_magic, n_gates),
        n_edges: g.edges.len(),
        n_name_edges,
    }
}
