//! Quantum operation dependency graph.

use serde::{Deserialize, Serialize};

use super::{Circuit, GateKind, Instruction, Qubit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DependencyKind {
    /// Ordering is mandatory.
    True,
    /// Two CNOTs sharing a qubit in the same role: either order, never in parallel.
    Name,
}

/// Directed edge between node indices (positions in [`Qodg::nodes`]).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub kind: DependencyKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Qodg {
    /// Non-wait instructions in program order.
    pub nodes: Vec<Instruction>,
    pub edges: Vec<Edge>,
    /// For every qubit, the node indices touching it in program order.
    pub per_qubit: Vec<Vec<usize>>,
}

/// Role of `q` in a CNOT: `Some(true)` for control, `Some(false)` for target.
fn cnot_role(ins: &Instruction, q: Qubit) -> Option<bool> {
    if ins.kind != GateKind::Cnot {
        return None;
    }
    ins.operands.iter().position(|&o| o == q).map(|p| p == 0)
}

/// Whether two instructions commute as a same-role CNOT pair on every shared qubit.
pub(crate) fn commuting_pair(a: &Instruction, b: &Instruction) -> bool {
    if a.kind != GateKind::Cnot || b.kind != GateKind::Cnot {
        return false;
    }
    let mut shared = false;
    for &q in &a.operands {
        if b.touches(q) {
            shared = true;
            if cnot_role(a, q) != cnot_role(b, q) {
                return false;
            }
        }
    }
    shared
}

pub fn build_qodg(c: &Circuit) -> Qodg {
    let nodes: Vec<Instruction> = c.gates().cloned().collect();
    let mut per_qubit = vec![Vec::new(); c.n_qubits()];
    for (i, ins) in nodes.iter().enumerate() {
        for q in &ins.operands {
            per_qubit[q.index()].push(i);
        }
    }
    let mut edges: Vec<Edge> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for seq in &per_qubit {
        for w in seq.windows(2) {
            let (a, b) = (w[0], w[1]);
            if !seen.insert((a, b)) {
                continue;
            }
            let kind = if commuting_pair(&nodes[a], &nodes[b]) {
                DependencyKind::Name
            } else {
                DependencyKind::True
            };
            edges.push(Edge { from: a, to: b, kind });
        }
    }
    edges.sort_by_key(|e| (e.from, e.to));
    Qodg {
        nodes,
        edges,
        per_qubit,
    }
}

impl Qodg {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn count(&self, kind: DependencyKind) -> usize {
        self.edges.iter().filter(|e| e.kind == kind).count()
    }

    /// Maximal runs of consecutive NAME-linked CNOTs on each qubit. Any two
    /// members of one block may be reordered; consecutive blocks on a qubit keep
    /// their relative order.
    pub fn qubit_blocks(&self) -> Vec<Vec<Vec<usize>>> {
        self.per_qubit
            .iter()
            .map(|seq| {
                let mut blocks: Vec<Vec<usize>> = Vec::new();
                for &n in seq {
                    match blocks.last_mut() {
                        Some(b)
                            if commuting_pair(&self.nodes[*b.last().unwrap()], &self.nodes[n]) =>
                        {
                            b.push(n)
                        }
                        _ => blocks.push(vec![n]),
                    }
                }
                blocks
            })
            .collect()
    }
}
