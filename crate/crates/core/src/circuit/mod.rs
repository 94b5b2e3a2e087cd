//! Logical circuit representation: gates, instructions and parallel bundles.

mod qasm;
pub(crate) mod qodg;
mod stats;

pub use qasm::{emit_qasm, parse_qasm, ParseError, ParseErrorKind};
pub(crate) use qasm::Line;
pub use qodg::{build_qodg, DependencyKind, Edge, Qodg};
pub use stats::{characterize, CircuitStats};

use std::fmt;

use serde::{Deserialize, Serialize};

/// Logical gate kinds understood by the toolchain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    I,
    X,
    Y,
    Z,
    H,
    S,
    Sdag,
    T,
    Tdag,
    PrepZ,
    PrepX,
    MeasZ,
    MeasX,
    Cnot,
    Swap,
    Wait,
}

impl GateKind {
    pub const ALL: [GateKind; 16] = [
        GateKind::I,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::H,
        GateKind::S,
        GateKind::Sdag,
        GateKind::T,
        GateKind::Tdag,
        GateKind::PrepZ,
        GateKind::PrepX,
        GateKind::MeasZ,
        GateKind::MeasX,
        GateKind::Cnot,
        GateKind::Swap,
        GateKind::Wait,
    ];

    /// Number of qubit operands the gate takes.
    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Swap => 2,
            GateKind::Wait => 0,
            _ => 1,
        }
    }

    pub fn is_two_qubit(self) -> bool {
        self.arity() == 2
    }

    pub fn is_pauli(self) -> bool {
        matches!(self, GateKind::I | GateKind::X | GateKind::Y | GateKind::Z)
    }

    /// S, T and their adjoints: the gates that consume magic states.
    pub fn is_magic(self) -> bool {
        matches!(
            self,
            GateKind::S | GateKind::Sdag | GateKind::T | GateKind::Tdag
        )
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::I => "i",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::H => "h",
            GateKind::S => "s",
            GateKind::Sdag => "sdag",
            GateKind::T => "t",
            GateKind::Tdag => "tdag",
            GateKind::PrepZ => "prepz",
            GateKind::PrepX => "prepx",
            GateKind::MeasZ => "measz",
            GateKind::MeasX => "measx",
            GateKind::Cnot => "cnot",
            GateKind::Swap => "swap",
            GateKind::Wait => "qwait",
        }
    }

    pub fn from_mnemonic(name: &str) -> Option<GateKind> {
        let kind = match name.to_ascii_lowercase().as_str() {
            "i" => GateKind::I,
            "x" => GateKind::X,
            "y" => GateKind::Y,
            "z" => GateKind::Z,
            "h" => GateKind::H,
            "s" => GateKind::S,
            "sdag" => GateKind::Sdag,
            "t" => GateKind::T,
            "tdag" => GateKind::Tdag,
            "prepz" => GateKind::PrepZ,
            "prepx" => GateKind::PrepX,
            "measz" | "measure" => GateKind::MeasZ,
            "measx" => GateKind::MeasX,
            "cnot" => GateKind::Cnot,
            "swap" => GateKind::Swap,
            "qwait" => GateKind::Wait,
            _ => return None,
        };
        Some(kind)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

/// Index of a qubit within its circuit's declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Qubit(pub u32);

impl Qubit {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct InstrId(pub u32);

impl fmt::Display for InstrId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instruction {
    pub id: InstrId,
    pub kind: GateKind,
    pub operands: Vec<Qubit>,
    /// Cycle count of a `Wait`; zero for every other kind.
    pub wait_cycles: u64,
    /// Set on SWAPs inserted by the router.
    pub inserted: bool,
}

impl Instruction {
    pub fn gate(id: u32, kind: GateKind, operands: &[u32]) -> Self {
        debug_assert_ne!(kind, GateKind::Wait);
        Instruction {
            id: InstrId(id),
            kind,
            operands: operands.iter().map(|&q| Qubit(q)).collect(),
            wait_cycles: 0,
            inserted: false,
        }
    }

    pub fn wait(id: u32, cycles: u64) -> Self {
        Instruction {
            id: InstrId(id),
            kind: GateKind::Wait,
            operands: Vec::new(),
            wait_cycles: cycles,
            inserted: false,
        }
    }

    pub fn touches(&self, q: Qubit) -> bool {
        self.operands.contains(&q)
    }

    pub fn is_wait(&self) -> bool {
        self.kind == GateKind::Wait
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_wait() {
            return write!(f, "qwait {}", self.wait_cycles);
        }
        write!(f, "{}", self.kind)?;
        for (i, q) in self.operands.iter().enumerate() {
            f.write_str(if i == 0 { " " } else { "," })?;
            write!(f, "{q}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CircuitError {
    #[error("instruction {id} has {found} operands, {kind} expects {expected}")]
    Arity {
        id: InstrId,
        kind: GateKind,
        expected: usize,
        found: usize,
    },
    #[error("instruction {id} repeats operand {qubit}")]
    RepeatedOperand { id: InstrId, qubit: Qubit },
    #[error("instruction {id} references undeclared qubit {qubit}")]
    UndeclaredQubit { id: InstrId, qubit: Qubit },
    #[error("qubit {qubit} used twice in timestep {step}")]
    QubitReused { step: usize, qubit: Qubit },
    #[error("duplicate instruction id {0}")]
    DuplicateId(InstrId),
    #[error("wait instruction {0} must have a cycle count of at least 1")]
    EmptyWait(InstrId),
}

/// A logical circuit as an ordered list of timesteps, each a parallel bundle.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    pub qubits: Vec<String>,
    pub body: Vec<Vec<Instruction>>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Circuit {
            qubits: (0..n_qubits).map(|i| format!("q{i}")).collect(),
            body: Vec::new(),
        }
    }

    /// Builds a serial circuit, one instruction per timestep, numbering ids in order.
    pub fn from_serial(n_qubits: usize, gates: &[(GateKind, &[u32])]) -> Self {
        let mut c = Circuit::new(n_qubits);
        for (i, (kind, ops)) in gates.iter().enumerate() {
            c.body.push(vec![Instruction::gate(i as u32, *kind, ops)]);
        }
        c
    }

    pub fn n_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn instructions(&self) -> impl Iterator<Item = &Instruction> {
        self.body.iter().flatten()
    }

    /// Non-wait instructions in program order.
    pub fn gates(&self) -> impl Iterator<Item = &Instruction> {
        self.instructions().filter(|i| !i.is_wait())
    }

    pub fn next_id(&self) -> u32 {
        self.instructions().map(|i| i.id.0 + 1).max().unwrap_or(0)
    }

    pub fn push_serial(&mut self, kind: GateKind, operands: &[u32]) -> InstrId {
        let id = self.next_id();
        self.body.push(vec![Instruction::gate(id, kind, operands)]);
        InstrId(id)
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        let mut seen_ids = std::collections::HashSet::new();
        for (step, bundle) in self.body.iter().enumerate() {
            let mut used = std::collections::HashSet::new();
            for ins in bundle {
                if !seen_ids.insert(ins.id) {
                    return Err(CircuitError::DuplicateId(ins.id));
                }
                if ins.operands.len() != ins.kind.arity() {
                    return Err(CircuitError::Arity {
                        id: ins.id,
                        kind: ins.kind,
                        expected: ins.kind.arity(),
                        found: ins.operands.len(),
                    });
                }
                if ins.is_wait() && ins.wait_cycles == 0 {
                    return Err(CircuitError::EmptyWait(ins.id));
                }
                for (k, q) in ins.operands.iter().enumerate() {
                    if q.index() >= self.n_qubits() {
                        return Err(CircuitError::UndeclaredQubit {
                            id: ins.id,
                            qubit: *q,
                        });
                    }
                    if ins.operands[..k].contains(q) {
                        return Err(CircuitError::RepeatedOperand {
                            id: ins.id,
                            qubit: *q,
                        });
                    }
                    if !used.insert(*q) {
                        return Err(CircuitError::QubitReused { step, qubit: *q });
                    }
                }
            }
        }
        Ok(())
    }

    /// Canonical form: consecutive wait timesteps merged, empty timesteps dropped,
    /// ids renumbered in program order, qubits named `q<index>`.
    pub fn canonicalize(&self) -> Circuit {
        let mut out = Circuit::new(self.n_qubits());
        let mut next = 0u32;
        for bundle in &self.body {
            if bundle.is_empty() {
                continue;
            }
            let wait: u64 = bundle.iter().map(|i| i.wait_cycles).sum();
            if bundle.iter().all(Instruction::is_wait) {
                if let Some(prev) = out.body.last_mut() {
                    if prev.len() == 1 && prev[0].is_wait() {
                        prev[0].wait_cycles += wait;
                        continue;
                    }
                }
                out.body.push(vec![Instruction::wait(next, wait)]);
                next += 1;
                continue;
            }
            let mut step = Vec::with_capacity(bundle.len());
            for ins in bundle.iter().filter(|i| !i.is_wait()) {
                let mut ins = ins.clone();
                ins.id = InstrId(next);
                next += 1;
                step.push(ins);
            }
            out.body.push(step);
        }
        out
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.gates().filter(|i| i.kind == kind).count()
    }
}
