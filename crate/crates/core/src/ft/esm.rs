use std::fmt;

use crate::circuit::GateKind;

use super::FtError;

/// A qubit of one planar patch: data `D1..D(d^2)` or ancilla `A1..A(d^2-1)`,
/// both 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatchQubit {
    Data(u16),
    Ancilla(u16),
}

impl PatchQubit {
    /// Offset inside a patch block: data first, then ancillas.
    pub fn offset(self, d: u32) -> u32 {
        match self {
            PatchQubit::Data(k) => k as u32 - 1,
            PatchQubit::Ancilla(k) => d * d + k as u32 - 1,
        }
    }

    pub fn is_data(self) -> bool {
        matches!(self, PatchQubit::Data(_))
    }
}

impl fmt::Display for PatchQubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatchQubit::Data(k) => write!(f, "D{k}"),
            PatchQubit::Ancilla(k) => write!(f, "A{k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchOp {
    pub kind: GateKind,
    pub qubits: Vec<PatchQubit>,
}

impl fmt::Display for PatchOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            GateKind::MeasZ => "measure",
            k => k.mnemonic(),
        };
        let qs: Vec<String> = self.qubits.iter().map(|q| q.to_string()).collect();
        write!(f, "{name} {}", qs.join(", "))
    }
}

/// Stabilizer type of an ESM ancilla.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StabilizerType {
    X,
    Z,
}

/// The distance-3 patch's stabilizers: ancilla, type and data qubits.
pub const D3_STABILIZERS: [(u16, StabilizerType, &[u16]); 8] = [
    (1, StabilizerType::Z, &[1, 2]),
    (2, StabilizerType::X, &[1, 2, 4, 5]),
    (3, StabilizerType::Z, &[2, 3, 5, 6]),
    (4, StabilizerType::X, &[3, 6]),
    (5, StabilizerType::X, &[4, 7]),
    (6, StabilizerType::Z, &[4, 5, 7, 8]),
    (7, StabilizerType::X, &[5, 6, 8, 9]),
    (8, StabilizerType::Z, &[8, 9]),
];

// One ESM round of the 17-qubit patch, timestep by timestep. X-type ancillas
// drive CNOTs onto data; data drives CNOTs onto Z-type ancillas.
const D3_ROUND: &[&[(GateKind, &[PatchQubit])]] = {
    use GateKind::*;
    use PatchQubit::{Ancilla as A, Data as D};
    &[
        &[(PrepZ, &[A(2)]), (PrepZ, &[A(7)]), (PrepZ, &[A(5)])],
        &[
            (H, &[A(2)]),
            (H, &[A(7)]),
            (H, &[A(5)]),
            (PrepZ, &[A(1)]),
            (PrepZ, &[A(3)]),
            (PrepZ, &[A(6)]),
        ],
        &[
            (Cnot, &[A(2), D(5)]),
            (Cnot, &[A(7), D(9)]),
            (Cnot, &[A(5), D(7)]),
            (Cnot, &[D(2), A(1)]),
            (Cnot, &[D(6), A(3)]),
            (Cnot, &[D(8), A(6)]),
            (PrepZ, &[A(8)]),
            (PrepZ, &[A(4)]),
        ],
        &[
            (Cnot, &[A(2), D(2)]),
            (Cnot, &[A(7), D(6)]),
            (Cnot, &[A(5), D(4)]),
            (Cnot, &[D(9), A(8)]),
            (Cnot, &[D(3), A(3)]),
            (Cnot, &[D(5), A(6)]),
            (H, &[A(4)]),
        ],
        &[
            (Cnot, &[A(2), D(4)]),
            (Cnot, &[A(7), D(8)]),
            (Cnot, &[A(4), D(6)]),
            (Cnot, &[D(1), A(1)]),
            (Cnot, &[D(5), A(3)]),
            (Cnot, &[D(7), A(6)]),
            (H, &[A(5)]),
        ],
        &[
            (Cnot, &[A(2), D(1)]),
            (Cnot, &[A(7), D(5)]),
            (Cnot, &[A(4), D(3)]),
            (Cnot, &[D(8), A(8)]),
            (Cnot, &[D(2), A(3)]),
            (Cnot, &[D(4), A(6)]),
            (MeasZ, &[A(1)]),
            (MeasZ, &[A(5)]),
        ],
        &[
            (H, &[A(2)]),
            (H, &[A(4)]),
            (H, &[A(7)]),
            (MeasZ, &[A(3)]),
            (MeasZ, &[A(6)]),
            (MeasZ, &[A(8)]),
        ],
        &[(MeasZ, &[A(2)]), (MeasZ, &[A(4)]), (MeasZ, &[A(7)])],
    ]
};

/// One full round of error-syndrome measurement as ordered timesteps.
pub fn esm_round(d: u32) -> Result<Vec<Vec<PatchOp>>, FtError> {
    if d != 3 {
        return Err(FtError::UnsupportedDistance(d));
    }
    Ok(D3_ROUND
        .iter()
        .map(|step| {
            step.iter()
                .map(|(kind, qs)| PatchOp {
                    kind: *kind,
                    qubits: qs.to_vec(),
                })
                .collect()
        })
        .collect())
}

/// The round in the bundle notation, one timestep per line.
pub fn render_round(round: &[Vec<PatchOp>]) -> String {
    round
        .iter()
        .map(|step| {
            let ops: Vec<String> = step.iter().map(|o| o.to_string()).collect();
            format!("{{ {}}}", ops.join(" | "))
        })
        .collect::<Vec<_>>()
        .join("\n")
}
