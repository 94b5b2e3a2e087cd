//! Logical operation durations in surface-code cycles.

use serde::{Deserialize, Serialize};

use crate::arch::ArchKind;
use crate::circuit::GateKind;

/// Cycles of a lattice-surgery CNOT before merge/split parallelization, `4d + 1`.
pub fn unparallelized_surgery_cnot(d: u32) -> u64 {
    4 * d as u64 + 1
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TimingError {
    #[error("code distance must be odd and at least 3, got {0}")]
    BadDistance(u32),
    #[error("wait has a caller-specified duration")]
    Wait,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimingModel {
    pub d: u32,
    pub arch: ArchKind,
}

impl TimingModel {
    pub fn new(d: u32, arch: ArchKind) -> Result<Self, TimingError> {
        if d < 3 || d.is_multiple_of(2) {
            return Err(TimingError::BadDistance(d));
        }
        Ok(TimingModel { d, arch })
    }

    pub fn try_duration(&self, kind: GateKind) -> Result<u64, TimingError> {
        let d = self.d as u64;
        let cycles = match kind {
            GateKind::PrepZ | GateKind::PrepX | GateKind::MeasZ | GateKind::MeasX => 1,
            GateKind::I | GateKind::X | GateKind::Y | GateKind::Z => 1,
            GateKind::H => 4 * d,
            GateKind::S | GateKind::Sdag => 14 * d,
            GateKind::T | GateKind::Tdag => 17 * d,
            GateKind::Cnot => match self.arch {
                ArchKind::Checkerboard => 3 * d,
                ArchKind::TileBased => 4 * d,
            },
            GateKind::Swap => match self.arch {
                ArchKind::Checkerboard => 9 * d,
                ArchKind::TileBased => 3 * d,
            },
            GateKind::Wait => return Err(TimingError::Wait),
        };
        Ok(cycles)
    }

    /// Duration of a gate; waits report zero here, their length lives on the instruction.
    pub fn duration(&self, kind: GateKind) -> u64 {
        self.try_duration(kind).unwrap_or(0)
    }

    pub fn instruction(&self, ins: &crate::circuit::Instruction) -> u64 {
        if ins.is_wait() {
            ins.wait_cycles
        } else {
            self.duration(ins.kind)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_even_or_small_distance() {
        assert!(TimingModel::new(2, ArchKind::TileBased).is_err());
        assert!(TimingModel::new(4, ArchKind::TileBased).is_err());
        assert!(TimingModel::new(1, ArchKind::TileBased).is_err());
    }

    #[test]
    fn table_samples() {
        let c7 = TimingModel::new(7, ArchKind::Checkerboard).unwrap();
        assert_eq!(c7.duration(GateKind::Cnot), 21);
        let t3 = TimingModel::new(3, ArchKind::TileBased).unwrap();
        assert_eq!(t3.duration(GateKind::H), 12);
        assert_eq!(t3.try_duration(GateKind::Wait), Err(TimingError::Wait));
        assert_eq!(unparallelized_surgery_cnot(3), 13);
    }
}
