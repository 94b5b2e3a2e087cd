//! Expansion of logical operations into surface-code cycles.
//!
//! Every cycle has a transversal slot of bit-wise physical gates on data
//! qubits followed by one round of error-syndrome measurement. Logical
//! qubits resolve to physical qubits through a symbol table with one block
//! of `2d^2 - 1` ids per grid location.

mod esm;

pub use esm::{esm_round, render_round, PatchOp, PatchQubit, StabilizerType, D3_STABILIZERS};

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::arch::{Architecture, Location};
use crate::circuit::{Circuit, GateKind, InstrId, Instruction, Line};
use crate::placement::Placement;
use crate::route::RoutedCircuit;
use crate::schedule::issue_times;
use crate::timing::TimingModel;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FtError {
    #[error("physical ESM schedule exists only for d = 3, got d = {0}")]
    UnsupportedDistance(u32),
    #[error("no library entry for {0}")]
    MissingEntry(GateKind),
    #[error("qubit q{0} has no symbol-table entry")]
    SymbolMiss(u32),
}

/// Physical qubits per planar patch.
pub fn patch_size(d: u32) -> u32 {
    2 * d * d - 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolEntry {
    pub location: Location,
    /// Data ids first (`D1..`), then ancilla ids (`A1..`).
    pub physical: Vec<u32>,
}

/// Logical qubit to physical block. Location `i` (row-major) owns ids
/// `i * (2d^2 - 1) ..`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSymbolTable {
    pub d: u32,
    pub entries: Vec<SymbolEntry>,
    pub n_physical: u32,
}

impl QSymbolTable {
    pub fn lookup(&self, q: u32) -> Result<&SymbolEntry, FtError> {
        self.entries.get(q as usize).ok_or(FtError::SymbolMiss(q))
    }

    pub fn physical(&self, q: u32, pq: PatchQubit) -> Result<u32, FtError> {
        Ok(self.lookup(q)?.physical[pq.offset(self.d) as usize])
    }
}

fn block(location_index: usize, d: u32) -> Vec<u32> {
    let n = patch_size(d);
    let base = location_index as u32 * n;
    (base..base + n).collect()
}

pub fn build_symbol_table(a: &Architecture, p: &Placement, d: u32) -> QSymbolTable {
    QSymbolTable {
        d,
        entries: p
            .assign
            .iter()
            .map(|&l| SymbolEntry {
                location: a.location(l),
                physical: block(l, d),
            })
            .collect(),
        n_physical: a.n_locations() as u32 * patch_size(d),
    }
}

/// Non-transversal part of an operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Marker {
    /// Consumes a pre-allocated magic state.
    MagicState,
    /// Lattice-surgery merge and split between the operand patches.
    Merge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FtLibraryEntry {
    pub kind: GateKind,
    pub cycles: u64,
    /// Physical gates of the first cycle's transversal slot.
    pub transversal: Vec<PatchOp>,
    pub marker: Option<Marker>,
    /// Whether ESM runs after the transversal slot.
    pub esm: bool,
}

pub fn library_entry(kind: GateKind, t: &TimingModel) -> Result<FtLibraryEntry, FtError> {
    let cycles = t.try_duration(kind).map_err(|_| FtError::MissingEntry(kind))?;
    let d = t.d as u16;
    let all: Vec<PatchQubit> = (1..=d * d).map(PatchQubit::Data).collect();
    let row: Vec<PatchQubit> = (1..=d).map(PatchQubit::Data).collect();
    let col: Vec<PatchQubit> = (0..d).map(|k| PatchQubit::Data(1 + k * d)).collect();
    let each = |g: GateKind, qs: &[PatchQubit]| -> Vec<PatchOp> {
        qs.iter()
            .map(|&q| PatchOp {
                kind: g,
                qubits: vec![q],
            })
            .collect()
    };
    use GateKind::*;
    let transversal = match kind {
        X => each(X, &row),
        Z => each(Z, &col),
        // D1 lies on both strings.
        Y => [each(Y, &row[..1]), each(X, &row[1..]), each(Z, &col[1..])].concat(),
        H | PrepZ | PrepX | MeasZ | MeasX => each(kind, &all),
        _ => Vec::new(),
    };
    let marker = match kind {
        S | Sdag | T | Tdag => Some(Marker::MagicState),
        Cnot | Swap => Some(Marker::Merge),
        _ => None,
    };
    Ok(FtLibraryEntry {
        kind,
        cycles,
        transversal,
        marker,
        esm: !matches!(kind, MeasZ | MeasX),
    })
}

/// One logical operation placed on the cycle grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleSpan {
    pub id: InstrId,
    pub kind: GateKind,
    pub start: u64,
    pub cycles: u64,
}

/// Cycle span of every operation of a routed circuit; valid for every `d`.
pub fn expand_cycles(rc: &RoutedCircuit, t: &TimingModel) -> Result<Vec<CycleSpan>, FtError> {
    let (times, _) = issue_times(&rc.circuit, t);
    let kinds: BTreeMap<InstrId, GateKind> = rc.circuit.gates().map(|i| (i.id, i.kind)).collect();
    times
        .into_iter()
        .map(|(id, start)| {
            let kind = kinds[&id];
            Ok(CycleSpan {
                id,
                kind,
                start,
                cycles: library_entry(kind, t)?.cycles,
            })
        })
        .collect()
}

/// Physical-level circuit with comments attached before bundles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhysicalCircuit {
    pub circuit: Circuit,
    pub cycles: u64,
    /// Comment lines emitted before the bundle with the given index.
    pub notes: BTreeMap<usize, Vec<String>>,
}

impl PhysicalCircuit {
    pub fn to_qasm(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "qubits {}", self.circuit.n_qubits());
        for (i, bundle) in self.circuit.body.iter().enumerate() {
            for n in self.notes.get(&i).into_iter().flatten() {
                let _ = writeln!(out, "# {n}");
            }
            let _ = writeln!(out, "{}", Line(bundle));
        }
        for n in self.notes.get(&self.circuit.body.len()).into_iter().flatten() {
            let _ = writeln!(out, "# {n}");
        }
        out
    }
}

/// Expands a routed circuit into physical operations at `d = 3`. Every
/// logical operation occupies exactly its library cycle count; the result
/// spans the routed latency.
pub fn expand(rc: &RoutedCircuit, a: &Architecture, t: &TimingModel) -> Result<PhysicalCircuit, FtError> {
    let round = esm_round(t.d)?;
    let spans = expand_cycles(rc, t)?;
    let ops: BTreeMap<InstrId, &Instruction> = rc.circuit.gates().map(|i| (i.id, i)).collect();
    let d = t.d;
    let n_phys = a.n_locations() as u32 * patch_size(d);

    // Current location index of every occupant, holes included.
    let mut pos = vec![0usize; rc.initial.len()];
    for (l, &o) in rc.initial.iter().enumerate() {
        pos[o as usize] = l;
    }
    let mut by_start: BTreeMap<u64, Vec<&CycleSpan>> = BTreeMap::new();
    let mut by_finish: BTreeMap<u64, Vec<&CycleSpan>> = BTreeMap::new();
    for s in &spans {
        by_start.entry(s.start).or_default().push(s);
        by_finish.entry(s.start + s.cycles).or_default().push(s);
    }

    let mut body: Vec<Vec<Instruction>> = Vec::new();
    let mut notes: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    let mut next_id = 0u32;
    let mut gate = |kind: GateKind, qs: Vec<u32>| {
        let ins = Instruction::gate(next_id, kind, &qs);
        next_id += 1;
        ins
    };
    let phys = |pos: &[usize], q: u32, pq: PatchQubit| pos[q as usize] as u32 * patch_size(d) + pq.offset(d);

    for cycle in 0..rc.latency {
        for s in by_finish.get(&cycle).into_iter().flatten() {
            let ins = ops[&s.id];
            if ins.inserted {
                pos.swap(ins.operands[0].index(), ins.operands[1].index());
            }
        }
        let mut here = vec![format!("cycle {cycle}")];
        let mut transversal = Vec::new();
        let mut skip_esm = vec![false; rc.initial.len()];
        for s in by_start.get(&cycle).into_iter().flatten() {
            let ins = ops[&s.id];
            let entry = library_entry(s.kind, t)?;
            for q in &ins.operands {
                for op in &entry.transversal {
                    let qs = op.qubits.iter().map(|&pq| phys(&pos, q.0, pq)).collect();
                    transversal.push(gate(op.kind, qs));
                }
                if !entry.esm {
                    skip_esm[q.index()] = true;
                }
            }
            let at: Vec<String> = ins
                .operands
                .iter()
                .map(|q| format!("{q}@{}", a.location(pos[q.index()])))
                .collect();
            match entry.marker {
                Some(Marker::MagicState) => here.push(format!(
                    "{} {}: magic state, {} cycles",
                    s.kind,
                    at.join(" "),
                    s.cycles
                )),
                Some(Marker::Merge) => here.push(format!(
                    "{} {}: merge and split, {} cycles{}",
                    s.kind,
                    at.join(" "),
                    s.cycles,
                    if ins.inserted { ", inserted" } else { "" }
                )),
                None => {}
            }
        }
        notes.insert(body.len(), here);
        if !transversal.is_empty() {
            body.push(transversal);
        }
        let patches: Vec<u32> = (0..rc.n_logical as u32).filter(|&q| !skip_esm[q as usize]).collect();
        for step in &round {
            let mut bundle = Vec::new();
            for &q in &patches {
                for op in step {
                    let qs = op.qubits.iter().map(|&pq| phys(&pos, q, pq)).collect();
                    bundle.push(gate(op.kind, qs));
                }
            }
            if !bundle.is_empty() {
                body.push(bundle);
            }
        }
    }
    let mut circuit = Circuit::new(n_phys as usize);
    circuit.body = body;
    Ok(PhysicalCircuit {
        circuit,
        cycles: rc.latency,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arch::ArchKind;
    use crate::route::route;

    fn tm(d: u32) -> TimingModel {
        TimingModel::new(d, ArchKind::TileBased).unwrap()
    }

    #[test]
    fn patch_blocks_are_disjoint_and_stable() {
        let a = Architecture::new(ArchKind::TileBased, 2, 2).unwrap();
        let p = Placement { assign: vec![3, 0] };
        let t = build_symbol_table(&a, &p, 3);
        assert_eq!(t.entries[0].physical.len(), 17);
        assert_eq!(t.physical(1, PatchQubit::Data(5)).unwrap(), 4);
        assert_eq!(t.physical(0, PatchQubit::Data(1)).unwrap(), 51);
        assert_eq!(t.physical(0, PatchQubit::Ancilla(8)).unwrap(), 67);
        assert!(t.entries[0].physical.iter().all(|i| !t.entries[1].physical.contains(i)));
        assert_eq!(t.lookup(2), Err(FtError::SymbolMiss(2)));
        assert_eq!(build_symbol_table(&a, &p, 5).entries[0].physical.len(), 49);
    }

    #[test]
    fn logical_strings_commute_with_stabilizers() {
        let x = library_entry(GateKind::X, &tm(3)).unwrap();
        let z = library_entry(GateKind::Z, &tm(3)).unwrap();
        let on = |e: &FtLibraryEntry| -> Vec<u16> {
            e.transversal
                .iter()
                .map(|o| match o.qubits[0] {
                    PatchQubit::Data(k) => k,
                    PatchQubit::Ancilla(_) => unreachable!(),
                })
                .collect()
        };
        let (xs, zs) = (on(&x), on(&z));
        assert_eq!(xs, vec![1, 2, 3]);
        assert_eq!(zs, vec![1, 4, 7]);
        for (_, ty, support) in D3_STABILIZERS {
            let string = if ty == StabilizerType::Z { &xs } else { &zs };
            let overlap = support.iter().filter(|k| string.contains(k)).count();
            assert_eq!(overlap % 2, 0);
        }
        // The two strings meet once, so they anticommute.
        assert_eq!(xs.iter().filter(|k| zs.contains(k)).count(), 1);
    }

    #[test]
    fn wait_has_no_entry() {
        assert_eq!(library_entry(GateKind::Wait, &tm(3)), Err(FtError::MissingEntry(GateKind::Wait)));
    }

    #[test]
    fn single_x_expands_to_one_cycle() {
        let a = Architecture::new(ArchKind::TileBased, 1, 1).unwrap();
        let c = Circuit::from_serial(1, &[(GateKind::X, &[0])]);
        let p = Placement { assign: vec![0] };
        let rc = route(&c, &a, &p, &tm(3), 4).unwrap();
        let e = expand(&rc, &a, &tm(3)).unwrap();
        assert_eq!(e.cycles, 1);
        assert_eq!(e.circuit.body.len(), 9);
        let first: Vec<String> = e.circuit.body[0].iter().map(|i| i.to_string()).collect();
        assert_eq!(first, vec!["x q0", "x q1", "x q2"]);
        assert!(e.circuit.validate().is_ok());
        assert!(matches!(expand(&rc, &a, &tm(5)), Err(FtError::UnsupportedDistance(5))));
    }
}
