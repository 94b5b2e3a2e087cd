//! Conversion between start times and bundled circuits with `qwait`.
//!
//! Timing of a bundled circuit: bundles issue in order. A bundle starts at the
//! later of the previous bundle's start and the moment its operands become
//! free, delayed by the total of any `qwait` lines directly before it.

use std::collections::{BTreeMap, HashMap};

use super::Schedule;
use crate::circuit::{Circuit, InstrId, Instruction};
use crate::timing::TimingModel;

/// Bundles instructions with equal start time and inserts the waits needed
/// for [`issue_times`] to reproduce every start exactly.
pub fn to_parallel_circuit(c: &Circuit, s: &Schedule) -> Circuit {
    let by_id: HashMap<InstrId, &Instruction> = c.gates().map(|i| (i.id, i)).collect();
    let mut groups: BTreeMap<u64, Vec<(usize, &Instruction)>> = BTreeMap::new();
    for (k, (id, &st)) in s.ids.iter().zip(&s.start).enumerate() {
        let ins = by_id[id];
        groups.entry(st).or_default().push((k, ins));
    }
    let mut out = Circuit {
        qubits: c.qubits.clone(),
        body: Vec::new(),
    };
    let mut ready = vec![0u64; c.n_qubits()];
    let mut cursor = 0u64;
    let mut next_id = c.next_id();
    for (st, group) in groups {
        let implicit = group
            .iter()
            .flat_map(|(_, i)| i.operands.iter())
            .map(|q| ready[q.index()])
            .fold(cursor, u64::max);
        if st > implicit {
            out.body.push(vec![Instruction::wait(next_id, st - implicit)]);
            next_id += 1;
        }
        let mut bundle = Vec::with_capacity(group.len());
        for (k, ins) in group {
            for q in &ins.operands {
                ready[q.index()] = st + s.latency[k];
            }
            bundle.push(ins.clone());
        }
        out.body.push(bundle);
        cursor = st;
    }
    out
}

/// Start time of every non-wait instruction under the bundle timing rule,
/// in program order, plus the makespan.
pub fn issue_times(c: &Circuit, t: &TimingModel) -> (Vec<(InstrId, u64)>, u64) {
    let mut ready = vec![0u64; c.n_qubits()];
    let mut cursor = 0u64;
    let mut pending = 0u64;
    let mut out = Vec::new();
    let mut makespan = 0;
    for bundle in &c.body {
        let gates: Vec<&Instruction> = bundle.iter().filter(|i| !i.is_wait()).collect();
        pending += bundle.iter().map(|i| i.wait_cycles).sum::<u64>();
        if gates.is_empty() {
            continue;
        }
        let st = gates
            .iter()
            .flat_map(|i| i.operands.iter())
            .map(|q| ready[q.index()])
            .fold(cursor, u64::max)
            + pending;
        pending = 0;
        for ins in gates {
            let fin = st + t.duration(ins.kind);
            for q in &ins.operands {
                ready[q.index()] = fin;
            }
            makespan = makespan.max(fin);
            out.push((ins.id, st));
        }
        cursor = st;
    }
    (out, makespan)
}
