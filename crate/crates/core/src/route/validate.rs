use std::collections::{BTreeSet, HashMap};

use super::{adjacent, initial_occupants, route_distance, RoutedCircuit};
use crate::arch::{Architecture, Location, PrimitiveKind, PrimitiveOp};
use crate::circuit::{build_qodg, Circuit, GateKind, InstrId};
use crate::placement::Placement;
use crate::schedule::issue_times;
use crate::timing::TimingModel;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RouteViolation {
    /// A two-qubit instruction runs between non-adjacent locations.
    NotAdjacent(InstrId),
    /// Two overlapping operations share a data or ancilla patch.
    Conflict(InstrId, InstrId),
    /// The recorded layout after an inserted SWAP differs from the replay.
    Trace(InstrId),
    /// Original instructions are missing, duplicated or altered.
    Coverage,
    /// A qubit sees its instructions out of dependency order.
    Order(u32),
    /// An inserted path is longer or shorter than the routing distance.
    PathLength { target: InstrId, hops: usize, distance: Option<u32> },
    /// Reported latency differs from the bundled circuit's makespan.
    Latency { reported: u64, replayed: u64 },
}

/// Replays a routed circuit and reports every broken routing invariant.
pub fn validate_routed(
    rc: &RoutedCircuit,
    input: &Circuit,
    a: &Architecture,
    p: &Placement,
    tm: &TimingModel,
) -> Result<(), Vec<RouteViolation>> {
    let mut errs = Vec::new();
    let occ0 = initial_occupants(a, p);
    if occ0 != rc.initial {
        errs.push(RouteViolation::Coverage);
        return Err(errs);
    }
    let mut occ = occ0.clone();
    let mut pos = vec![0usize; occ.len()];
    for (l, &o) in occ.iter().enumerate() {
        pos[o as usize] = l;
    }

    let (times, makespan) = issue_times(&rc.circuit, tm);
    let start: HashMap<InstrId, u64> = times.into_iter().collect();
    if makespan != rc.latency {
        errs.push(RouteViolation::Latency {
            reported: rc.latency,
            replayed: makespan,
        });
    }

    let first_swap: HashMap<InstrId, usize> = rc
        .paths
        .iter()
        .enumerate()
        .filter_map(|(i, path)| path.swaps.first().map(|s| (*s, i)))
        .collect();
    let originals: HashMap<InstrId, _> = input.gates().map(|i| (i.id, i)).collect();

    let mut ops: Vec<(InstrId, PrimitiveOp)> = Vec::new();
    let mut seen = BTreeSet::new();
    let loc = |pos: &[usize], q: u32| a.location(pos[q as usize]);
    for ins in rc.circuit.gates() {
        let locs: Vec<Location> = ins.operands.iter().map(|q| loc(&pos, q.0)).collect();
        if ins.kind.is_two_qubit() && !adjacent(a, ins.kind, locs[0], locs[1]) {
            errs.push(RouteViolation::NotAdjacent(ins.id));
        }
        if ins.inserted {
            let (la, lb) = (pos[ins.operands[0].index()], pos[ins.operands[1].index()]);
            occ.swap(la, lb);
            pos.swap(ins.operands[0].index(), ins.operands[1].index());
        } else {
            let same = originals
                .get(&ins.id)
                .is_some_and(|o| o.kind == ins.kind && o.operands == ins.operands);
            if !same || !seen.insert(ins.id) {
                errs.push(RouteViolation::Coverage);
            }
        }
        let kind = match ins.kind {
            GateKind::Cnot => PrimitiveKind::Cnot,
            GateKind::Swap => PrimitiveKind::Swap,
            _ => PrimitiveKind::Single,
        };
        ops.push((
            ins.id,
            PrimitiveOp {
                kind,
                locs,
                start: start[&ins.id],
                duration: tm.duration(ins.kind),
            },
        ));
    }
    if seen.len() != originals.len() {
        errs.push(RouteViolation::Coverage);
    }

    let inserted: HashMap<InstrId, _> = rc.circuit.gates().filter(|i| i.inserted).map(|i| (i.id, i)).collect();
    let fresh = || {
        let occ = occ0.clone();
        let mut pos = vec![0usize; occ.len()];
        for (l, &o) in occ.iter().enumerate() {
            pos[o as usize] = l;
        }
        (occ, pos)
    };
    let apply = |occ: &mut Vec<u32>, pos: &mut Vec<usize>, ins: &crate::circuit::Instruction| {
        let (la, lb) = (pos[ins.operands[0].index()], pos[ins.operands[1].index()]);
        occ.swap(la, lb);
        pos.swap(ins.operands[0].index(), ins.operands[1].index());
    };
    let view = |occ: &[u32]| -> Vec<Option<u32>> {
        occ.iter()
            .map(|&o| ((o as usize) < rc.n_logical).then_some(o))
            .collect()
    };
    let bundled_final = view(&occ);

    // Paths were chosen in insertion order, which swap ids record.
    let mut by_id: Vec<InstrId> = inserted.keys().copied().collect();
    by_id.sort();
    let (mut occ, mut pos) = fresh();
    for id in by_id {
        if let Some(&pi) = first_swap.get(&id) {
            let path = &rc.paths[pi];
            let distance = originals.get(&path.target).and_then(|t| {
                route_distance(a, t.kind, loc(&pos, t.operands[0].0), loc(&pos, t.operands[1].0))
            });
            let hops = path.swaps.len();
            if distance != Some(hops as u32) {
                errs.push(RouteViolation::PathLength {
                    target: path.target,
                    hops,
                    distance,
                });
            }
        }
        apply(&mut occ, &mut pos, inserted[&id]);
    }

    // The trace follows emission order; the window reschedule may move a
    // later path's swaps ahead of independent earlier ones.
    let (mut occ, mut pos) = fresh();
    let mut traced = BTreeSet::new();
    for snap in &rc.layout_trace {
        let Some(ins) = inserted.get(&snap.after) else {
            errs.push(RouteViolation::Trace(snap.after));
            continue;
        };
        traced.insert(snap.after);
        apply(&mut occ, &mut pos, ins);
        if view(&occ) != snap.occupancy {
            errs.push(RouteViolation::Trace(snap.after));
        }
    }
    for id in inserted.keys() {
        if !traced.contains(id) {
            errs.push(RouteViolation::Trace(*id));
        }
    }
    if view(&occ) != bundled_final {
        errs.push(RouteViolation::Coverage);
    }

    // Sweep by start time; only operations still running can conflict.
    ops.sort_by_key(|(_, op)| op.start);
    for (i, (ia, x)) in ops.iter().enumerate() {
        for (ib, y) in &ops[i + 1..] {
            if y.start >= x.start + x.duration {
                break;
            }
            if y.duration > 0 && x.duration > 0 && a.conflicts(x, y).unwrap_or(true) {
                errs.push(RouteViolation::Conflict(*ia, *ib));
            }
        }
    }

    // Per-qubit order: original instructions must visit the input's blocks
    // in order; members of one commuting block may be permuted.
    let g = build_qodg(input);
    let blocks = g.qubit_blocks();
    let order: HashMap<InstrId, usize> = rc
        .circuit
        .gates()
        .enumerate()
        .map(|(i, ins)| (ins.id, i))
        .collect();
    for (q, qb) in blocks.iter().enumerate() {
        let mut last_block_end = None;
        for b in qb {
            let idx: Vec<usize> = b.iter().filter_map(|n| order.get(&g.nodes[*n].id).copied()).collect();
            let (lo, hi) = match (idx.iter().min(), idx.iter().max()) {
                (Some(&lo), Some(&hi)) => (lo, hi),
                _ => continue,
            };
            if last_block_end.is_some_and(|e| lo < e) {
                errs.push(RouteViolation::Order(q as u32));
            }
            last_block_end = Some(hi);
        }
    }

    if errs.is_empty() {
        Ok(())
    } else {
        Err(errs)
    }
}
