//! Sliding-window routing with SWAP insertion.
//!
//! Every location always holds an occupant: a logical qubit or, for empty
//! locations, a hole with an id at or above the logical qubit count. Holes
//! appear as extra qubits in the routed circuit so that moving a qubit into
//! free space is an ordinary dependency-tracked SWAP.
//!
//! Each iteration scans the first half of the buffer for a two-qubit
//! instruction whose operands are not adjacent, enumerates shortest SWAP
//! paths that bring the control next to the target, scores them, inserts the
//! winner, reorders the verified prefix by ASAP start and emits the head.

mod validate;

pub use validate::{validate_routed, RouteViolation};

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::arch::{Architecture, Location};
use crate::circuit::{Circuit, GateKind, InstrId, Instruction, Qubit};
use crate::placement::Placement;
use crate::schedule::{to_parallel_circuit, Schedule};
use crate::timing::TimingModel;

/// Upper bound on enumerated shortest paths per routed instruction.
pub const MAX_CANDIDATES: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RouteError {
    #[error("window must hold at least 2 instructions, got {0}")]
    WindowTooSmall(usize),
    #[error("no path brings {0} next to its partner")]
    NoPath(InstrId),
    #[error("placement covers {placed} qubits, circuit has {qubits}")]
    PlacementMismatch { placed: usize, qubits: usize },
    #[error("placement is not a valid injective map onto the grid")]
    BadPlacement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InsertedPath {
    /// The instruction the path serves.
    pub target: InstrId,
    /// Locations visited by the moving operand, start included.
    pub hops: Vec<Location>,
    pub swaps: Vec<InstrId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayoutSnapshot {
    /// Inserted SWAP after which the snapshot was taken.
    pub after: InstrId,
    /// Logical occupant of every location in row-major order.
    pub occupancy: Vec<Option<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoutedCircuit {
    /// Bundled output; qubits past `n_logical` are holes.
    pub circuit: Circuit,
    pub n_logical: usize,
    pub n_swaps: usize,
    pub paths: Vec<InsertedPath>,
    pub layout_trace: Vec<LayoutSnapshot>,
    /// Occupant of every location before the first instruction.
    pub initial: Vec<u32>,
    /// Makespan of the routed circuit in cycles.
    pub latency: u64,
}

impl RoutedCircuit {
    pub fn swap_count(&self) -> usize {
        self.n_swaps
    }

    pub fn routed_latency(&self) -> u64 {
        self.latency
    }
}

#[derive(Clone, Debug)]
struct Layout {
    /// Occupant per location index.
    occ: Vec<u32>,
    /// Location index per occupant.
    pos: Vec<usize>,
}

impl Layout {
    fn swap(&mut self, a: u32, b: u32) {
        let (la, lb) = (self.pos[a as usize], self.pos[b as usize]);
        self.occ.swap(la, lb);
        self.pos.swap(a as usize, b as usize);
    }

    fn apply(&mut self, ins: &Instruction) {
        if ins.inserted {
            self.swap(ins.operands[0].0, ins.operands[1].0);
        }
    }
}

/// Initial occupants: logical qubits from the placement, holes numbered in
/// row-major order of the free locations.
pub fn initial_occupants(a: &Architecture, p: &Placement) -> Vec<u32> {
    let n = p.assign.len() as u32;
    let mut occ = vec![u32::MAX; a.n_locations()];
    for (q, &l) in p.assign.iter().enumerate() {
        occ[l] = q as u32;
    }
    for (o, next) in occ.iter_mut().filter(|o| **o == u32::MAX).zip(n..) {
        *o = next;
    }
    occ
}

/// Whether a two-qubit instruction can run with operands at `la` and `lb`.
pub(crate) fn adjacent(a: &Architecture, kind: GateKind, la: Location, lb: Location) -> bool {
    match kind {
        GateKind::Swap => a.are_swap_neighbors(la, lb),
        _ => a.are_neighbors(la, lb),
    }
}

/// Locations from which `kind` can act on an operand sitting at `target`.
pub(crate) fn goals(a: &Architecture, kind: GateKind, target: Location) -> Vec<Location> {
    let v = match kind {
        GateKind::Swap => a.swap_neighbors(target),
        _ => a.neighbors(target),
    };
    v.unwrap_or_default()
}

/// Hop distances over SWAP edges from `from`, never entering `blocked`.
pub(crate) fn bfs(a: &Architecture, from: Location, blocked: Location) -> Vec<Option<u32>> {
    let mut dist = vec![None; a.n_locations()];
    dist[a.index(from)] = Some(0);
    let mut queue = VecDeque::from([from]);
    while let Some(l) = queue.pop_front() {
        let d = dist[a.index(l)].expect("visited");
        for n in a.swap_neighbors(l).unwrap_or_default() {
            if n == blocked || dist[a.index(n)].is_some() {
                continue;
            }
            dist[a.index(n)] = Some(d + 1);
            queue.push_back(n);
        }
    }
    dist
}

/// SWAPs needed before `kind` can act from `from` on `target`.
pub(crate) fn route_distance(a: &Architecture, kind: GateKind, from: Location, target: Location) -> Option<u32> {
    if adjacent(a, kind, from, target) {
        return Some(0);
    }
    let dist = bfs(a, from, target);
    goals(a, kind, target)
        .into_iter()
        .filter_map(|g| dist[a.index(g)])
        .min()
}

/// All shortest paths (as location sequences) in lexicographic order of
/// location indices, capped at [`MAX_CANDIDATES`].
fn shortest_paths(a: &Architecture, kind: GateKind, from: Location, target: Location) -> Vec<Vec<Location>> {
    let dist = bfs(a, from, target);
    let goal_set = goals(a, kind, target);
    let Some(best) = goal_set.iter().filter_map(|g| dist[a.index(*g)]).min() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut path = vec![from];
    fn dfs(
        a: &Architecture,
        dist: &[Option<u32>],
        goals: &[Location],
        best: u32,
        path: &mut Vec<Location>,
        out: &mut Vec<Vec<Location>>,
    ) {
        if out.len() >= MAX_CANDIDATES {
            return;
        }
        let here = *path.last().expect("non-empty");
        let d = path.len() as u32 - 1;
        if d == best {
            if goals.contains(&here) {
                out.push(path.clone());
            }
            return;
        }
        let mut next = a.swap_neighbors(here).unwrap_or_default();
        next.sort_by_key(|l| a.index(*l));
        for n in next {
            if dist[a.index(n)] == Some(d + 1) {
                path.push(n);
                dfs(a, dist, goals, best, path, out);
                path.pop();
            }
        }
    }
    dfs(a, &dist, &goal_set, best, &mut path, &mut out);
    out
}

struct Router<'a> {
    arch: &'a Architecture,
    tm: &'a TimingModel,
    window: usize,
    swap_cycles: u64,
    /// Layout after every emitted instruction.
    head: Layout,
    /// Finish time of every occupant's last emitted instruction.
    ready: Vec<u64>,
    buffer: Vec<Instruction>,
    emitted: Vec<(Instruction, u64)>,
    paths: Vec<InsertedPath>,
    trace: Vec<LayoutSnapshot>,
    n_logical: usize,
    next_id: u32,
}

impl Router<'_> {
    fn loc(&self, layout: &Layout, q: Qubit) -> Location {
        self.arch.location(layout.pos[q.index()])
    }

    fn needs_route(&self, layout: &Layout, ins: &Instruction) -> bool {
        ins.kind.is_two_qubit()
            && !ins.inserted
            && !adjacent(
                self.arch,
                ins.kind,
                self.loc(layout, ins.operands[0]),
                self.loc(layout, ins.operands[1]),
            )
    }

    fn cost(&self, ins: &Instruction) -> u64 {
        self.tm.duration(ins.kind)
    }

    /// First instruction in the scan region that needs routing, with the
    /// layout right before it.
    fn scan(&self) -> Option<(usize, Layout)> {
        let region = (self.window / 2).max(1).min(self.buffer.len());
        let mut layout = self.head.clone();
        for (i, ins) in self.buffer[..region].iter().enumerate() {
            if self.needs_route(&layout, ins) {
                return Some((i, layout));
            }
            layout.apply(ins);
        }
        None
    }

    fn score(&self, ins_at: usize, layout: &Layout, path: &[Location]) -> u64 {
        let ins = &self.buffer[ins_at];
        // Look-back: portion of each SWAP finishing before the instruction
        // would have started anyway.
        let mut ready = self.ready.clone();
        for b in &self.buffer[..ins_at] {
            let s = b.operands.iter().map(|q| ready[q.index()]).max().unwrap_or(0);
            for q in &b.operands {
                ready[q.index()] = s + self.cost(b);
            }
        }
        let baseline = ins.operands.iter().map(|q| ready[q.index()]).max().unwrap_or(0);
        let mut sim = layout.clone();
        let mut credit = 0u64;
        for w in path.windows(2) {
            let u = sim.occ[self.arch.index(w[0])];
            let v = sim.occ[self.arch.index(w[1])];
            let s = ready[u as usize].max(ready[v as usize]);
            let e = s + self.swap_cycles;
            credit += e.min(baseline).saturating_sub(s);
            ready[u as usize] = e;
            ready[v as usize] = e;
            sim.swap(u, v);
        }
        // Look-ahead: independent shortest-path cost of every later
        // two-qubit instruction in the buffer under the new layout.
        let mut ahead = 0u64;
        for b in &self.buffer[ins_at + 1..] {
            if b.inserted {
                sim.apply(b);
                continue;
            }
            if b.kind.is_two_qubit() {
                let from = self.loc(&sim, b.operands[0]);
                let to = self.loc(&sim, b.operands[1]);
                let hops = route_distance(self.arch, b.kind, from, to).unwrap_or(0);
                ahead += hops as u64 * self.swap_cycles;
            }
        }
        let hops = (path.len() - 1) as u64;
        (hops * self.swap_cycles + ahead).saturating_sub(credit)
    }

    fn insert(&mut self, ins_at: usize, layout: Layout) -> Result<usize, RouteError> {
        let ins = self.buffer[ins_at].clone();
        let from = self.loc(&layout, ins.operands[0]);
        let to = self.loc(&layout, ins.operands[1]);
        let candidates = shortest_paths(self.arch, ins.kind, from, to);
        let mut best: Option<(u64, Vec<usize>, &Vec<Location>)> = None;
        for p in &candidates {
            let s = self.score(ins_at, &layout, p);
            let key: Vec<usize> = p.iter().map(|l| self.arch.index(*l)).collect();
            let better = match &best {
                None => true,
                Some((bs, bk, _)) => s < *bs || (s == *bs && key < *bk),
            };
            if better {
                best = Some((s, key, p));
            }
        }
        let (_, _, path) = best.ok_or(RouteError::NoPath(ins.id))?;
        let path = path.clone();
        let mut sim = layout;
        let mut swaps = Vec::new();
        for w in path.windows(2) {
            let u = sim.occ[self.arch.index(w[0])];
            let v = sim.occ[self.arch.index(w[1])];
            let mut s = Instruction::gate(self.next_id, GateKind::Swap, &[u, v]);
            s.inserted = true;
            self.next_id += 1;
            sim.swap(u, v);
            swaps.push(s);
        }
        log::debug!(
            "route {} via {} swap(s): {:?}",
            ins,
            swaps.len(),
            path.iter().map(|l| self.arch.index(*l)).collect::<Vec<_>>()
        );
        self.paths.push(InsertedPath {
            target: ins.id,
            hops: path,
            swaps: swaps.iter().map(|s| s.id).collect(),
        });
        let n = swaps.len();
        self.buffer.splice(ins_at..ins_at, swaps);
        Ok(ins_at + n)
    }

    /// Stable reorder of `buffer[..=end]` by ASAP start.
    fn reschedule_prefix(&mut self, end: usize) {
        let mut ready = self.ready.clone();
        let mut keyed: Vec<(u64, Instruction)> = Vec::with_capacity(end + 1);
        for ins in self.buffer.drain(..=end) {
            let s = ins.operands.iter().map(|q| ready[q.index()]).max().unwrap_or(0);
            for q in &ins.operands {
                ready[q.index()] = s + self.tm.duration(ins.kind);
            }
            keyed.push((s, ins));
        }
        keyed.sort_by_key(|(s, _)| *s);
        let prefix: Vec<Instruction> = keyed.into_iter().map(|(_, i)| i).collect();
        self.buffer.splice(0..0, prefix);
    }

    fn emit_head(&mut self) {
        let ins = self.buffer.remove(0);
        let s = ins.operands.iter().map(|q| self.ready[q.index()]).max().unwrap_or(0);
        for q in &ins.operands {
            self.ready[q.index()] = s + self.cost(&ins);
        }
        if ins.inserted {
            self.head.apply(&ins);
            self.trace.push(LayoutSnapshot {
                after: ins.id,
                occupancy: logical_view(&self.head.occ, self.n_logical),
            });
        }
        self.emitted.push((ins, s));
    }
}

fn logical_view(occ: &[u32], n_logical: usize) -> Vec<Option<u32>> {
    occ.iter()
        .map(|&o| ((o as usize) < n_logical).then_some(o))
        .collect()
}

/// Routes `c` onto `a` from placement `p` with a buffer of `window` instructions.
pub fn route(
    c: &Circuit,
    a: &Architecture,
    p: &Placement,
    tm: &TimingModel,
    window: usize,
) -> Result<RoutedCircuit, RouteError> {
    if window < 2 {
        return Err(RouteError::WindowTooSmall(window));
    }
    if p.assign.len() != c.n_qubits() {
        return Err(RouteError::PlacementMismatch {
            placed: p.assign.len(),
            qubits: c.n_qubits(),
        });
    }
    if !p.is_injective() || p.assign.iter().any(|&l| l >= a.n_locations()) {
        return Err(RouteError::BadPlacement);
    }
    let occ = initial_occupants(a, p);
    let mut pos = vec![0; occ.len()];
    for (l, &o) in occ.iter().enumerate() {
        pos[o as usize] = l;
    }
    let mut router = Router {
        arch: a,
        tm,
        window,
        swap_cycles: tm.duration(GateKind::Swap),
        head: Layout {
            occ: occ.clone(),
            pos,
        },
        ready: vec![0; occ.len()],
        buffer: Vec::with_capacity(window + 8),
        emitted: Vec::new(),
        paths: Vec::new(),
        trace: Vec::new(),
        n_logical: c.n_qubits(),
        next_id: c.next_id(),
    };
    let mut input = c.gates().cloned().collect::<VecDeque<_>>();
    loop {
        while router.buffer.len() < window {
            match input.pop_front() {
                Some(i) => router.buffer.push(i),
                None => break,
            }
        }
        if router.buffer.is_empty() {
            break;
        }
        if let Some((at, layout)) = router.scan() {
            let end = router.insert(at, layout)?;
            router.reschedule_prefix(end);
        }
        router.emit_head();
    }

    let mut out = Circuit::new(occ.len());
    let mut ids = Vec::new();
    let mut starts = Vec::new();
    let mut lats = Vec::new();
    for (ins, s) in &router.emitted {
        ids.push(ins.id);
        starts.push(*s);
        lats.push(tm.duration(ins.kind));
        out.body.push(vec![ins.clone()]);
    }
    let sched = Schedule::new(ids, starts, lats);
    let n_swaps = router.emitted.iter().filter(|(i, _)| i.inserted).count();
    Ok(RoutedCircuit {
        circuit: to_parallel_circuit(&out, &sched),
        n_logical: c.n_qubits(),
        n_swaps,
        paths: router.paths,
        layout_trace: router.trace,
        initial: occ,
        latency: sched.makespan,
    })
}
