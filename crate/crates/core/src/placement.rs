//! Initial placement as a quadratic assignment problem.
//!
//! Cost of a placement is the sum over qubit pairs of CNOT count times the
//! Manhattan distance between their locations. The smart placer finds the
//! optimum by branch and bound; the naive placer fills locations in order.
//! Beyond desk scale the search is cut off by an evaluation budget and the
//! best placement found so far is used.

use serde::{Deserialize, Serialize};

use crate::arch::{Architecture, Location};
use crate::circuit::{Circuit, GateKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PlacementError {
    #[error("{qubits} qubits do not fit on {locations} locations")]
    TooManyQubits { qubits: usize, locations: usize },
}

/// Symmetric CNOT counts between qubit pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InteractionMatrix {
    n: usize,
    counts: Vec<u32>,
}

impl InteractionMatrix {
    pub fn zeros(n: usize) -> Self {
        InteractionMatrix {
            n,
            counts: vec![0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, k: usize, l: usize) -> u32 {
        self.counts[k * self.n + l]
    }

    pub fn add(&mut self, k: usize, l: usize, count: u32) {
        if k != l {
            self.counts[k * self.n + l] += count;
            self.counts[l * self.n + k] += count;
        }
    }

    /// Sum over unordered pairs.
    pub fn total(&self) -> u32 {
        (0..self.n)
            .flat_map(|k| (k + 1..self.n).map(move |l| (k, l)))
            .map(|(k, l)| self.get(k, l))
            .sum()
    }
}

pub fn interaction_matrix(c: &Circuit) -> InteractionMatrix {
    let mut m = InteractionMatrix::zeros(c.n_qubits());
    for ins in c.gates().filter(|i| i.kind == GateKind::Cnot) {
        m.add(ins.operands[0].index(), ins.operands[1].index(), 1);
    }
    m
}

/// Manhattan distances between locations in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    m: usize,
    dist: Vec<u32>,
}

impl DistanceMatrix {
    pub fn manhattan(a: &Architecture) -> Self {
        let locs: Vec<Location> = a.locations().collect();
        let m = locs.len();
        let mut dist = vec![0; m * m];
        for (i, x) in locs.iter().enumerate() {
            for (j, y) in locs.iter().enumerate() {
                dist[i * m + j] = x.manhattan(*y);
            }
        }
        DistanceMatrix { m, dist }
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.dist[i * self.m + j]
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }
}

/// Location index (row-major) of every qubit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Placement {
    pub assign: Vec<usize>,
}

impl Placement {
    pub fn locations(&self, a: &Architecture) -> Vec<Location> {
        self.assign.iter().map(|&i| a.location(i)).collect()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.assign.iter().all(|i| seen.insert(*i))
    }
}

pub fn qap_cost(p: &Placement, r: &InteractionMatrix, d: &DistanceMatrix) -> u64 {
    let n = p.assign.len();
    let mut cost = 0u64;
    for k in 0..n {
        for l in k + 1..n {
            cost += r.get(k, l) as u64 * d.get(p.assign[k], p.assign[l]) as u64;
        }
    }
    cost
}

fn check_fit(c: &Circuit, a: &Architecture) -> Result<(), PlacementError> {
    if c.n_qubits() > a.n_locations() {
        return Err(PlacementError::TooManyQubits {
            qubits: c.n_qubits(),
            locations: a.n_locations(),
        });
    }
    Ok(())
}

pub fn place_naive(c: &Circuit, a: &Architecture) -> Result<Placement, PlacementError> {
    check_fit(c, a)?;
    Ok(Placement {
        assign: (0..c.n_qubits()).collect(),
    })
}

/// Child evaluations after which the search stops and returns its incumbent.
/// Large enough to settle every instance up to six qubits on nine locations.
pub const QAP_EVAL_BUDGET: u64 = 400_000;

/// Result of [`solve_qap_bounded`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QapSolution {
    pub placement: Placement,
    pub cost: u64,
    /// False when the budget ran out before the search closed.
    pub optimal: bool,
    pub evaluations: u64,
}

struct Bnb<'a> {
    d: &'a DistanceMatrix,
    /// Interacting partners of every qubit with their counts.
    partners: Vec<Vec<(usize, u64)>>,
    assign: Vec<usize>,
    used: Vec<bool>,
    /// Cost a complete assignment must not exceed before one is found.
    ceiling: u64,
    best: Option<(u64, Vec<usize>)>,
    evaluations: u64,
    budget: u64,
}

impl Bnb<'_> {
    fn bound(&self, partial: u64) -> u64 {
        let k = self.assign.len();
        let m = self.d.len();
        let mut near = vec![u32::MAX; k];
        let mut lb = partial;
        for u in k..self.partners.len() {
            for &(v, w) in &self.partners[u] {
                if v < k {
                    if near[v] == u32::MAX {
                        let p = self.assign[v];
                        near[v] = (0..m)
                            .filter(|&f| !self.used[f])
                            .map(|f| self.d.get(p, f))
                            .min()
                            .unwrap_or(0);
                    }
                    lb += w * near[v] as u64;
                } else if v > u {
                    lb += w;
                }
            }
        }
        lb
    }

    fn admits(&self, lb: u64) -> bool {
        match &self.best {
            Some((b, _)) => lb < *b,
            None => lb <= self.ceiling,
        }
    }

    fn visit(&mut self, partial: u64) {
        let k = self.assign.len();
        if k == self.partners.len() {
            if self.admits(partial) {
                self.best = Some((partial, self.assign.clone()));
            }
            return;
        }
        for loc in 0..self.d.len() {
            if self.used[loc] {
                continue;
            }
            if self.evaluations >= self.budget {
                return;
            }
            self.evaluations += 1;
            let added: u64 = self.partners[k]
                .iter()
                .filter(|&&(v, _)| v < k)
                .map(|&(v, w)| w * self.d.get(self.assign[v], loc) as u64)
                .sum();
            self.assign.push(loc);
            self.used[loc] = true;
            let lb = self.bound(partial + added);
            if self.admits(lb) {
                self.visit(partial + added);
            }
            self.used[loc] = false;
            self.assign.pop();
        }
    }
}

/// Pairwise exchange descent from `start`, moves into free locations
/// included. Returns a placement no worse than `start`.
fn descend(r: &InteractionMatrix, d: &DistanceMatrix, start: Vec<usize>) -> Vec<usize> {
    let n = r.n();
    let m = d.len();
    let mut at = start;
    let mut occ: Vec<Option<usize>> = vec![None; m];
    for (q, &l) in at.iter().enumerate() {
        occ[l] = Some(q);
    }
    let delta_move = |at: &[usize], q: usize, to: usize, skip: Option<usize>| -> i64 {
        (0..n)
            .filter(|&v| v != q && Some(v) != skip)
            .map(|v| {
                let w = r.get(q, v) as i64;
                w * (d.get(to, at[v]) as i64 - d.get(at[q], at[v]) as i64)
            })
            .sum()
    };
    loop {
        let mut improved = false;
        for q in 0..n {
            for l in 0..m {
                if l == at[q] {
                    continue;
                }
                let gain = match occ[l] {
                    None => delta_move(&at, q, l, None),
                    Some(o) => delta_move(&at, q, l, Some(o)) + delta_move(&at, o, at[q], Some(q)),
                };
                if gain < 0 {
                    let from = at[q];
                    if let Some(o) = occ[l] {
                        at[o] = from;
                    }
                    occ[from] = occ[l];
                    occ[l] = Some(q);
                    at[q] = l;
                    improved = true;
                }
            }
        }
        if !improved {
            return at;
        }
    }
}

/// Optimal QAP placement; among optima, the lexicographically smallest
/// assignment vector. Falls back to the best placement found when the
/// search exceeds [`QAP_EVAL_BUDGET`].
pub fn place_smart(c: &Circuit, a: &Architecture) -> Result<Placement, PlacementError> {
    check_fit(c, a)?;
    let r = interaction_matrix(c);
    let d = DistanceMatrix::manhattan(a);
    let s = solve_qap_bounded(&r, &d, QAP_EVAL_BUDGET);
    if !s.optimal {
        log::warn!(
            "placement search stopped after {} evaluations; cost {} not proven optimal",
            s.evaluations,
            s.cost
        );
    }
    Ok(s.placement)
}

pub fn solve_qap(r: &InteractionMatrix, d: &DistanceMatrix) -> Placement {
    solve_qap_bounded(r, d, u64::MAX).placement
}

/// Branch and bound seeded with a descent from the in-order placement, so
/// the result never costs more than [`place_naive`]'s.
pub fn solve_qap_bounded(r: &InteractionMatrix, d: &DistanceMatrix, budget: u64) -> QapSolution {
    let n = r.n();
    let seed = descend(r, d, (0..n).collect());
    let seed_cost = qap_cost(&Placement { assign: seed.clone() }, r, d);
    let partners = (0..n)
        .map(|u| {
            (0..n)
                .filter(|&v| v != u && r.get(u, v) > 0)
                .map(|v| (v, r.get(u, v) as u64))
                .collect()
        })
        .collect();
    let mut s = Bnb {
        d,
        partners,
        assign: Vec::with_capacity(n),
        used: vec![false; d.len()],
        ceiling: seed_cost,
        best: None,
        evaluations: 0,
        budget,
    };
    s.visit(0);
    let optimal = s.evaluations < budget;
    let (cost, assign) = match s.best {
        Some((c, a)) if c <= seed_cost => (c, a),
        _ => (seed_cost, seed),
    };
    QapSolution {
        placement: Placement { assign },
        cost,
        optimal,
        evaluations: s.evaluations,
    }
}
