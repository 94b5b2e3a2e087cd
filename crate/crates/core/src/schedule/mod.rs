//! Latency-minimizing scheduling over the dependency graph.
//!
//! With commutation enabled, CNOTs that share a qubit in the same role may run
//! in either order but never overlap. The constraint set is built from
//! per-qubit commuting blocks: every pair inside a block is disjunctive and
//! each block precedes the next block on that qubit.

mod exact;
mod list;
mod parallel;

pub use exact::{solve_exact, solve_exact_bounded};
pub use list::solve_list;
pub use parallel::{issue_times, to_parallel_circuit};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::circuit::{DependencyKind, InstrId, Qodg};
use crate::timing::TimingModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    Asap,
    Alap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Solver {
    Exact,
    List,
    /// Exact while the search stays within [`AUTO_NODE_BUDGET`] nodes, list otherwise.
    Auto,
}

pub const AUTO_NODE_BUDGET: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchedulePolicy {
    pub direction: Direction,
    pub commutation: bool,
    pub solver: Solver,
}

impl Default for SchedulePolicy {
    fn default() -> Self {
        SchedulePolicy {
            direction: Direction::Alap,
            commutation: true,
            solver: Solver::Auto,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScheduleError {
    #[error("dependency cycle through instruction {0}")]
    Cycle(InstrId),
}

/// Start times per QODG node, in node order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub ids: Vec<InstrId>,
    pub start: Vec<u64>,
    pub latency: Vec<u64>,
    pub makespan: u64,
}

impl Schedule {
    pub fn new(ids: Vec<InstrId>, start: Vec<u64>, latency: Vec<u64>) -> Self {
        let makespan = start
            .iter()
            .zip(&latency)
            .map(|(s, t)| s + t)
            .max()
            .unwrap_or(0);
        Schedule {
            ids,
            start,
            latency,
            makespan,
        }
    }

    pub fn start_of(&self, id: InstrId) -> Option<u64> {
        self.ids.iter().position(|&i| i == id).map(|k| self.start[k])
    }
}

/// Precedence arcs plus disjunctive (non-overlap) pairs over `n` jobs.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Constraints {
    pub durations: Vec<u64>,
    pub prec: Vec<(usize, usize)>,
    /// Unordered pairs `(a, b)` with `a < b`.
    pub disjunctive: Vec<(usize, usize)>,
}

impl Constraints {
    pub fn len(&self) -> usize {
        self.durations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.durations.is_empty()
    }

    /// The same constraints with every arc reversed.
    pub fn reversed(&self) -> Constraints {
        Constraints {
            durations: self.durations.clone(),
            prec: self.prec.iter().map(|&(a, b)| (b, a)).collect(),
            disjunctive: self.disjunctive.clone(),
        }
    }

    /// Builds constraints from per-resource operation sequences. Consecutive
    /// members of a sequence are either commuting (`commutes(a, b)`) and join
    /// the same block, or open a new block.
    pub fn from_sequences<F>(durations: Vec<u64>, sequences: &[Vec<usize>], commutes: F) -> Self
    where
        F: Fn(usize, usize) -> bool,
    {
        let mut prec = BTreeSet::new();
        let mut disj = BTreeSet::new();
        for seq in sequences {
            let mut blocks: Vec<Vec<usize>> = Vec::new();
            for &n in seq {
                match blocks.last_mut() {
                    Some(b) if commutes(*b.last().unwrap(), n) => b.push(n),
                    _ => blocks.push(vec![n]),
                }
            }
            for b in &blocks {
                for (i, &x) in b.iter().enumerate() {
                    for &y in &b[i + 1..] {
                        disj.insert((x.min(y), x.max(y)));
                    }
                }
            }
            for w in blocks.windows(2) {
                for &x in &w[0] {
                    for &y in &w[1] {
                        if x != y {
                            prec.insert((x, y));
                        }
                    }
                }
            }
        }
        let disjunctive = disj
            .into_iter()
            .filter(|&(a, b)| !prec.contains(&(a, b)) && !prec.contains(&(b, a)))
            .collect();
        Constraints {
            durations,
            prec: prec.into_iter().collect(),
            disjunctive,
        }
    }

    /// Earliest start times under `prec` plus `extra` arcs, or the node on a cycle.
    pub fn longest_path(&self, extra: &[(usize, usize)]) -> Result<Vec<u64>, usize> {
        let n = self.len();
        let mut succ = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(a, b) in self.prec.iter().chain(extra) {
            succ[a].push(b);
            indeg[b] += 1;
        }
        let mut start = vec![0u64; n];
        let mut queue: std::collections::VecDeque<usize> =
            (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut done = 0;
        while let Some(v) = queue.pop_front() {
            done += 1;
            let fin = start[v] + self.durations[v];
            for &w in &succ[v] {
                start[w] = start[w].max(fin);
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        if done < n {
            return Err((0..n).find(|&v| indeg[v] > 0).unwrap_or(0));
        }
        Ok(start)
    }

    pub fn makespan(&self, start: &[u64]) -> u64 {
        start
            .iter()
            .zip(&self.durations)
            .map(|(s, t)| s + t)
            .max()
            .unwrap_or(0)
    }
}

/// Constraint set for a QODG under the given commutation setting.
pub fn constraints(g: &Qodg, t: &TimingModel, commutation: bool) -> Constraints {
    let durations: Vec<u64> = g.nodes.iter().map(|i| t.duration(i.kind)).collect();
    if commutation {
        Constraints::from_sequences(durations, &g.per_qubit, |a, b| {
            crate::circuit::qodg::commuting_pair(&g.nodes[a], &g.nodes[b])
        })
    } else {
        let mut prec: Vec<(usize, usize)> = g.edges.iter().map(|e| (e.from, e.to)).collect();
        prec.sort_unstable();
        prec.dedup();
        Constraints {
            durations,
            prec,
            disjunctive: Vec::new(),
        }
    }
}

/// Solves `c` in the requested direction and returns start times.
pub fn solve(c: &Constraints, policy: &SchedulePolicy) -> Result<Vec<u64>, usize> {
    let run = |c: &Constraints| match policy.solver {
        Solver::Exact => solve_exact(c),
        Solver::List => solve_list(c),
        Solver::Auto => match solve_exact_bounded(c, AUTO_NODE_BUDGET)? {
            Some(st) => Ok(st),
            None => {
                log::info!("exact schedule search over budget, using list scheduling");
                solve_list(c)
            }
        },
    };
    match policy.direction {
        Direction::Asap => run(c),
        Direction::Alap => {
            let rev = run(&c.reversed())?;
            let m = c.makespan(&rev);
            Ok(rev
                .iter()
                .zip(&c.durations)
                .map(|(s, t)| m - (s + t))
                .collect())
        }
    }
}

pub fn schedule(g: &Qodg, t: &TimingModel, p: &SchedulePolicy) -> Result<Schedule, ScheduleError> {
    let c = constraints(g, t, p.commutation);
    let start = solve(&c, p).map_err(|v| ScheduleError::Cycle(g.nodes[v].id))?;
    Ok(Schedule::new(
        g.nodes.iter().map(|i| i.id).collect(),
        start,
        c.durations,
    ))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    /// `to` starts before `from` finishes.
    Precedence { from: InstrId, to: InstrId, edge: Option<DependencyKind> },
    /// Two commuting CNOTs overlap in time.
    Overlap { a: InstrId, b: InstrId },
    /// The schedule does not cover the graph.
    Coverage,
}

/// Checks a schedule against every constraint the policy implies.
pub fn validate_schedule(
    g: &Qodg,
    s: &Schedule,
    t: &TimingModel,
    p: &SchedulePolicy,
) -> Result<(), Vec<Violation>> {
    if s.start.len() != g.len() || s.ids.iter().zip(&g.nodes).any(|(a, b)| *a != b.id) {
        return Err(vec![Violation::Coverage]);
    }
    let c = constraints(g, t, p.commutation);
    let mut out = Vec::new();
    for &(a, b) in &c.prec {
        if s.start[a] + c.durations[a] > s.start[b] {
            let edge = g
                .edges
                .iter()
                .find(|e| e.from == a && e.to == b)
                .map(|e| e.kind);
            out.push(Violation::Precedence {
                from: g.nodes[a].id,
                to: g.nodes[b].id,
                edge,
            });
        }
    }
    for &(a, b) in &c.disjunctive {
        let apart = s.start[a] + c.durations[a] <= s.start[b]
            || s.start[b] + c.durations[b] <= s.start[a];
        if !apart {
            out.push(Violation::Overlap {
                a: g.nodes[a].id,
                b: g.nodes[b].id,
            });
        }
    }
    if s.makespan != c.makespan(&s.start) {
        out.push(Violation::Coverage);
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}
