use super::Constraints;

struct Search<'a> {
    c: &'a Constraints,
    arcs: Vec<(usize, usize)>,
    best: Option<(u64, Vec<u64>)>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn visit(&mut self) {
        if self.nodes >= self.budget {
            return;
        }
        self.nodes += 1;
        let Ok(start) = self.c.longest_path(&self.arcs) else {
            return;
        };
        let lb = self.c.makespan(&start);
        if matches!(&self.best, Some((m, _)) if lb >= *m) {
            return;
        }
        let clash = self.c.disjunctive.iter().copied().find(|&(a, b)| {
            start[a] < start[b] + self.c.durations[b] && start[b] < start[a] + self.c.durations[a]
        });
        match clash {
            None => self.best = Some((lb, start)),
            Some((a, b)) => {
                for arc in [(a, b), (b, a)] {
                    self.arcs.push(arc);
                    self.visit();
                    self.arcs.pop();
                }
            }
        }
    }
}

/// Minimum-makespan start times by branch and bound over disjunctive pairs.
///
/// Each node evaluates the longest-path schedule of the arcs fixed so far,
/// which bounds every completion from below. The first overlapping pair is
/// oriented both ways, lower index first; a node with no overlap is optimal
/// for its branch.
pub fn solve_exact(c: &Constraints) -> Result<Vec<u64>, usize> {
    // Every disjunctive pair admits at least one acyclic orientation here: any
    // longest-path order of the base arcs orients all pairs consistently.
    Ok(solve_exact_bounded(c, u64::MAX)?.expect("feasible orientation exists"))
}

/// [`solve_exact`] limited to `budget` search nodes; `None` when the search
/// did not close in time.
pub fn solve_exact_bounded(c: &Constraints, budget: u64) -> Result<Option<Vec<u64>>, usize> {
    c.longest_path(&[])?;
    let mut s = Search {
        c,
        arcs: Vec::new(),
        best: None,
        nodes: 0,
        budget,
    };
    s.visit();
    if s.nodes >= budget {
        return Ok(None);
    }
    Ok(s.best.map(|(_, st)| st))
}
