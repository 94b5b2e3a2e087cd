use super::Constraints;

/// Greedy list scheduling. Jobs become eligible once all predecessors are
/// placed; the eligible job with the longest tail to a sink goes first (ties
/// by lower index) and takes the earliest slot clear of its disjunctive
/// partners.
pub fn solve_list(c: &Constraints) -> Result<Vec<u64>, usize> {
    let n = c.len();
    let base = c.longest_path(&[])?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (base[v], v));
    let mut succ = vec![Vec::new(); n];
    let mut pred = vec![Vec::new(); n];
    for &(a, b) in &c.prec {
        succ[a].push(b);
        pred[b].push(a);
    }
    let mut tail = vec![0u64; n];
    for &v in order.iter().rev() {
        tail[v] = c.durations[v] + succ[v].iter().map(|&w| tail[w]).max().unwrap_or(0);
    }
    let mut partners = vec![Vec::new(); n];
    for &(a, b) in &c.disjunctive {
        partners[a].push(b);
        partners[b].push(a);
    }

    let mut start = vec![0u64; n];
    let mut placed = vec![false; n];
    let mut waiting: Vec<usize> = pred.iter().map(Vec::len).collect();
    let mut eligible: Vec<usize> = (0..n).filter(|&v| waiting[v] == 0).collect();
    while !eligible.is_empty() {
        let (k, &v) = eligible
            .iter()
            .enumerate()
            .max_by_key(|&(_, &v)| (tail[v], std::cmp::Reverse(v)))
            .expect("non-empty");
        eligible.swap_remove(k);
        let mut t = pred[v]
            .iter()
            .map(|&u| start[u] + c.durations[u])
            .max()
            .unwrap_or(0);
        let mut busy: Vec<(u64, u64)> = partners[v]
            .iter()
            .filter(|&&u| placed[u])
            .map(|&u| (start[u], start[u] + c.durations[u]))
            .collect();
        busy.sort_unstable();
        for (s, e) in busy {
            if t + c.durations[v] <= s {
                break;
            }
            t = t.max(e);
        }
        start[v] = t;
        placed[v] = true;
        for &w in &succ[v] {
            waiting[w] -= 1;
            if waiting[w] == 0 {
                eligible.push(w);
            }
        }
    }
    Ok(start)
}
