//! Acceptance checks, one PASS/FAIL line each. Exits non-zero when a check
//! fails that is not in `KNOWN_RED`, or when a known-red check starts passing.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use lsmap_core::arch::{ArchKind, Architecture};
use lsmap_core::benchmarks::steane7;
use lsmap_core::circuit::{build_qodg, characterize, Circuit, DependencyKind, GateKind};
use lsmap_core::experiment::{compare_experiment, CompareMode};
use lsmap_core::ft::{esm_round, expand, expand_cycles, library_entry, render_round};
use lsmap_core::generate::{random_circuit, RandomCircuitConfig};
use lsmap_core::pipeline::{run_pipeline, EmitLevel, RunConfig};
use lsmap_core::placement::{
    place_naive, place_smart, qap_cost, solve_qap, DistanceMatrix, InteractionMatrix,
    interaction_matrix, Placement,
};
use lsmap_core::route::{route, validate_routed};
use lsmap_core::schedule::{schedule, Direction, SchedulePolicy, Solver};
use lsmap_core::surgery::{
    all_constructions, mutants, verify, verify_cnot_construction, verify_move, verify_tcnot,
    verify_tswap, CnotVariant, MoveKind,
};
use lsmap_core::timing::TimingModel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Checks that cannot pass as specified; see README.
const KNOWN_RED: &[&str] = &["4b"];

struct Outcome {
    id: &'static str,
    title: &'static str,
    ok: bool,
    detail: String,
    elapsed: Duration,
    budget: Option<Duration>,
}

fn check(
    id: &'static str,
    title: &'static str,
    budget_s: Option<u64>,
    f: impl FnOnce() -> Result<String, String>,
) -> Outcome {
    let t0 = Instant::now();
    let r = f();
    let elapsed = t0.elapsed();
    let budget = budget_s.map(Duration::from_secs);
    let (mut ok, mut detail) = match r {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if let Some(b) = budget {
        if elapsed > b {
            ok = false;
            detail = format!("{detail}; over the {b:?} budget");
        }
    }
    Outcome {
        id,
        title,
        ok,
        detail,
        elapsed,
        budget,
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// 1

fn timing_table() -> Result<String, String> {
    use GateKind::*;
    for d in [3u32, 5, 7] {
        let dd = d as u64;
        for arch in [ArchKind::Checkerboard, ArchKind::TileBased] {
            let t = TimingModel::new(d, arch).map_err(|e| e.to_string())?;
            let expect: [(GateKind, u64); 16] = [
                (PrepZ, 1),
                (PrepX, 1),
                (MeasZ, 1),
                (MeasX, 1),
                (I, 1),
                (X, 1),
                (Y, 1),
                (Z, 1),
                (H, 4 * dd),
                (S, 14 * dd),
                (Sdag, 14 * dd),
                (T, 17 * dd),
                (Tdag, 17 * dd),
                (Cnot, if arch == ArchKind::Checkerboard { 3 * dd } else { 4 * dd }),
                (Swap, if arch == ArchKind::Checkerboard { 9 * dd } else { 3 * dd }),
                (Wait, 0),
            ];
            for (k, v) in expect {
                ensure(t.duration(k) == v, || {
                    format!("{k:?} at d={d} on {arch}: {} != {v}", t.duration(k))
                })?;
            }
            if arch == ArchKind::Checkerboard {
                ensure(t.duration(Swap) == 3 * t.duration(Cnot), || "c-SWAP != 3 c-CNOT".into())?;
            } else {
                ensure(t.duration(Swap) == 3 * dd, || "t-SWAP != 3d".into())?;
            }
        }
    }
    Ok("d in {3,5,7}, both architectures".into())
}

// 2

fn qubit_efficiency() -> Result<String, String> {
    for n in 1..=16 {
        for m in 1..=16 {
            let a = Architecture::new(ArchKind::TileBased, n, m).unwrap();
            ensure(a.qubit_efficiency() == 0.25, || format!("t-arch {n}x{m}: {}", a.qubit_efficiency()))?;
        }
    }
    let mut prev = 0.0;
    for n in 2..=16 {
        let e = Architecture::new(ArchKind::Checkerboard, n, n).unwrap().qubit_efficiency();
        ensure(e > prev && e < 0.5, || format!("c-arch {n}x{n}: {e} after {prev}"))?;
        prev = e;
    }
    ensure((0.45..=0.50).contains(&prev), || format!("c-arch 16x16: {prev}"))?;
    Ok(format!("t-arch 0.25; c-arch 16x16 = {prev:.4}, increasing from 2x2"))
}

// 3

/// Minimum makespan by trying every order of every commuting block.
/// Blocks are taken from the raw circuit: maximal runs of CNOTs in which a
/// qubit keeps the same role.
fn brute_force_makespan(c: &Circuit, t: &TimingModel) -> u64 {
    let gates: Vec<_> = c.gates().cloned().collect();
    let n = gates.len();
    let dur: Vec<u64> = gates.iter().map(|g| t.duration(g.kind)).collect();
    // Per qubit: list of blocks, each a list of gate indices.
    let mut per_qubit: Vec<Vec<Vec<usize>>> = vec![Vec::new(); c.n_qubits()];
    for (k, g) in gates.iter().enumerate() {
        for (pos, q) in g.operands.iter().enumerate() {
            let blocks = &mut per_qubit[q.index()];
            let role = (g.kind == GateKind::Cnot).then_some(pos);
            let joins = role.is_some()
                && blocks.last().is_some_and(|b: &Vec<usize>| {
                    let last = &gates[*b.last().unwrap()];
                    last.kind == GateKind::Cnot
                        && last.operands.iter().position(|o| o == q) == role
                });
            if joins {
                blocks.last_mut().unwrap().push(k);
            } else {
                blocks.push(vec![k]);
            }
        }
    }
    let blocks: Vec<(usize, usize)> = per_qubit
        .iter()
        .enumerate()
        .flat_map(|(q, bs)| (0..bs.len()).map(move |b| (q, b)))
        .filter(|&(q, b)| per_qubit[q][b].len() > 1)
        .collect();
    let mut best = u64::MAX;
    let mut orders = per_qubit.clone();
    fn permute(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == v.len() {
            out.push(v.clone());
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permute(v, k + 1, out);
            v.swap(k, i);
        }
    }
    let choices: Vec<Vec<Vec<usize>>> = blocks
        .iter()
        .map(|&(q, b)| {
            let mut out = Vec::new();
            permute(&mut per_qubit[q][b].clone(), 0, &mut out);
            out
        })
        .collect();
    let mut idx = vec![0usize; blocks.len()];
    loop {
        for (j, &(q, b)) in blocks.iter().enumerate() {
            orders[q][b] = choices[j][idx[j]].clone();
        }
        // Longest path over per-qubit chains; cyclic orientations are skipped.
        let mut succ = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for bs in &orders {
            let seq: Vec<usize> = bs.iter().flatten().copied().collect();
            for w in seq.windows(2) {
                succ[w[0]].push(w[1]);
                indeg[w[1]] += 1;
            }
        }
        let mut start = vec![0u64; n];
        let mut ready: Vec<usize> = (0..n).filter(|&k| indeg[k] == 0).collect();
        let mut seen = 0;
        while let Some(k) = ready.pop() {
            seen += 1;
            for &s in &succ[k] {
                start[s] = start[s].max(start[k] + dur[k]);
                indeg[s] -= 1;
                if indeg[s] == 0 {
                    ready.push(s);
                }
            }
        }
        if seen == n {
            let m = (0..n).map(|k| start[k] + dur[k]).max().unwrap_or(0);
            best = best.min(m);
        }
        // Next combination.
        let mut j = 0;
        loop {
            if j == blocks.len() {
                return best;
            }
            idx[j] += 1;
            if idx[j] < choices[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

fn scheduler_oracle() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut tested = 0;
    let mut seed = 0u64;
    let mut strict = 0;
    while tested < 200 {
        seed += 1;
        let mut cfg = RandomCircuitConfig::new(rng.gen_range(2..=5), rng.gen_range(3..=10));
        cfg.cnot_fraction = 0.7;
        cfg.shared_control = 0.5;
        let c = random_circuit(&cfg, seed);
        let g = build_qodg(&c);
        if g.count(DependencyKind::Name) > 6 {
            continue;
        }
        tested += 1;
        let arch = if seed.is_multiple_of(2) { ArchKind::Checkerboard } else { ArchKind::TileBased };
        let t = TimingModel::new(3, arch).unwrap();
        let oracle = brute_force_makespan(&c, &t);
        for direction in [Direction::Asap, Direction::Alap] {
            let on = SchedulePolicy { direction, commutation: true, solver: Solver::Exact };
            let off = SchedulePolicy { commutation: false, ..on };
            let m_on = schedule(&g, &t, &on).map_err(|e| e.to_string())?.makespan;
            let m_off = schedule(&g, &t, &off).map_err(|e| e.to_string())?.makespan;
            ensure(m_on == oracle, || format!("seed {seed} {direction:?}: exact {m_on}, brute force {oracle}"))?;
            ensure(m_on <= m_off, || format!("seed {seed}: on {m_on} > off {m_off}"))?;
            if m_on < m_off {
                strict += 1;
            }
        }
    }
    Ok(format!("200 circuits, ASAP and ALAP; commutation strictly better in {strict} runs"))
}

// 4

fn steane_counts() -> Result<String, String> {
    let s = characterize(&steane7());
    ensure(s.n_gates == 21 && s.n_cnots == 12 && s.rtsg == 0.0, || {
        format!("gates {}, cnots {}, Rtsg {}", s.n_gates, s.n_cnots, s.rtsg)
    })?;
    Ok(format!(
        "gates 21, cnots 12, Rtsg 0; Rcd computed {:.2}% ({} of {} edges)",
        100.0 * s.rcd,
        s.n_name_edges,
        s.n_edges
    ))
}

fn steane_rcg() -> Result<String, String> {
    let rcg = 100.0 * characterize(&steane7()).rcg;
    let msg = format!("Rcg {rcg:.2}%, listed 52.38% (12/21 = 57.14%, 52.38% = 11/21)");
    if (rcg - 52.38).abs() <= 0.01 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

// 5

fn commutation_gain() -> Result<String, String> {
    let cfg = RunConfig::new(ArchKind::Checkerboard, 3, 3, 3);
    let circuits = vec![("7-enc".to_string(), steane7())];
    let t = compare_experiment(CompareMode::Commutation, &circuits, &cfg).map_err(|e| e.to_string())?;
    let gain = t.column("gain_pct").unwrap()[0];
    let off = t.column("latency_off").unwrap()[0];
    let on = t.column("latency_on").unwrap()[0];
    ensure(gain >= 20.0, || format!("gain {gain:.2}%"))?;
    Ok(format!("ALAP d=3: {off} -> {on} cycles, gain {gain:.2}%"))
}

// 6, 7

const SIZES: [(u32, u32); 6] = [(3, 2), (3, 3), (4, 3), (4, 4), (5, 5), (6, 6)];

fn suite() -> Vec<(u32, u32, Circuit)> {
    (0..100u64)
        .map(|i| {
            let (r, c) = SIZES[i as usize % SIZES.len()];
            let cells = (r * c) as usize;
            let n = if i % 3 == 0 { cells } else { cells - 1 - (i as usize % (cells / 2)) };
            let gates = 20 + (i as usize * 7) % 41;
            (r, c, random_circuit(&RandomCircuitConfig::new(n.max(2), gates), 1000 + i))
        })
        .collect()
}

fn router_soundness(suite: &[(u32, u32, Circuit)]) -> Result<String, String> {
    let mut swaps = 0;
    for arch in [ArchKind::Checkerboard, ArchKind::TileBased] {
        let t = TimingModel::new(3, arch).unwrap();
        for (k, (r, c, circ)) in suite.iter().enumerate() {
            let a = Architecture::new(arch, *r, *c).unwrap();
            let s = schedule(&build_qodg(circ), &t, &SchedulePolicy { solver: Solver::Auto, ..Default::default() })
                .map_err(|e| e.to_string())?;
            let input = lsmap_core::schedule::to_parallel_circuit(circ, &s);
            let p = if k % 2 == 0 { place_smart(&input, &a) } else { place_naive(&input, &a) }
                .map_err(|e| e.to_string())?;
            let rc = route(&input, &a, &p, &t, 2 + k % 12).map_err(|e| format!("{arch} #{k}: {e}"))?;
            validate_routed(&rc, &input, &a, &p, &t).map_err(|v| format!("{arch} #{k}: {v:?}"))?;
            swaps += rc.n_swaps;
        }
    }
    Ok(format!("200 routed circuits valid, {swaps} swaps inserted"))
}

fn arch_comparison(suite: &[(u32, u32, Circuit)]) -> Result<String, String> {
    let mut sums = BTreeMap::new();
    let mut wins = 0;
    for (k, (r, c, circ)) in suite.iter().enumerate() {
        let mut per = Vec::new();
        for arch in [ArchKind::Checkerboard, ArchKind::TileBased] {
            let cfg = RunConfig::new(arch, *r, *c, 3);
            let rep = run_pipeline(&format!("r{k}"), circ, &cfg).map_err(|e| e.to_string())?.report;
            let e = sums.entry(arch).or_insert((0.0, 0.0));
            e.0 += rep.operation_overhead;
            e.1 += rep.latency_overhead;
            per.push(rep.latency_overhead);
        }
        if per[1] < per[0] {
            wins += 1;
        }
    }
    let n = suite.len() as f64;
    let (oc, lc) = sums[&ArchKind::Checkerboard];
    let (ot, lt) = sums[&ArchKind::TileBased];
    let (oc, lc, ot, lt) = (oc / n, lc / n, ot / n, lt / n);
    let msg = format!(
        "mean op overhead c {:.1}% t {:.1}%, mean latency overhead c {:.1}% t {:.1}%; t lower latency overhead on {wins}/100",
        100.0 * oc,
        100.0 * ot,
        100.0 * lc,
        100.0 * lt
    );
    ensure(ot < oc && lt < lc, || msg.clone())?;
    Ok(msg)
}

// 8

fn surgery() -> Result<String, String> {
    for v in [CnotVariant::AncillaZero, CnotVariant::AncillaPlus] {
        let r = verify_cnot_construction(v).map_err(|e| e.to_string())?;
        ensure(r.branches == 8 && r.flows.len() == 4, || {
            format!("{v:?}: {} branches, {} flows", r.branches, r.flows.len())
        })?;
    }
    for k in [MoveKind::Horizontal, MoveKind::Vertical, MoveKind::Corner] {
        verify_move(k).map_err(|e| e.to_string())?;
    }
    verify_tswap().map_err(|e| e.to_string())?;
    verify_tcnot().map_err(|e| e.to_string())?;
    let mut n_mut = 0;
    for c in all_constructions() {
        verify(&c).map_err(|e| e.to_string())?;
        for (what, m) in mutants(&c) {
            ensure(verify(&m).is_err(), || format!("{}: mutant `{what}` passes", c.name))?;
            n_mut += 1;
        }
    }
    Ok(format!("all constructions verified; {n_mut} mutants caught"))
}

// 9

const ESM_LISTING: &str = "\
{ prepz A2 | prepz A7 | prepz A5}
{ h A2 | h A7 | h A5 | prepz A1 | prepz A3 | prepz A6}
{ cnot A2, D5 | cnot A7, D9 | cnot A5, D7 | cnot D2, A1 | cnot D6, A3 | cnot D8, A6 | prepz A8 | prepz A4}
{ cnot A2, D2 | cnot A7, D6 | cnot A5, D4 | cnot D9, A8 | cnot D3, A3 | cnot D5, A6 | h A4}
{ cnot A2, D4 | cnot A7, D8 | cnot A4, D6 | cnot D1, A1 | cnot D5, A3 | cnot D7, A6 | h A5}
{ cnot A2, D1 | cnot A7, D5 | cnot A4, D3 | cnot D8, A8 | cnot D2, A3 | cnot D4, A6 | measure A1 | measure A5}
{ h A2 | h A4 | h A7 | measure A3 | measure A6 | measure A8}
{ measure A2 | measure A4 | measure A7}";

fn ft_expansion() -> Result<String, String> {
    let round = esm_round(3).map_err(|e| e.to_string())?;
    ensure(render_round(&round) == ESM_LISTING, || "ESM round differs from the listing".into())?;
    let mut checked = 0;
    for d in [3u32, 5, 7] {
        for arch in [ArchKind::Checkerboard, ArchKind::TileBased] {
            let t = TimingModel::new(d, arch).unwrap();
            for kind in GateKind::ALL {
                if kind == GateKind::Wait {
                    ensure(library_entry(kind, &t).is_err(), || "wait has an entry".into())?;
                    continue;
                }
                let n = kind.arity();
                let c = Circuit::from_serial(n, &[(kind, &(0..n as u32).collect::<Vec<_>>())]);
                let a = Architecture::new(arch, 1, 2).unwrap();
                let p = Placement { assign: (0..n).collect() };
                let rc = route(&c, &a, &p, &t, 2).map_err(|e| e.to_string())?;
                let spans = expand_cycles(&rc, &t).map_err(|e| e.to_string())?;
                let want = t.duration(kind);
                ensure(spans.len() == 1 && spans[0].cycles == want, || {
                    format!("{kind:?} d={d}: {spans:?}, want {want}")
                })?;
                if d == 3 {
                    let phys = expand(&rc, &a, &t).map_err(|e| e.to_string())?;
                    let cycles = phys.notes.values().flatten().filter(|s| s.starts_with("cycle ")).count();
                    ensure(phys.cycles == want && cycles as u64 == want, || {
                        format!("{kind:?} physical: {} cycles, {cycles} cycle marks, want {want}", phys.cycles)
                    })?;
                }
                checked += 1;
            }
        }
    }
    Ok(format!("ESM listing exact; {checked} (op, d, arch) cycle counts match"))
}

// 10

fn qap_oracle() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let grids = [(1, 2), (2, 2), (2, 3), (3, 2), (3, 3), (1, 6), (2, 4)];
    for k in 0..100 {
        let (r, c) = grids[k % grids.len()];
        let a = Architecture::new(ArchKind::TileBased, r, c).unwrap();
        let m = a.n_locations();
        let n = rng.gen_range(1..=m.min(6));
        let mut w = InteractionMatrix::zeros(n);
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(0.6) {
                    w.add(i, j, rng.gen_range(1..6));
                }
            }
        }
        let d = DistanceMatrix::manhattan(&a);
        let exact = qap_cost(&solve_qap(&w, &d), &w, &d);
        let brute = brute_qap(&w, &d, n, m);
        ensure(exact == brute, || format!("instance {k}: solver {exact}, enumeration {brute}"))?;
    }
    for seed in 0..50u64 {
        let (r, c) = SIZES[seed as usize % SIZES.len()];
        let a = Architecture::new(ArchKind::Checkerboard, r, c).unwrap();
        let circ = random_circuit(&RandomCircuitConfig::new((r * c) as usize, 30), seed);
        let w = interaction_matrix(&circ);
        let d = DistanceMatrix::manhattan(&a);
        let smart = qap_cost(&place_smart(&circ, &a).unwrap(), &w, &d);
        let naive = qap_cost(&place_naive(&circ, &a).unwrap(), &w, &d);
        ensure(smart <= naive, || format!("seed {seed}: smart {smart} > naive {naive}"))?;
    }
    Ok("100 instances match enumeration; smart <= naive on 50 circuits".into())
}

fn brute_qap(w: &InteractionMatrix, d: &DistanceMatrix, n: usize, m: usize) -> u64 {
    fn go(w: &InteractionMatrix, d: &DistanceMatrix, n: usize, m: usize, cur: &mut Vec<usize>, best: &mut u64) {
        if cur.len() == n {
            let mut cost = 0u64;
            for i in 0..n {
                for j in i + 1..n {
                    cost += w.get(i, j) as u64 * d.get(cur[i], cur[j]) as u64;
                }
            }
            *best = (*best).min(cost);
            return;
        }
        for l in 0..m {
            if !cur.contains(&l) {
                cur.push(l);
                go(w, d, n, m, cur, best);
                cur.pop();
            }
        }
    }
    let mut best = u64::MAX;
    go(w, d, n, m, &mut Vec::new(), &mut best);
    best
}

// 11

fn determinism() -> Result<String, String> {
    let mut runs = Vec::new();
    for _ in 0..2 {
        let mut out = Vec::new();
        for emit in [EmitLevel::Logical, EmitLevel::Physical] {
            for arch in [ArchKind::Checkerboard, ArchKind::TileBased] {
                let mut cfg = RunConfig::new(arch, 3, 3, 3);
                cfg.emit = emit;
                let o = run_pipeline("7-enc", &steane7(), &cfg).map_err(|e| e.to_string())?;
                out.push((o.output_qasm(), o.report.to_json()));
            }
        }
        let circ = random_circuit(&RandomCircuitConfig::new(16, 60), 99);
        let o = run_pipeline("random", &circ, &RunConfig::new(ArchKind::TileBased, 4, 4, 5))
            .map_err(|e| e.to_string())?;
        out.push((o.output_qasm(), o.report.to_json()));
        runs.push(out);
    }
    ensure(runs[0] == runs[1], || "outputs differ between runs".into())?;
    Ok(format!("{} pipeline runs byte-identical", runs[0].len()))
}

fn report(r: &Outcome) -> bool {
    let known = KNOWN_RED.contains(&r.id);
    let tag = match (r.ok, known) {
        (true, _) => "PASS",
        (false, true) => "FAIL (known)",
        (false, false) => "FAIL",
    };
    let budget = r.budget.map(|b| format!(" / {}s", b.as_secs())).unwrap_or_default();
    println!(
        "{tag:<12} [{:>2}] {} ({:.2}s{budget}): {}",
        r.id,
        r.title,
        r.elapsed.as_secs_f64(),
        r.detail
    );
    r.ok == known
}

type Check<'a> = (&'static str, &'static str, Option<u64>, Box<dyn Fn() -> Result<String, String> + 'a>);

fn main() {
    let suite = suite();
    let checks: Vec<Check> = vec![
        ("1", "timing table", Some(1), Box::new(timing_table)),
        ("2", "qubit efficiency", Some(1), Box::new(qubit_efficiency)),
        ("3", "scheduler optimality oracle", Some(30), Box::new(scheduler_oracle)),
        ("4a", "Steane encoder counts", None, Box::new(steane_counts)),
        ("4b", "Steane encoder Rcg", None, Box::new(steane_rcg)),
        ("5", "commutation gain", Some(5), Box::new(commutation_gain)),
        ("6", "router soundness", Some(60), Box::new(|| router_soundness(&suite))),
        ("7", "architecture comparison", None, Box::new(|| arch_comparison(&suite))),
        ("8", "surgery verification", Some(10), Box::new(surgery)),
        ("9", "FT expansion", Some(1), Box::new(ft_expansion)),
        ("10", "QAP placement", Some(30), Box::new(qap_oracle)),
        ("11", "determinism", None, Box::new(determinism)),
    ];
    // Comma-separated ids to run a subset.
    let only = std::env::var("ACCEPTANCE_ONLY").ok();
    let mut unexpected = Vec::new();
    for (id, title, budget, f) in checks {
        if only.as_deref().is_some_and(|o| !o.split(',').any(|x| x == id)) {
            continue;
        }
        let r = check(id, title, budget, f);
        if report(&r) {
            unexpected.push(r.id);
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected results: {unexpected:?}");
        std::process::exit(1);
    }
}
