//! End-to-end mapping: schedule, place, route and optionally expand.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arch::{ArchError, ArchKind, Architecture};
use crate::circuit::{build_qodg, characterize, emit_qasm, Circuit, CircuitError, CircuitStats};
use crate::ft::{expand, FtError, PhysicalCircuit};
use crate::placement::{
    interaction_matrix, place_naive, place_smart, qap_cost, DistanceMatrix, Placement,
    PlacementError,
};
use crate::route::{route, RouteError, RoutedCircuit};
use crate::schedule::{schedule, to_parallel_circuit, Direction, Schedule, ScheduleError, SchedulePolicy, Solver};
use crate::timing::{TimingError, TimingModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PlacementMode {
    Smart,
    Naive,
}

impl FromStr for PlacementMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "smart" => Ok(PlacementMode::Smart),
            "naive" => Ok(PlacementMode::Naive),
            other => Err(format!("unknown placement mode `{other}`")),
        }
    }
}

impl fmt::Display for PlacementMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlacementMode::Smart => "smart",
            PlacementMode::Naive => "naive",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EmitLevel {
    Logical,
    Physical,
}

impl FromStr for EmitLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "logical" => Ok(EmitLevel::Logical),
            "physical" => Ok(EmitLevel::Physical),
            other => Err(format!("unknown emit level `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub arch: ArchKind,
    pub rows: u32,
    pub cols: u32,
    pub d: u32,
    pub direction: Direction,
    pub commutation: bool,
    pub solver: Solver,
    pub placement: PlacementMode,
    pub window: usize,
    pub emit: EmitLevel,
    /// Seed for generated circuits; the pipeline itself draws no randomness.
    pub seed: u64,
}

impl RunConfig {
    pub fn new(arch: ArchKind, rows: u32, cols: u32, d: u32) -> Self {
        RunConfig {
            arch,
            rows,
            cols,
            d,
            direction: Direction::Alap,
            commutation: true,
            solver: Solver::Auto,
            placement: PlacementMode::Smart,
            window: 10,
            emit: EmitLevel::Logical,
            seed: 0,
        }
    }

    pub fn policy(&self) -> SchedulePolicy {
        SchedulePolicy {
            direction: self.direction,
            commutation: self.commutation,
            solver: self.solver,
        }
    }

    pub fn timing(&self) -> Result<TimingModel, TimingError> {
        TimingModel::new(self.d, self.arch)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PipelineError {
    #[error("config: {0}")]
    Config(String),
    #[error("input: {0}")]
    Input(#[from] CircuitError),
    #[error("timing: {0}")]
    Timing(#[from] TimingError),
    #[error("architecture: {0}")]
    Arch(#[from] ArchError),
    #[error("schedule: {0}")]
    Schedule(#[from] ScheduleError),
    #[error("placement: {0}")]
    Placement(#[from] PlacementError),
    #[error("route: {0}")]
    Route(#[from] RouteError),
    #[error("expand: {0}")]
    Expand(#[from] FtError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub benchmark: String,
    pub config: RunConfig,
    /// Scheduled latency before routing.
    pub l_s: u64,
    /// Latency after routing.
    pub l_r: u64,
    pub latency_overhead: f64,
    pub n_swaps: usize,
    pub operation_overhead: f64,
    pub e_q: f64,
    pub placement_cost: u64,
    pub stats: CircuitStats,
    /// Wall-clock milliseconds; left empty by [`run_pipeline`] so reports stay reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

pub fn latency_overhead(l_s: u64, l_r: u64) -> f64 {
    if l_s == 0 {
        0.0
    } else {
        (l_r as f64 - l_s as f64) / l_s as f64
    }
}

pub fn operation_overhead(n_swaps: usize, n_gates: usize) -> f64 {
    if n_gates == 0 {
        0.0
    } else {
        n_swaps as f64 / n_gates as f64
    }
}

impl MetricsReport {
    /// Overheads recomputed from the raw fields agree with the stored ones.
    pub fn is_consistent(&self) -> bool {
        latency_overhead(self.l_s, self.l_r) == self.latency_overhead
            && operation_overhead(self.n_swaps, self.stats.n_gates) == self.operation_overhead
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let c = &self.config;
        let rows: Vec<(&str, String)> = vec![
            ("benchmark", self.benchmark.clone()),
            ("architecture", format!("{} {}x{}", c.arch, c.rows, c.cols)),
            ("distance", c.d.to_string()),
            ("schedule", format!("{:?} commutation={}", c.direction, c.commutation)),
            ("placement", c.placement.to_string()),
            ("window", c.window.to_string()),
            ("gates", self.stats.n_gates.to_string()),
            ("cnots", self.stats.n_cnots.to_string()),
            ("L_S", self.l_s.to_string()),
            ("L_R", self.l_r.to_string()),
            ("swaps", self.n_swaps.to_string()),
            ("latency overhead", format!("{:.2}%", 100.0 * self.latency_overhead)),
            ("operation overhead", format!("{:.2}%", 100.0 * self.operation_overhead)),
            ("E_q", format!("{:.4}", self.e_q)),
            ("placement cost", self.placement_cost.to_string()),
        ];
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in rows {
            let _ = writeln!(out, "{k:<width$}  {v}");
        }
        if let Some(ms) = self.runtime_ms {
            let _ = writeln!(out, "{:<width$}  {ms} ms", "runtime");
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub schedule: Schedule,
    /// The input re-bundled by the schedule, as handed to the router.
    pub scheduled: Circuit,
    pub placement: Placement,
    pub routed: RoutedCircuit,
    pub physical: Option<PhysicalCircuit>,
    pub report: MetricsReport,
}

impl PipelineOutput {
    /// The circuit file at the configured emit level.
    pub fn output_qasm(&self) -> String {
        match &self.physical {
            Some(p) => p.to_qasm(),
            None => emit_qasm(&self.routed.circuit),
        }
    }
}

pub fn run_pipeline(name: &str, c: &Circuit, cfg: &RunConfig) -> Result<PipelineOutput, PipelineError> {
    c.validate()?;
    let tm = cfg.timing()?;
    let arch = Architecture::new(cfg.arch, cfg.rows, cfg.cols)?;
    if c.n_qubits() > arch.n_locations() {
        return Err(PipelineError::Config(format!(
            "{} qubits do not fit a {}x{} plane",
            c.n_qubits(),
            cfg.rows,
            cfg.cols
        )));
    }
    if cfg.emit == EmitLevel::Physical && cfg.d != 3 {
        return Err(PipelineError::Config(format!(
            "physical emission needs d = 3, got {}",
            cfg.d
        )));
    }

    let g = build_qodg(c);
    let sched = schedule(&g, &tm, &cfg.policy())?;
    log::debug!("{name}: scheduled latency {}", sched.makespan);
    let scheduled = to_parallel_circuit(c, &sched);

    let placement = match cfg.placement {
        PlacementMode::Smart => place_smart(&scheduled, &arch)?,
        PlacementMode::Naive => place_naive(&scheduled, &arch)?,
    };
    let placement_cost = qap_cost(
        &placement,
        &interaction_matrix(&scheduled),
        &DistanceMatrix::manhattan(&arch),
    );
    log::debug!("{name}: placement cost {placement_cost}");

    let routed = route(&scheduled, &arch, &placement, &tm, cfg.window)?;
    log::debug!("{name}: {} swaps, routed latency {}", routed.n_swaps, routed.latency);

    let physical = match cfg.emit {
        EmitLevel::Logical => None,
        EmitLevel::Physical => Some(expand(&routed, &arch, &tm)?),
    };

    let stats = characterize(c);
    let report = MetricsReport {
        benchmark: name.to_string(),
        config: cfg.clone(),
        l_s: sched.makespan,
        l_r: routed.latency,
        latency_overhead: latency_overhead(sched.makespan, routed.latency),
        n_swaps: routed.n_swaps,
        operation_overhead: operation_overhead(routed.n_swaps, stats.n_gates),
        e_q: arch.qubit_efficiency(),
        placement_cost,
        stats,
        runtime_ms: None,
    };
    Ok(PipelineOutput {
        schedule: sched,
        scheduled,
        placement,
        routed,
        physical,
        report,
    })
}
