use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lsmap_core::arch::ArchKind;
use lsmap_core::benchmarks;
use lsmap_core::circuit::{characterize, parse_qasm, Circuit};
use lsmap_core::experiment::{compare_experiment, CompareMode, ComparisonTable};
use lsmap_core::generate::{random_circuit, RandomCircuitConfig};
use lsmap_core::pipeline::{run_pipeline, EmitLevel, PipelineError, PlacementMode, RunConfig};
use lsmap_core::schedule::{Direction, Solver};
use lsmap_core::surgery::{all_constructions, mutants, verify};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        source: lsmap_core::circuit::ParseError,
    },
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error("unknown benchmark `{0}`")]
    UnknownBenchmark(String),
    #[error("{0} construction(s) failed verification")]
    Verification(usize),
}

#[derive(Parser)]
#[command(name = "lsmap", version, about = "Map lattice-surgery circuits onto surface-code qubit planes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Schedule, place, route and optionally expand one circuit.
    Map(MapArgs),
    /// Check the lattice-surgery constructions over every outcome branch.
    Verify(VerifyArgs),
    /// Compare settings across a set of circuits.
    Compare(CompareArgs),
    /// Print circuit characteristics.
    Stats(StatsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ArchArg {
    C,
    T,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchedArg {
    Asap,
    Alap,
}

#[derive(Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Auto,
    Exact,
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlaceArg {
    Smart,
    Naive,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitArg {
    Logical,
    Physical,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Commutation,
    Arch,
    Placement,
}

#[derive(Args)]
struct Settings {
    #[arg(long, value_enum, default_value = "t")]
    arch: ArchArg,
    /// Grid rows; fitted to the circuit when omitted.
    #[arg(long)]
    rows: Option<u32>,
    #[arg(long)]
    cols: Option<u32>,
    /// Code distance.
    #[arg(short = 'd', long = "distance", default_value_t = 3)]
    d: u32,
    #[arg(long, value_enum, default_value = "alap")]
    sched: SchedArg,
    #[arg(long, value_enum, default_value = "on")]
    commute: OnOff,
    #[arg(long, value_enum, default_value = "auto")]
    solver: SolverArg,
    #[arg(long, value_enum, default_value = "smart")]
    place: PlaceArg,
    /// Router look-ahead window.
    #[arg(long, default_value_t = 10)]
    window: usize,
}

#[derive(Args)]
struct MapArgs {
    #[command(flatten)]
    settings: Settings,
    #[arg(long, value_enum, default_value = "logical")]
    emit: EmitArg,
    /// Input circuit, or `builtin:<name>` for a shipped benchmark.
    input: String,
    /// Output circuit; stdout when omitted.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
    /// JSON metrics report.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Record wall-clock time in the JSON report.
    #[arg(long)]
    runtime: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Also check that every single-step mutation is rejected.
    #[arg(long)]
    mutants: bool,
    /// Print the Heisenberg flows and Pauli frame of each construction.
    #[arg(short, long)]
    verbose: bool,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[command(flatten)]
    settings: Settings,
    /// Circuit files or `builtin:<name>`; the Steane encoder when empty.
    inputs: Vec<String>,
    /// Add this many seeded random circuits.
    #[arg(long, default_value_t = 0)]
    random: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write the table as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct StatsArgs {
    inputs: Vec<String>,
}

fn load(input: &str) -> Result<(String, Circuit), CliError> {
    if let Some(name) = input.strip_prefix("builtin:") {
        let c = benchmarks::by_name(name).ok_or_else(|| CliError::UnknownBenchmark(name.into()))?;
        return Ok((name.to_string(), c));
    }
    let path = Path::new(input);
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })?;
    let c = parse_qasm(&text).map_err(|source| CliError::Parse {
        path: path.into(),
        source,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| input.to_string());
    Ok((name, c))
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

/// Smallest near-square grid holding `n` locations.
fn fit(n: usize) -> (u32, u32) {
    let n = n.max(1) as u32;
    let rows = (1..=n).find(|r| r * r >= n).unwrap_or(n);
    let cols = n.div_ceil(rows);
    (rows, cols)
}

impl Settings {
    fn config(&self, n_qubits: usize) -> RunConfig {
        let (fr, fc) = fit(n_qubits);
        let (rows, cols) = match (self.rows, self.cols) {
            (Some(r), Some(c)) => (r, c),
            (Some(r), None) => (r, (n_qubits.max(1) as u32).div_ceil(r)),
            (None, Some(c)) => ((n_qubits.max(1) as u32).div_ceil(c), c),
            (None, None) => (fr, fc),
        };
        let arch = match self.arch {
            ArchArg::C => ArchKind::Checkerboard,
            ArchArg::T => ArchKind::TileBased,
        };
        let mut cfg = RunConfig::new(arch, rows, cols, self.d);
        cfg.direction = match self.sched {
            SchedArg::Asap => Direction::Asap,
            SchedArg::Alap => Direction::Alap,
        };
        cfg.commutation = matches!(self.commute, OnOff::On);
        cfg.solver = match self.solver {
            SolverArg::Auto => Solver::Auto,
            SolverArg::Exact => Solver::Exact,
            SolverArg::List => Solver::List,
        };
        cfg.placement = match self.place {
            PlaceArg::Smart => PlacementMode::Smart,
            PlaceArg::Naive => PlacementMode::Naive,
        };
        cfg.window = self.window;
        cfg
    }
}

fn map(args: MapArgs) -> Result<(), CliError> {
    let (name, c) = load(&args.input)?;
    let mut cfg = args.settings.config(c.n_qubits());
    cfg.emit = match args.emit {
        EmitArg::Logical => EmitLevel::Logical,
        EmitArg::Physical => EmitLevel::Physical,
    };
    let t0 = Instant::now();
    let out = run_pipeline(&name, &c, &cfg)?;
    let elapsed = t0.elapsed();
    log::info!("{name}: mapped in {elapsed:?}");
    let mut report = out.report.clone();
    if args.runtime {
        report.runtime_ms = Some(elapsed.as_millis() as u64);
    }
    match &args.output {
        Some(p) => write(p, &out.output_qasm())?,
        None => print!("{}", out.output_qasm()),
    }
    if let Some(p) = &args.report {
        write(p, &(report.to_json() + "\n"))?;
    }
    eprint!("{}", report.to_text());
    Ok(())
}

fn verify_cmd(args: VerifyArgs) -> Result<(), CliError> {
    let mut failed = 0;
    for c in all_constructions() {
        match verify(&c) {
            Ok(v) => {
                println!("ok    {:<28} {} patches, {} branches", c.name, v.n_patches, v.branches);
                if args.verbose {
                    for f in &v.flows {
                        println!("        {} -> {}", f.input, f.image.to_string_n(v.n_patches));
                    }
                    for t in &v.frame {
                        println!("        frame {} on {} if {}", t.letter, c.labels[t.patch], t.condition);
                    }
                }
            }
            Err(e) => {
                failed += 1;
                println!("FAIL  {:<28} {e}", c.name);
            }
        }
        if args.mutants {
            let ms = mutants(&c);
            let survivors: Vec<String> = ms
                .iter()
                .filter(|(_, m)| verify(m).is_ok())
                .map(|(what, _)| what.clone())
                .collect();
            if survivors.is_empty() {
                println!("        {} mutants rejected", ms.len());
            } else {
                failed += 1;
                for s in survivors {
                    println!("        mutant accepted: {s}");
                }
            }
        }
    }
    if failed > 0 {
        return Err(CliError::Verification(failed));
    }
    Ok(())
}

fn compare(args: CompareArgs) -> Result<(), CliError> {
    let mut circuits = Vec::new();
    for input in &args.inputs {
        circuits.push(load(input)?);
    }
    for k in 0..args.random {
        let seed = args.seed.wrapping_add(k as u64);
        let n = 4 + (seed % 13) as usize;
        circuits.push((format!("random-{seed}"), random_circuit(&RandomCircuitConfig::new(n, 20 + 2 * n), seed)));
    }
    if circuits.is_empty() {
        circuits.push(("7-enc".to_string(), benchmarks::steane7()));
    }
    let mode = match args.mode {
        ModeArg::Commutation => CompareMode::Commutation,
        ModeArg::Arch => CompareMode::Arch,
        ModeArg::Placement => CompareMode::Placement,
    };
    let mut table: Option<ComparisonTable> = None;
    for entry in circuits {
        let cfg = args.settings.config(entry.1.n_qubits());
        let t = compare_experiment(mode, std::slice::from_ref(&entry), &cfg)?;
        match &mut table {
            Some(all) => all.rows.extend(t.rows),
            None => table = Some(t),
        }
    }
    let table = table.expect("at least one circuit");
    print!("{}", table.to_text());
    if let Some(p) = &args.csv {
        write(p, &table.to_csv())?;
    }
    Ok(())
}

fn stats(args: StatsArgs) -> Result<(), CliError> {
    let inputs = if args.inputs.is_empty() {
        vec!["builtin:7-enc".to_string()]
    } else {
        args.inputs
    };
    println!(
        "{:<16} {:>6} {:>7} {:>7} {:>8} {:>8} {:>8}",
        "benchmark", "qubits", "gates", "cnots", "Rcg%", "Rcd%", "Rtsg%"
    );
    for input in inputs {
        let (name, c) = load(&input)?;
        let s = characterize(&c);
        println!(
            "{:<16} {:>6} {:>7} {:>7} {:>8.2} {:>8.2} {:>8.2}",
            name,
            s.n_qubits,
            s.n_gates,
            s.n_cnots,
            100.0 * s.rcg,
            100.0 * s.rcd,
            100.0 * s.rtsg
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("LSMAP_LOG", "warn")).init();
    let cli = Cli::parse();
    let r = match cli.command {
        Command::Map(a) => map(a),
        Command::Verify(a) => verify_cmd(a),
        Command::Compare(a) => compare(a),
        Command::Stats(a) => stats(a),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lsmap: {e}");
            ExitCode::FAILURE
        }
    }
}
