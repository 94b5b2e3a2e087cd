//! Mapping of lattice-surgery circuits onto planar surface-code qubit planes.
//!
//! The pipeline parses a logical circuit, schedules it against surface-code
//! cycle timings, places qubits on a checkerboard or tile-based plane, routes
//! non-adjacent CNOTs by SWAP insertion and optionally expands the result into
//! physical error-syndrome-measurement cycles. A small stabilizer engine checks
//! the lattice-surgery constructions the architectures rely on.

pub mod arch;
pub mod benchmarks;
pub mod circuit;
pub mod experiment;
pub mod ft;
pub mod generate;
pub mod pipeline;
pub mod placement;
pub mod route;
pub mod schedule;
pub mod surgery;
pub mod timing;

pub use arch::{ArchKind, Architecture, Location, PrimitiveOp, Resource};
pub use circuit::{
    build_qodg, characterize, emit_qasm, parse_qasm, Circuit, CircuitStats, GateKind, InstrId,
    Instruction, Qodg, Qubit,
};
pub use placement::{place_naive, place_smart, Placement};
pub use route::{route, validate_routed, RoutedCircuit};
pub use pipeline::{run_pipeline, EmitLevel, MetricsReport, PlacementMode, RunConfig};
pub use experiment::{compare_experiment, CompareMode, ComparisonTable};
pub use schedule::{schedule, Direction, Schedule, SchedulePolicy, Solver};
pub use timing::TimingModel;
