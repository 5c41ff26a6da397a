//! Experiment harness: seeded multi-run driver, scaling benchmark and
//! instance inspection. The command-line binary is a thin layer over this.

mod bench;
mod config;
mod inspect;
mod run;

pub use bench::{bench, bench_instance, fit_slope, BenchConfig, BenchReport, BenchRow, BENCH_CSV_HEADER};
pub use config::{RunConfig, ScenarioConfig, SolverConfig};
pub use inspect::{inspect, InspectReport};
pub use run::{
    effective_weights, generated_instance, instance_path, prepare_instance, run, run_seed, summary_path,
    trace_path, Aggregate, RunReport, SeedSummary, Spread,
};

use crate::error::Error;

/// Process exit status for an error: 1 configuration or input, 2 solver
/// failure, 3 I/O.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Io { .. } => 3,
        Error::Divergence { .. } | Error::IllConditioned { .. } | Error::NonFinite { .. } | Error::UndefinedMetric(_) => 2,
        Error::InvalidConfig(_)
        | Error::Parse(_)
        | Error::ShapeMismatch { .. }
        | Error::InvalidMatrix(_)
        | Error::NotDifferentiable(_) => 1,
    }
}
