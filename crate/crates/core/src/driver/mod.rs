//! Running external provers on emitted problems.

mod run;
mod schedule;
mod spec;
mod used;

use thiserror::Error;

pub use run::{parse_szs, run_prover, RunResult, Szs, GRACE};
pub use schedule::{
    append_results, default_jobs, emit, file_stem, merge_results, read_results, run_batch,
    run_each, run_files, run_schedule, Attempt, Emitted, ScheduleOutcome,
};
pub use spec::{
    Dialect, ProofFormat, ProverSpec, Registry, Schedule, ScheduleDef, Slice, FILE_PLACEHOLDER,
    REGISTRY_ENV, TIMEOUT_PLACEHOLDER,
};
pub use used::{Extraction, UsedAxioms};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DriverError {
    #[error("cannot start `{0}`: {1}")]
    Spawn(String, String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("argument template of `{0}` must contain {{file}} exactly once (found {1})")]
    BadTemplate(String, usize),
    #[error("registry: {0}")]
    Registry(String),
    #[error("unknown prover `{0}`")]
    UnknownProver(String),
    #[error("unknown schedule `{0}`")]
    UnknownSchedule(String),
    #[error("schedule slices total {0}s, over the {1}s budget")]
    OverBudget(f64, f64),
}
