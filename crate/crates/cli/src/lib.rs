//! Scenario runner for the vecdual toolkit: loads a scenario, runs its task
//! and writes a JSON report plus, where it applies, a labelled front CSV.

pub mod csv_out;
pub mod scenario;
pub mod suites;
pub mod tasks;

use std::fmt;
use std::path::{Path, PathBuf};

pub use csv_out::{emit_front_csv, front_csv};
pub use scenario::Scenario;
pub use tasks::{Report, RunOutcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTION: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Json { path: String, line: usize, column: usize, message: String },
    Io(String),
    Schema(String),
    Core(vecdual_core::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Json { path, line, column, message } => write!(f, "{path}:{line}:{column}: {message}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Schema(m) => write!(f, "schema error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<vecdual_core::Error> for CliError {
    fn from(e: vecdual_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_INPUT
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub out: PathBuf,
    pub seed: Option<u64>,
    pub probe_res: Option<usize>,
}

/// Load and run a scenario, writing its outputs under `opts.out`.
pub fn run(scenario: &Path, opts: &RunOptions) -> Result<RunOutcome, CliError> {
    let sc = Scenario::load(scenario)?;
    tasks::run_scenario(&sc, opts)
}

/// Load a scenario and build its instance without running the task.
pub fn check(scenario: &Path) -> Result<Scenario, CliError> {
    let sc = Scenario::load(scenario)?;
    tasks::prepare(&sc)?;
    Ok(sc)
}
