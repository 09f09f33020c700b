//! Command-line front end: example catalog, sampling, exact and estimated
//! measures, characterization, figure data and the reproduction table.

pub mod args;
pub mod commands;
pub mod figures;
pub mod reproduce;

use thiserror::Error;

pub use args::{Cli, Command, Format};
pub use commands::run;
pub use figures::{emit_figure_data, FIGURES};
pub use reproduce::{run_reproduction, Reproduction};

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Invalid input: arguments, model files, data files.
pub const EXIT_VALIDATION: i32 = 2;
/// `reproduce` found a value outside its tolerance.
pub const EXIT_ACCEPTANCE: i32 = 3;
/// Reading or writing files failed.
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] depmark::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0} tolerance check(s) failed")]
    Acceptance(usize),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(depmark::Error::Io(e))
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use depmark::Error as E;
        match self {
            CliError::Core(E::Io(_)) => EXIT_IO,
            CliError::Core(E::Csv(e)) if e.is_io_error() => EXIT_IO,
            CliError::Core(E::Json(e)) if e.is_io() => EXIT_IO,
            CliError::Core(_) | CliError::Usage(_) => EXIT_VALIDATION,
            CliError::Acceptance(_) => EXIT_ACCEPTANCE,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `DEPMARK_THREADS`; `None` when unset or empty.
pub fn thread_limit(value: Option<&str>) -> CliResult<Option<usize>> {
    match value.map(str::trim) {
        None | Some("") => Ok(None),
        Some(s) => match s.parse::<usize>() {
            Ok(k) if k > 0 => Ok(Some(k)),
            _ => Err(CliError::Usage(format!(
                "DEPMARK_THREADS must be a positive integer, got '{s}'"
            ))),
        },
    }
}
