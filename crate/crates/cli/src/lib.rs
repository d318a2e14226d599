//! Command implementations behind the `gitstab` binary.
//!
//! Every command returns a serializable report; [`CliError`] carries the exit
//! code (2 for bad input, 3 for an internal consistency failure).

pub mod analyze;
pub mod commands;
pub mod families;
pub mod report;
pub mod search;

use std::fmt;
use std::path::Path;

use gitstab_core::{parse_poly_file, Error, HomogeneousPoly};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Input,
    Internal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Input, message: message.into() }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::Internal, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Input => EXIT_INPUT,
            ErrorKind::Internal => EXIT_INTERNAL,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self.kind {
            ErrorKind::Input => "input error",
            ErrorKind::Internal => "internal consistency failure",
        };
        write!(f, "{label}: {}", self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => CliError::internal(e.to_string()),
            _ => CliError::input(e.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}

/// Reads a polynomial file; `n = None` infers the dimension from the variables used.
pub fn read_poly(path: &Path, n: Option<usize>) -> CliResult<HomogeneousPoly> {
    let text = read_text(path)?;
    parse_poly_file(&text, n).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// Rejects forms outside the analysis domain `n >= 2`, `d >= 3`.
pub fn require_hypersurface(f: &HomogeneousPoly) -> CliResult<()> {
    if f.n() < 2 {
        return Err(CliError::input(format!("need n >= 2, got n = {}", f.n())));
    }
    if f.d() < 3 {
        return Err(CliError::input(format!("need degree >= 3, got d = {}", f.d())));
    }
    Ok(())
}
