//! Command-line front end for the constant-term engine.

pub mod args;
pub mod commands;
pub mod expr;

use std::fmt;

pub use args::{Cli, Command};

/// Exit status classes: failures of an identity or a certificate exit 1,
/// bad input exits 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => f.write_str(m),
        }
    }
}

impl From<ct_forge_core::Error> for CliError {
    fn from(e: ct_forge_core::Error) -> Self {
        use ct_forge_core::Error as E;
        match e {
            E::CertificationFailure { .. } | E::ProofInvariant(_) | E::LemmaViolation { .. } => {
                CliError::Failure(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(format!("i/o error: {e}"))
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

/// Sizes the global worker pool from `CT_FORGE_THREADS` when set.
pub fn configure_threads() -> CliResult {
    let Ok(raw) = std::env::var("CT_FORGE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!("CT_FORGE_THREADS={raw} is not a positive integer"))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Failure(e.to_string()))
}

pub fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Verify(a) => commands::verify::run(&a),
        Command::Certify(a) => commands::certify::run(&a),
        Command::Ct(a) => commands::ct::run(&a),
        Command::Tournament(a) => commands::tournament::run(&a),
        Command::Identities(a) => commands::identities::run(&a),
        Command::Bench(a) => commands::bench::run(&a),
    }
}
