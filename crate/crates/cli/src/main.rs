mod commands;
mod config;

use std::fmt;
use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command};

/// Failure classes, one per nonzero exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            Self::Usage(_) => 2,
            Self::Numerical(_) => 3,
            Self::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "usage error: {m}"),
            Self::Numerical(m) => write!(f, "numerical failure: {m}"),
            Self::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<appraisal_dynamics::Error> for CliError {
    fn from(e: appraisal_dynamics::Error) -> Self {
        use appraisal_dynamics::Error as E;
        match e {
            E::Io(_) | E::Csv(_) | E::Json(_) | E::Parse(_) => Self::Io(e.to_string()),
            E::NonFinite { .. } | E::ZeroEntry => Self::Numerical(e.to_string()),
            _ => Self::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let file = cli.config.as_deref();
    let result = match cli.command {
        Command::Simulate(a) => commands::simulate(a, file),
        Command::Mc(a) => commands::mc(a, file),
        Command::Perturb(a) => commands::perturb(a, file),
        Command::Ally(a) => commands::ally(a, file),
        Command::Sweep(a) => commands::sweep(a, file),
        Command::Classify(a) => commands::classify(a, file),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("appraisal: {e}");
            ExitCode::from(e.code())
        }
    }
}
