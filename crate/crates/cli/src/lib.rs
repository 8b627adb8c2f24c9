//! Command-line driver for `circfrac`.
//!
//! [`run`] parses arguments, dispatches to a subcommand and maps the
//! outcome to an exit code: 0 success, 1 computation failure, 2 usage or
//! validation error.

pub mod args;
pub mod commands;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub use args::{Cli, Command};
pub use commands::{validate_report, ValidateReport, ValidateRow};

/// Environment variable holding the worker-thread count.
pub const THREADS_ENV: &str = "CIRCFRAC_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_COMPUTE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::Compute(_) => EXIT_COMPUTE,
        }
    }
}

/// Runs one invocation. `argv` includes the program name.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Debye(a) => commands::cmd_debye(a, stdout),
        Command::Sample(a) => commands::cmd_sample(a, stdout),
        Command::Gyration(a) => commands::cmd_gyration(a, stdout),
        Command::Validate(a) => match commands::cmd_validate(a, stdout) {
            Ok(true) => Ok(()),
            Ok(false) => Err(CliError::Compute(
                "validation failed: at least one row exceeds the z or refinement bound".into(),
            )),
            Err(e) => Err(e),
        },
    };
    let _ = stdout.flush();
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Parses a thread-count override; zero or garbage means "unset".
pub fn parse_threads(value: Option<&str>) -> Option<usize> {
    value?.trim().parse::<usize>().ok().filter(|&n| n > 0)
}
