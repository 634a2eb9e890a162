//! Command-line front end: argument parsing, command dispatch and output.

use std::ffi::OsString;

use clap::Parser;

pub mod args;
pub mod commands;
pub mod output;

use args::{Cli, Command};
use commands::Outcome;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Parses `argv` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Eval(a) => commands::eval(a),
        Command::Fourier(a) => commands::fourier(a),
        Command::Verify(a) => commands::verify(a),
        Command::Table(a) => commands::table(a),
    };
    match result {
        Ok(Outcome::Passed) => EXIT_OK,
        Ok(Outcome::Failed) => EXIT_VERIFICATION_FAILED,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}
