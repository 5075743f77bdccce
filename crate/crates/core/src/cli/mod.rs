//! Command-line front end: argument parsing, scenario dispatch and report
//! rendering. The binary in `main.rs` is a thin wrapper over [`main_with_args`].
//!
//! Exit codes: [`EXIT_OK`] on success (and on an equilibrium verdict in
//! `verify` mode), [`EXIT_FAILURE`] on runtime and I/O errors, [`EXIT_USAGE`]
//! on bad arguments or out-of-domain inputs, [`EXIT_NOT_EQUILIBRIUM`] and
//! [`EXIT_INCONCLUSIVE`] for the other `verify` verdicts.

mod args;
mod report;
mod run;

pub use args::{parse_args, Cli, Command, Mode, OutputFormat, ScenarioConfig};
pub use report::{
    emit_report, render, MethodEcho, MismatchComparison, PayoffEcho, ReportRecord, ResultRow,
    CSV_HEADER, TOOL_NAME,
};
pub use run::run_scenario;

use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_EQUILIBRIUM: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) | Error::Domain(_) | Error::Config(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

/// Runs the tool on `argv` and returns the process exit code. Help and
/// version requests print to stdout; errors print to stderr.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = ScenarioConfig::from_cli(cli).and_then(|cfg| {
        let rec = run_scenario(&cfg)?;
        emit_report(&rec, cfg.format, cfg.out.as_deref())?;
        Ok(rec.exit_code())
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            error_exit_code(&e)
        }
    }
}
