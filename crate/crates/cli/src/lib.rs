//! Batch front end for `parafermi-jc-core`: dimension tables, spectra,
//! omega scans and invariant checks, written as CSV or JSON.

pub mod commands;
pub mod config;
pub mod output;
pub mod verify;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

use config::{Cli, Command, RunConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARAMETER: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

/// Env var capping the number of scan threads.
pub const THREADS_VAR: &str = "PARAFERMI_JC_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Parameter(String),
    Numerical(String),
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parameter(_) => EXIT_PARAMETER,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Verification(_) => EXIT_VERIFICATION,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Parameter(m) => write!(f, "parameter error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical error: {m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<parafermi_jc_core::Error> for CliError {
    fn from(e: parafermi_jc_core::Error) -> Self {
        if e.is_parameter_error() {
            CliError::Parameter(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let threads = match std::env::var(THREADS_VAR) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t > 0)
            .ok_or_else(|| CliError::Parameter(format!("{THREADS_VAR} must be a positive integer, got `{v}`")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Numerical(format!("cannot start thread pool: {e}")))
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Dims(args) => {
            let cfg = RunConfig::from_args(&args)?;
            output::emit(&cfg, &commands::dims(&cfg)?.render(&cfg))
        }
        Command::Spectrum(args) => {
            let cfg = RunConfig::from_args(&args)?;
            let (table, ok) = commands::spectrum(&cfg)?;
            output::emit(&cfg, &table.render(&cfg))?;
            if ok {
                Ok(())
            } else {
                Err(CliError::Verification(format!(
                    "closed form and numerics differ by more than {}",
                    commands::SPECTRUM_TOLERANCE
                )))
            }
        }
        Command::ThermoScan(args) => {
            let cfg = RunConfig::from_args(&args)?;
            let table = thread_pool()?.install(|| commands::thermo_scan(&cfg))?;
            output::emit(&cfg, &table.render(&cfg))
        }
        Command::SemiclassicalCompare(args) => {
            let cfg = RunConfig::from_args(&args)?;
            let table = thread_pool()?.install(|| commands::semiclassical_compare(&cfg))?;
            output::emit(&cfg, &table.render(&cfg))
        }
        Command::Verify(args) => {
            let summary = verify::run(args.scope);
            let text = serde_json::to_string_pretty(&summary)
                .map_err(|e| CliError::Numerical(format!("cannot serialize summary: {e}")))?;
            output::write_stdout(&format!("{text}\n"))?;
            if summary.ok() {
                Ok(())
            } else {
                Err(CliError::Verification(format!("{} check(s) failed", summary.failed)))
            }
        }
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_PARAMETER,
            };
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
