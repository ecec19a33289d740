//! Command-line front end: one subcommand per check and a batch runner.
//!
//! Structured jobs print one JSON object per line; single checks print a
//! `key=value` line. The exit code is 0 when every check passes, 1 when one
//! fails and 2 on a usage error.

mod args;
mod batch;
mod checks;
mod stab;
mod weights;

pub use args::{Cli, Command, OmegaArgs, StabArgs, WeightsOp};
pub use batch::{parse_manifest, run_batch, write_manifest, RunManifest, MANIFEST_VERSION, THREADS_ENV};

use clap::Parser;
use std::ffi::OsString;
use std::fmt;
use std::io::Write;

/// Output of one job and whether all of its checks passed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub text: String,
    pub pass: bool,
}

impl Report {
    fn new(text: String, pass: bool) -> Self {
        Report { text, pass }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad arguments or input files.
    Usage(String),
    /// The computation itself broke down.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

pub(crate) fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

pub(crate) fn read_input(path: &std::path::Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Runs a parsed command; `seed` is the resolved global seed.
pub fn execute(cmd: &Command, seed: u64) -> Result<Report, CliError> {
    match cmd {
        Command::SplitCheck { p, nvars, poly } => checks::split_check(*p, *nvars, poly),
        Command::FlagVerify { r, p, orders, delta_chain } => checks::flag_verify(*r, *p, *orders, *delta_chain),
        Command::TowerVerify { r, p, heavy, sigma_y } => checks::tower_verify(*r, *p, *heavy, sigma_y.as_deref()),
        Command::Weights { op } => weights::run(op),
        Command::Stab(a) => stab::run(a, seed),
        Command::Repdim { r, m, p } => checks::repdim(*r, *m, *p),
        Command::DeltaChain { r, p } => checks::delta_chain(*r, *p),
        Command::Batch { manifest } => {
            let m = parse_manifest(&read_input(manifest)?)?;
            run_batch(&m, seed)
        }
    }
}

/// Parses `argv` (program name first), runs the job, prints its report and
/// returns the exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli.command, cli.seed.unwrap_or(0)) {
        Ok(rep) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(rep.text.as_bytes());
            let _ = out.flush();
            if rep.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
