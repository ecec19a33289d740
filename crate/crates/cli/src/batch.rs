use crate::{execute, usage, Cli, CliError, Command, Report};
use clap::Parser;
use rayon::prelude::*;
use std::fmt::Write;
use std::path::PathBuf;

pub const MANIFEST_VERSION: u32 = 1;

/// Caps the number of jobs running at once.
pub const THREADS_ENV: &str = "FROBSPLIT_THREADS";

/// A list of jobs, each a subcommand with its arguments.
///
/// ```text
/// version=1
/// output=report.txt
/// job split-check --p 5 --nvars 1 --poly "x1^2"
/// job flag-verify --r 2 --p 7
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunManifest {
    pub version: u32,
    /// Where the report is also written.
    pub output: Option<PathBuf>,
    pub jobs: Vec<Vec<String>>,
}

fn parse_job(words: &[String]) -> Result<Cli, String> {
    let argv = std::iter::once("frobsplit".to_string()).chain(words.iter().cloned());
    let cli = Cli::try_parse_from(argv).map_err(|e| e.to_string())?;
    if matches!(cli.command, Command::Batch { .. }) {
        return Err("batch jobs cannot nest".into());
    }
    Ok(cli)
}

pub fn parse_manifest(src: &str) -> Result<RunManifest, CliError> {
    let mut version = None;
    let mut output = None;
    let mut jobs = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: String| usage(format!("manifest line {}: {msg}", i + 1));
        if let Some(v) = line.strip_prefix("version=") {
            let v: u32 = v.trim().parse().map_err(|_| err(format!("bad version {v:?}")))?;
            if v != MANIFEST_VERSION {
                return Err(err(format!("unsupported version {v}")));
            }
            version = Some(v);
        } else if let Some(p) = line.strip_prefix("output=") {
            output = Some(PathBuf::from(p.trim()));
        } else if let Some(rest) = line.strip_prefix("job ") {
            let words = shlex::split(rest).ok_or_else(|| err("unbalanced quotes".into()))?;
            parse_job(&words).map_err(|e| err(e.trim_end().to_string()))?;
            jobs.push(words);
        } else {
            return Err(err(format!("expected version=, output= or job, got {line:?}")));
        }
    }
    Ok(RunManifest { version: version.unwrap_or(MANIFEST_VERSION), output, jobs })
}

/// Prints a manifest in the format read by [`parse_manifest`].
pub fn write_manifest(m: &RunManifest) -> String {
    let mut out = format!("version={}\n", m.version);
    if let Some(p) = &m.output {
        writeln!(out, "output={}", p.display()).unwrap();
    }
    for job in &m.jobs {
        let words: Vec<&str> = job.iter().map(String::as_str).collect();
        writeln!(out, "job {}", shlex::try_join(words).expect("job words contain no NUL")).unwrap();
    }
    out
}

fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        },
        Err(_) => Ok(None),
    }
}

/// Runs every job, concurrently, and concatenates their reports in job
/// order. Jobs without their own `--seed` use `seed`.
pub fn run_batch(m: &RunManifest, seed: u64) -> Result<Report, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap()? {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Failed(e.to_string()))?;
    let results: Vec<(String, Result<Report, CliError>)> = pool.install(|| {
        m.jobs
            .par_iter()
            .map(|words| match parse_job(words) {
                Ok(cli) => (cli.command.name().to_string(), execute(&cli.command, cli.seed.unwrap_or(seed))),
                Err(e) => (words.first().cloned().unwrap_or_default(), Err(usage(e))),
            })
            .collect()
    });
    let mut out = format!("frobsplit-batch version={} jobs={} seed={seed}\n", m.version, m.jobs.len());
    let mut pass = true;
    for (i, (name, res)) in results.into_iter().enumerate() {
        let ok = matches!(&res, Ok(r) if r.pass);
        pass &= ok;
        writeln!(out, "job={i} name={name} pass={ok}").unwrap();
        match res {
            Ok(r) => out.push_str(&r.text),
            Err(e) => writeln!(out, "error={}", e.to_string().replace('\n', " ")).unwrap(),
        }
    }
    if let Some(path) = &m.output {
        std::fs::write(path, &out).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    Ok(Report { text: out, pass })
}
