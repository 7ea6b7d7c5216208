//! Scenario-driven front end for the cocycle laboratory.
//!
//! A scenario is a TOML file naming a model, Hamiltonians and maps; a run
//! evaluates one suite of checks on it and writes a JSON-lines report (or a
//! CSV table for the `table` suite). Exit status: 0 when every check
//! passes, 1 when a check fails, 2 for parse, validation and I/O errors,
//! 3 when a check could not be evaluated because a numerical method did not
//! converge.

pub mod report;
pub mod scenario;
pub mod suites;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use report::{Report, Summary};
use scenario::{Scenario, Suite};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid scenario: {0}")]
    Validation(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// Overrides applied on top of a scenario file.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub suite: Option<Suite>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub threads: usize,
    /// Print one line per record to stdout.
    pub verbose: bool,
}

pub struct RunOutcome {
    pub summary: Summary,
    pub out: PathBuf,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        self.summary.exit_code()
    }
}

pub fn run_scenario(path: &Path, opts: &RunOptions) -> Result<RunOutcome, CliError> {
    let mut scenario = Scenario::load(path)?;
    if let Some(s) = opts.suite {
        scenario.suite = s;
    }
    if let Some(seed) = opts.seed {
        scenario.seed = seed;
    }
    if let Some(tol) = opts.tol {
        if !(tol > 0.0) {
            return Err(CliError::Validation("--tol must be positive".into()));
        }
        scenario.tolerances.quadrature = tol;
    }
    let built = scenario.build()?;
    let (records, csv) =
        suites::run(&scenario, &built, scenario.suite).map_err(CliError::Validation)?;
    let ext = if csv.is_some() { "csv" } else { "jsonl" };
    let out = opts
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.{ext}", scenario.name)));
    let report = Report::new(
        &scenario.name,
        scenario.suite.name(),
        scenario.seed,
        records,
    );
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", out.display()));
    let mut w = BufWriter::new(File::create(&out).map_err(io)?);
    match csv {
        Some(table) => w.write_all(table.as_bytes()).map_err(io)?,
        None => report.write_jsonl(&mut w, opts.threads).map_err(io)?,
    }
    w.flush().map_err(io)?;
    if opts.verbose {
        report.print_summary();
    } else {
        let s = report.summary();
        for r in report.records.iter().filter(|r| !r.pass) {
            println!(
                "FAIL {} residual {:.3e} tol {:.1e}{}",
                r.check_id,
                r.residual,
                r.tol,
                r.note
                    .as_ref()
                    .map(|n| format!(" ({n})"))
                    .unwrap_or_default()
            );
        }
        println!(
            "{} [{}]: {}/{} checks passed, {} numerical failures -> {}",
            scenario.name,
            scenario.suite.name(),
            s.passed,
            s.checks,
            s.numerical_failures,
            out.display()
        );
    }
    Ok(RunOutcome {
        summary: report.summary(),
        out,
    })
}
