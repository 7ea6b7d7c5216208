//! Report records and their JSON-lines serialization.
//!
//! A report is one JSON object per line: the check records sorted by
//! `check_id`, then a `summary` line and an `environment` line. Record
//! fields are `check_id`, `anchor`, `inputs`, `value`, `residual`, `tol`,
//! `pass` and an optional `note`.

use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Record {
    pub check_id: String,
    /// The mathematical statement the check exercises.
    pub anchor: String,
    /// SHA-256 of the canonical description of the check's inputs.
    pub inputs: String,
    pub value: Value,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip)]
    pub numerical_failure: bool,
}

impl Record {
    /// Passing iff `residual <= tol`.
    pub fn residual(
        check_id: impl Into<String>,
        anchor: &str,
        inputs: &str,
        value: Value,
        residual: f64,
        tol: f64,
    ) -> Self {
        Self {
            check_id: check_id.into(),
            anchor: anchor.to_string(),
            inputs: digest(inputs),
            value,
            residual,
            tol,
            pass: residual <= tol,
            note: None,
            numerical_failure: false,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Record of a check that could not be evaluated.
    pub fn failed(
        check_id: impl Into<String>,
        anchor: &str,
        inputs: &str,
        tol: f64,
        err: &symplectic_cocycle::Error,
    ) -> Self {
        Self {
            check_id: check_id.into(),
            anchor: anchor.to_string(),
            inputs: digest(inputs),
            value: Value::Null,
            residual: f64::NAN,
            tol,
            pass: false,
            note: Some(err.to_string()),
            numerical_failure: err.is_numerical(),
        }
    }
}

pub fn digest(text: &str) -> String {
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub numerical_failures: usize,
}

impl Summary {
    pub fn of(records: &[Record]) -> Self {
        Self {
            checks: records.len(),
            passed: records.iter().filter(|r| r.pass).count(),
            numerical_failures: records.iter().filter(|r| r.numerical_failure).count(),
        }
    }

    /// 0 when every check passes, 3 when a check hit a numerical failure,
    /// 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.numerical_failures > 0 {
            3
        } else if self.passed < self.checks {
            1
        } else {
            0
        }
    }
}

pub struct Report {
    pub scenario: String,
    pub suite: String,
    pub seed: u64,
    pub records: Vec<Record>,
}

impl Report {
    pub fn new(scenario: &str, suite: &str, seed: u64, mut records: Vec<Record>) -> Self {
        records.sort_by(|a, b| a.check_id.cmp(&b.check_id));
        Self {
            scenario: scenario.to_string(),
            suite: suite.to_string(),
            seed,
            records,
        }
    }

    pub fn summary(&self) -> Summary {
        Summary::of(&self.records)
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W, threads: usize) -> std::io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut out, r)?;
            out.write_all(b"\n")?;
        }
        let s = self.summary();
        let summary = json!({
            "summary": {
                "scenario": self.scenario,
                "suite": self.suite,
                "seed": self.seed,
                "checks": s.checks,
                "passed": s.passed,
                "failed": s.checks - s.passed,
                "numerical_failures": s.numerical_failures,
                "exit_code": s.exit_code(),
            }
        });
        serde_json::to_writer(&mut out, &summary)?;
        out.write_all(b"\n")?;
        let env = json!({
            "environment": {
                "tool": env!("CARGO_PKG_NAME"),
                "version": env!("CARGO_PKG_VERSION"),
                "os": std::env::consts::OS,
                "arch": std::env::consts::ARCH,
                "threads": threads,
            }
        });
        serde_json::to_writer(&mut out, &env)?;
        out.write_all(b"\n")
    }

    /// One line per record for the terminal.
    pub fn print_summary(&self) {
        for r in &self.records {
            println!(
                "{} {:<48} residual {:>10.3e}  tol {:.1e}{}",
                if r.pass { "PASS" } else { "FAIL" },
                r.check_id,
                r.residual,
                r.tol,
                r.note
                    .as_ref()
                    .map(|n| format!("  ({n})"))
                    .unwrap_or_default()
            );
        }
        let s = self.summary();
        println!(
            "{}: {}/{} checks passed, {} numerical failures",
            self.scenario, s.passed, s.checks, s.numerical_failures
        );
    }
}
