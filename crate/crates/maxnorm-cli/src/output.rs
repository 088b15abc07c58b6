//! Report envelope and output plumbing shared by every subcommand.
//!
//! Reports serialize through the library's canonical writer, so identical
//! invocations produce identical bytes. Wall-clock timing is opt-in and is
//! the only nondeterministic field; it stays absent by default.

use std::time::Instant;

use maxnorm::profile::Profile;
use maxnorm::report::to_canonical_json;

use crate::Common;

pub enum Failure {
    /// Bad user input: malformed profile, grid, or parameter domain.
    Domain(String),
    /// Numeric failure: non-convergence or a failed self test.
    Numeric(String),
    /// Output could not be written.
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Io(_) => 1,
            Failure::Domain(_) => 2,
            Failure::Numeric(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Domain(m) | Failure::Numeric(m) | Failure::Io(m) => m,
        }
    }
}

impl From<maxnorm::Error> for Failure {
    fn from(e: maxnorm::Error) -> Self {
        match e {
            maxnorm::Error::InvalidParameter(_) | maxnorm::Error::Unsupported(_) => {
                Failure::Domain(e.to_string())
            }
            maxnorm::Error::NonConvergent { .. } | maxnorm::Error::NonFiniteValue { .. } => {
                Failure::Numeric(e.to_string())
            }
        }
    }
}

#[derive(serde::Serialize)]
struct ToolInfo {
    name: &'static str,
    version: &'static str,
}

#[derive(serde::Serialize)]
struct RunReport<'a, T: serde::Serialize> {
    schema: &'static str,
    tool: ToolInfo,
    command: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    profile: Option<&'a Profile>,
    results: &'a T,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<u128>,
}

pub struct Ctx {
    argv: Vec<String>,
    out: Option<String>,
    pub tol: Option<f64>,
    pub strict: bool,
    timing: bool,
    started: Instant,
}

impl Ctx {
    pub fn new(common: &Common) -> Self {
        Ctx {
            argv: std::env::args().skip(1).collect(),
            out: common.out.clone(),
            tol: common.tol,
            strict: common.strict,
            timing: common.timing,
            started: Instant::now(),
        }
    }

    /// The report stream was explicitly pointed at standard output.
    pub fn wants_stdout_report(&self) -> bool {
        self.out.as_deref() == Some("-")
    }

    pub fn has_out_file(&self) -> bool {
        matches!(self.out.as_deref(), Some(p) if p != "-")
    }

    pub fn emit_report<T: serde::Serialize>(
        &self,
        profile: Option<&Profile>,
        results: &T,
    ) -> Result<(), Failure> {
        let report = RunReport {
            schema: "maxnorm.report/1",
            tool: ToolInfo {
                name: "maxnorm",
                version: env!("CARGO_PKG_VERSION"),
            },
            command: &self.argv,
            profile,
            results,
            timing_ms: self.timing.then(|| self.started.elapsed().as_millis()),
        };
        let mut text = to_canonical_json(&report);
        text.push('\n');
        self.write_text(&text)
    }

    pub fn write_text(&self, text: &str) -> Result<(), Failure> {
        match self.out.as_deref() {
            None | Some("-") => {
                print!("{text}");
                Ok(())
            }
            Some(path) => std::fs::write(path, text)
                .map_err(|e| Failure::Io(format!("cannot write {path}: {e}"))),
        }
    }
}

/// One CSV data line at full float precision, newline included.
pub fn csv_line(values: &[f64]) -> String {
    let mut line = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            line.push(',');
        }
        line.push_str(&format!("{v:.16e}"));
    }
    line.push('\n');
    line
}
