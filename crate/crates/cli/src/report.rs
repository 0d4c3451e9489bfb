use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use zdg_core::verify::Check;

/// Bumped whenever a field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub command: String,
    pub parameters: Value,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub wall_time_ms: f64,
}

pub struct Recorder {
    command: &'static str,
    parameters: Value,
    checks: Vec<Check>,
    start: Instant,
}

impl Recorder {
    pub fn new(command: &'static str, parameters: Value) -> Self {
        Self { command, parameters, checks: Vec::new(), start: Instant::now() }
    }

    pub fn push(&mut self, check: Check) {
        eprintln!("{} {}", if check.passed { "PASS" } else { "FAIL" }, check.name);
        self.checks.push(check);
    }

    pub fn finish(self) -> RunReport {
        RunReport {
            schema_version: SCHEMA_VERSION,
            command: self.command.to_string(),
            parameters: self.parameters,
            passed: self.checks.iter().all(|c| c.passed),
            checks: self.checks,
            wall_time_ms: self.start.elapsed().as_secs_f64() * 1e3,
        }
    }
}

/// Writes the report to `path`, or to stdout when there is none.
pub fn emit(report: &RunReport, path: Option<&Path>) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(report)?;
    match path {
        Some(p) => std::fs::write(p, text + "\n")?,
        None => println!("{text}"),
    }
    Ok(())
}
