use std::io::Write;
use std::path::Path;

use modinv_core::CheckReport;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Serialize)]
pub struct Summary {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
    pub pass: bool,
    pub failed_checks: Vec<String>,
}

/// Top-level JSON document.
#[derive(Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: Map<String, Value>,
    pub checks: Vec<CheckReport>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: Map<String, Value>, checks: Vec<CheckReport>) -> Self {
        let failed_checks: Vec<String> = checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.clone())
            .collect();
        let summary = Summary {
            checks: checks.len(),
            passed: checks.len() - failed_checks.len(),
            failed: failed_checks.len(),
            pass: failed_checks.is_empty(),
            failed_checks,
        };
        Report {
            tool: "modinv",
            version: env!("CARGO_PKG_VERSION"),
            config,
            checks,
            summary,
        }
    }

    pub fn without_timings(mut self) -> Self {
        for c in &mut self.checks {
            c.millis = 0;
        }
        self
    }

    pub fn summary_line(&self) -> String {
        let s = &self.summary;
        if s.pass {
            format!("all {} checks passed", s.checks)
        } else {
            format!("{} of {} checks failed: {}", s.failed, s.checks, s.failed_checks.join(", "))
        }
    }

    pub fn write(&self, path: Option<&Path>) -> std::io::Result<()> {
        let mut text = serde_json::to_string_pretty(self).map_err(std::io::Error::other)?;
        text.push('\n');
        match path {
            Some(p) => std::fs::write(p, text),
            None => std::io::stdout().lock().write_all(text.as_bytes()),
        }
    }
}
