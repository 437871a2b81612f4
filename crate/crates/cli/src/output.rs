use std::time::Instant;

use crosslab::VerificationReport;
use serde::Serialize;

#[derive(Debug, Clone, Copy)]
pub struct Mode {
    /// JSON on stdout
    pub json: bool,
    /// human-readable lines
    pub human: bool,
    pub timing: bool,
}

impl Mode {
    pub fn new(json_only: bool, quiet: bool, timing: bool) -> Self {
        Self {
            json: !quiet,
            human: !quiet && !json_only,
            timing,
        }
    }
}

pub struct Timer(Instant);

impl Timer {
    pub fn start() -> Self {
        Timer(Instant::now())
    }

    pub fn stamp(&self, mode: &Mode, report: &mut VerificationReport) {
        if mode.timing {
            report.wall_time = Some(self.0.elapsed().as_secs_f64());
        }
    }
}

pub fn emit_json<T: Serialize>(mode: &Mode, value: &T) -> anyhow::Result<()> {
    if mode.json {
        println!("{}", serde_json::to_string_pretty(value)?);
    }
    Ok(())
}

/// One line per failing check plus a verdict, on stderr.
pub fn summarize(mode: &Mode, report: &VerificationReport) {
    if !mode.human {
        return;
    }
    for c in report.failures() {
        eprintln!("FAIL {} residual {:.3e} > {:.3e}", c.name, c.residual, c.tolerance);
    }
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    eprintln!(
        "{verdict} {}: {} checks, max residual {:.3e}",
        report.suite,
        report.checks.len(),
        report.max_residual()
    );
}
