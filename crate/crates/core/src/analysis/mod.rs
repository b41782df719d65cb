//! Scenario configuration, reproducible runs and reports.

pub mod config;
pub mod properties;
pub mod report;
pub mod sampling;
pub mod scenarios;

use std::time::Instant;

use crate::error::{Error, Result};
use crate::lhv::lhv_upper_bound;
use crate::quantum::separable_maximum;

pub use config::{GridSpec, ScenarioConfig, StateSpec, Tolerances, ValidatedScenario};
pub use report::{AggregateReport, Check, Provenance, Quantity, Reference, Report};
pub use scenarios::{run_builtin, run_scenario, run_validated, BuiltinScenario};

pub const DEFAULT_SEED: u64 = 20_240_601;

/// Shared knobs for built-in scenarios and property suites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub grid: GridSpec,
    pub tolerances: Tolerances,
    pub seed: u64,
    /// Upper bound on N for every family that sweeps party counts.
    pub max_parties: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            grid: GridSpec::default(),
            tolerances: Tolerances::default(),
            seed: DEFAULT_SEED,
            max_parties: config::MAX_CLOSED_FORM_PARTIES,
        }
    }
}

/// (4π)^N / (4π/3)^N.
pub fn violation_ratio(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("violation ratio needs N ≥ 1"));
    }
    Ok(lhv_upper_bound(n)? / separable_maximum(n))
}

/// Runs every built-in scenario and property suite. Failures inside one
/// scenario become a failing report; the run always completes.
pub fn verify_all(opts: &RunOptions) -> AggregateReport {
    let start = Instant::now();
    let mut reports = Vec::new();
    for s in BuiltinScenario::ALL {
        reports.push(s.run(opts).unwrap_or_else(|e| errored(s.name(), opts, &e)));
    }
    for (i, (name, _)) in properties::SUITES.iter().enumerate() {
        reports.push(properties::run_suite(i, opts).unwrap_or_else(|e| errored(name, opts, &e)));
    }
    AggregateReport {
        reports,
        duration: start.elapsed(),
    }
}

fn errored(name: &str, opts: &RunOptions, e: &Error) -> Report {
    let mut r = Report::new(name, Provenance::new(opts.grid, opts.tolerances, opts.seed));
    r.check("completed", false, e.to_string());
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_is_three_to_the_n() {
        for n in 1..=8 {
            let r = violation_ratio(n).unwrap();
            assert!((r / 3f64.powi(n as i32) - 1.0).abs() < 1e-13);
        }
        assert!(violation_ratio(0).is_err());
    }
}
