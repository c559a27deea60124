//! Seeded property suites that check every identity of the operator engine
//! against its symbolic oracle and collect the results in a report.

pub mod gen;
mod suites;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use serde::Serialize;

use crate::error::{Error, Result};
use gen::CaseRng;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Gamma,
    Algebra,
    FundamentalTheorem,
    Kernel,
    Projector,
    Abel,
    Laplace,
    Axioms,
    Numerics,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Gamma,
        Suite::Algebra,
        Suite::FundamentalTheorem,
        Suite::Kernel,
        Suite::Projector,
        Suite::Abel,
        Suite::Laplace,
        Suite::Axioms,
        Suite::Numerics,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Gamma => "gamma",
            Suite::Algebra => "algebra",
            Suite::FundamentalTheorem => "fundamental",
            Suite::Kernel => "kernel",
            Suite::Projector => "projector",
            Suite::Abel => "abel",
            Suite::Laplace => "laplace",
            Suite::Axioms => "axioms",
            Suite::Numerics => "numerics",
        }
    }

    fn stream(self) -> u64 {
        Suite::ALL.iter().position(|&s| s == self).expect("listed") as u64
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .copied()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
                Error::Unsupported(format!(
                    "unknown suite '{s}' (expected all or one of {})",
                    names.join(", ")
                ))
            })
    }
}

/// One failed case.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Failure {
    pub case: String,
    pub residual: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
    pub wall_time_secs: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {}: {} cases, {} failures, {:.3} s",
            self.suite,
            self.cases,
            self.failures.len(),
            self.wall_time_secs
        )?;
        for failure in &self.failures {
            write!(
                f,
                "\n  {} (residual {:e}, tolerance {:e})",
                failure.case, failure.residual, failure.tolerance
            )?;
        }
        Ok(())
    }
}

/// Counts cases and keeps the failing ones. Case descriptors are only
/// rendered on failure.
#[derive(Default)]
pub(crate) struct Recorder {
    cases: usize,
    failures: Vec<Failure>,
}

impl Recorder {
    /// Passes when `residual <= tolerance`; NaN fails.
    pub(crate) fn check<D: FnOnce() -> String>(&mut self, residual: f64, tolerance: f64, case: D) {
        self.cases += 1;
        if !(residual <= tolerance) {
            self.failures.push(Failure {
                case: case(),
                residual,
                tolerance,
            });
        }
    }

    /// Like [`check`](Self::check); an error counts as an infinite residual.
    pub(crate) fn check_result<D: FnOnce() -> String>(
        &mut self,
        residual: Result<f64>,
        tolerance: f64,
        case: D,
    ) {
        match residual {
            Ok(r) => self.check(r, tolerance, case),
            Err(e) => self.check(f64::INFINITY, tolerance, || format!("{}: {e}", case())),
        }
    }

    /// Passes when `value >= bound`; the failure records `value` as residual
    /// and `bound` as tolerance.
    pub(crate) fn check_at_least<D: FnOnce() -> String>(
        &mut self,
        value: f64,
        bound: f64,
        case: D,
    ) {
        self.cases += 1;
        if !(value >= bound) {
            self.failures.push(Failure {
                case: format!("{} (below lower bound)", case()),
                residual: value,
                tolerance: bound,
            });
        }
    }

    pub(crate) fn expect<D: FnOnce() -> String>(&mut self, ok: bool, case: D) {
        self.check(if ok { 0.0 } else { 1.0 }, 0.0, case);
    }
}

/// Runs one suite with a generator stream derived from `seed`.
pub fn run_suite(suite: Suite, seed: u64) -> VerificationReport {
    let start = Instant::now();
    let mut rng = CaseRng::seed_from_u64(seed);
    rng.set_stream(suite.stream());
    let mut rec = Recorder::default();
    match suite {
        Suite::Gamma => suites::gamma(&mut rng, &mut rec),
        Suite::Algebra => suites::algebra(&mut rng, &mut rec),
        Suite::FundamentalTheorem => suites::fundamental_theorem(&mut rng, &mut rec),
        Suite::Kernel => suites::kernel(&mut rng, &mut rec),
        Suite::Projector => suites::projector(&mut rng, &mut rec),
        Suite::Abel => suites::abel(&mut rng, &mut rec),
        Suite::Laplace => suites::laplace(&mut rng, &mut rec),
        Suite::Axioms => suites::axioms(&mut rng, &mut rec),
        Suite::Numerics => suites::numerics(&mut rec),
    }
    VerificationReport {
        suite: suite.name().to_string(),
        cases: rec.cases,
        failures: rec.failures,
        wall_time_secs: start.elapsed().as_secs_f64(),
    }
}

/// Runs the selected suites (all when `selection` is empty) in order.
pub fn run_suites(selection: &[Suite], seed: u64) -> Vec<VerificationReport> {
    let suites: &[Suite] = if selection.is_empty() {
        &Suite::ALL
    } else {
        selection
    };
    suites.iter().map(|&s| run_suite(s, seed)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for suite in Suite::ALL {
            assert_eq!(suite.name().parse::<Suite>().unwrap(), suite);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn every_suite_passes_at_the_default_seed() {
        for report in run_suites(&[], DEFAULT_SEED) {
            assert!(report.passed(), "{report}");
            assert!(report.cases > 0, "{report}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite(Suite::Abel, 7);
        let b = run_suite(Suite::Abel, 7);
        assert_eq!((a.cases, a.failures), (b.cases, b.failures));
    }
}
