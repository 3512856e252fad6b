use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::error::Result;

/// How `computed` is judged against `expected`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `|computed − expected| ≤ tolerance`.
    Absolute,
    /// `|computed − expected| ≤ tolerance·|expected|`.
    Relative,
    /// `computed ≥ expected`.
    AtLeast,
    /// `computed ≤ expected`.
    AtMost,
    /// Tabulated only; always passes.
    Info,
}

impl Comparison {
    fn judge(self, computed: f64, expected: f64, tolerance: f64) -> bool {
        if !computed.is_finite() {
            return false;
        }
        match self {
            Self::Absolute => (computed - expected).abs() <= tolerance,
            Self::Relative => (computed - expected).abs() <= tolerance * expected.abs(),
            Self::AtLeast => computed >= expected,
            Self::AtMost => computed <= expected,
            Self::Info => true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub computed: Option<f64>,
    pub expected: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

/// Criterion of a check, fixed before the measurement runs.
#[derive(Debug, Clone, Copy)]
pub struct Criterion {
    pub comparison: Comparison,
    pub expected: f64,
    pub tolerance: f64,
}

impl Criterion {
    pub fn absolute(expected: f64, tolerance: f64) -> Self {
        Self {
            comparison: Comparison::Absolute,
            expected,
            tolerance,
        }
    }

    pub fn relative(expected: f64, tolerance: f64) -> Self {
        Self {
            comparison: Comparison::Relative,
            expected,
            tolerance,
        }
    }

    pub fn at_least(bound: f64) -> Self {
        Self {
            comparison: Comparison::AtLeast,
            expected: bound,
            tolerance: 0.0,
        }
    }

    pub fn at_most(bound: f64) -> Self {
        Self {
            comparison: Comparison::AtMost,
            expected: bound,
            tolerance: 0.0,
        }
    }

    pub fn info() -> Self {
        Self {
            comparison: Comparison::Info,
            expected: 0.0,
            tolerance: 0.0,
        }
    }
}

impl Check {
    /// Runs `measure` and records its value, or its error as a failure.
    pub fn run(
        name: impl Into<String>,
        anchor: &str,
        criterion: Criterion,
        timed: bool,
        measure: impl FnOnce() -> Result<f64>,
    ) -> Self {
        let start = Instant::now();
        let outcome = measure();
        let runtime_ms = timed.then(|| start.elapsed().as_secs_f64() * 1e3);
        let (computed, error) = match outcome {
            Ok(v) => (Some(v), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let passed = computed.is_some_and(|v| {
            criterion
                .comparison
                .judge(v, criterion.expected, criterion.tolerance)
        });
        Self {
            name: name.into(),
            anchor: anchor.into(),
            computed: computed.filter(|v| v.is_finite()),
            expected: criterion.expected,
            tolerance: criterion.tolerance,
            comparison: criterion.comparison,
            passed,
            error,
            runtime_ms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigRecord {
    pub command: String,
    pub fourier_order: usize,
    pub quadrature_points: usize,
    pub fd_step: f64,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

/// `{config, checks, summary}`; checks are ordered by name.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub config: ConfigRecord,
    pub checks: Vec<Check>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: ConfigRecord, mut checks: Vec<Check>, timing: Option<(u64, f64)>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        let passed = checks.iter().filter(|c| c.passed).count();
        let failed = checks.len() - passed;
        let summary = Summary {
            total: checks.len(),
            passed,
            failed,
            verdict: if failed == 0 {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            timestamp: timing.map(|t| t.0),
            runtime_ms: timing.map(|t| t.1),
        };
        Self {
            config,
            checks,
            summary,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.verdict == Verdict::Pass
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report fields serialize");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn judging() {
        assert!(Comparison::Relative.judge(-12.05, -12.0, 0.01));
        assert!(!Comparison::Relative.judge(1e-300, 0.0, 0.01));
        assert!(Comparison::Relative.judge(0.0, 0.0, 0.01));
        assert!(!Comparison::AtMost.judge(f64::NAN, 1.0, 0.0));
        assert!(Comparison::Info.judge(5.0, 0.0, 0.0));
    }

    #[test]
    fn errors_fail_the_check() {
        let c = Check::run("x", "a", Criterion::info(), false, || {
            Err(Error::Numeric("boom".into()))
        });
        assert!(!c.passed);
        assert_eq!(c.computed, None);
        assert!(c.error.unwrap().contains("boom"));
    }

    #[test]
    fn checks_are_sorted_and_summarized() {
        let cfg = ConfigRecord {
            command: "t".into(),
            fourier_order: 1,
            quadrature_points: 1,
            fd_step: 1.0,
            seed: 0,
            tolerances: BTreeMap::new(),
        };
        let b = Check::run("b", "", Criterion::at_least(1.0), false, || Ok(0.0));
        let a = Check::run("a", "", Criterion::at_most(1.0), false, || Ok(0.0));
        let r = Report::new(cfg, vec![b, a], None);
        assert_eq!(r.checks[0].name, "a");
        assert_eq!((r.summary.passed, r.summary.failed), (1, 1));
        assert!(!r.passed());
        assert!(!r.to_json().contains("timestamp"));
    }
}
