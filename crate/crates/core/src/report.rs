//! Verification reports shared by the identity checks, the recurrence checker
//! and the specialization comparisons.

use std::fmt;

use serde::{Deserialize, Serialize};

/// One failing instance: what was checked and where it first went wrong.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub case: String,
    pub detail: String,
}

/// A named family of instances.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Bounds of what was actually compared, for the human reader.
    pub scope: String,
    pub cases: u64,
    pub violations: Vec<Violation>,
}

impl Check {
    pub fn new(name: impl Into<String>, scope: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            scope: scope.into(),
            cases: 0,
            violations: Vec::new(),
        }
    }

    /// Records one instance; `failure` is `Some(detail)` when it failed.
    pub fn record(&mut self, case: impl FnOnce() -> String, failure: Option<String>) {
        self.cases += 1;
        if let Some(detail) = failure {
            self.violations.push(Violation {
                case: case(),
                detail,
            });
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Folds another check's counts and violations into this one.
    pub fn absorb(&mut self, other: Check) {
        self.cases += other.cases;
        self.violations.extend(other.violations);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn cases(&self) -> u64 {
        self.checks.iter().map(|c| c.cases).sum()
    }

    pub fn violation_count(&self) -> usize {
        self.checks.iter().map(|c| c.violations.len()).sum()
    }

    pub fn first_violation(&self) -> Option<(&Check, &Violation)> {
        self.checks
            .iter()
            .find_map(|c| c.violations.first().map(|v| (c, v)))
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            writeln!(
                f,
                "  {:<width$}  {}  cases={:<6} violations={:<4} {}",
                c.name,
                if c.passed() { "ok  " } else { "FAIL" },
                c.cases,
                c.violations.len(),
                c.scope,
            )?;
            if let Some(v) = c.violations.first() {
                writeln!(f, "      first: {}: {}", v.case, v.detail)?;
            }
        }
        write!(
            f,
            "{}: {} cases, {} violations",
            if self.passed() { "PASSED" } else { "FAILED" },
            self.cases(),
            self.violation_count()
        )
    }
}
