//! Verification reports shared by the suites.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Reported without a reference value to compare against.
    Info,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub found: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool) -> Check {
        Check {
            name: name.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            expected: None,
            found: None,
            detail: None,
        }
    }

    pub fn info(name: impl Into<String>, found: impl ToString) -> Check {
        Check { name: name.into(), status: Status::Info, expected: None, found: Some(found.to_string()), detail: None }
    }

    /// Pass iff `found == expected`.
    pub fn compare<T: PartialEq + ToString>(name: impl Into<String>, expected: T, found: T) -> Check {
        Check::new(name, expected == found).expected(expected).found(found)
    }

    pub fn expected(mut self, v: impl ToString) -> Check {
        self.expected = Some(v.to_string());
        self
    }

    pub fn found(mut self, v: impl ToString) -> Check {
        self.found = Some(v.to_string());
        self
    }

    pub fn detail(mut self, v: impl ToString) -> Check {
        self.detail = Some(v.to_string());
        self
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        };
        write!(f, "[{tag}] {}", self.name)?;
        match (&self.expected, &self.found) {
            (Some(e), Some(x)) => write!(f, ": expected {e}, found {x}")?,
            (None, Some(x)) => write!(f, ": {x}")?,
            _ => {}
        }
        if let Some(d) = &self.detail {
            write!(f, " ({d})")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, checks: Vec<Check>) -> SuiteReport {
        let passed = !checks.iter().any(Check::failed);
        SuiteReport { suite: suite.into(), passed, checks }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.failed())
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {}: {}", self.suite, if self.passed { "ok" } else { "FAILED" })?;
        for c in &self.checks {
            writeln!(f, "  {c}")?;
        }
        write!(
            f,
            "  {} passed, {} failed, {} reported",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Info)
        )
    }
}
