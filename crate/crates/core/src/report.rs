//! Violation lists shared by every verification routine.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub check: String,
    pub at: Vec<String>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub cases: u64,
    pub violations: Vec<Violation>,
    /// Named counters worth recording alongside the verdict.
    pub notes: Vec<(String, String)>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn case(&mut self) {
        self.cases += 1;
    }

    pub fn fail(&mut self, check: &str, at: Vec<String>, detail: impl Into<String>) {
        self.violations.push(Violation {
            check: check.to_string(),
            at,
            detail: detail.into(),
        });
    }

    /// Count a case and record a violation when `ok` is false.
    pub fn expect(&mut self, ok: bool, check: &str, at: impl FnOnce() -> Vec<String>, detail: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.fail(check, at(), detail());
        }
    }

    pub fn note(&mut self, key: &str, value: impl ToString) {
        self.notes.push((key.to_string(), value.to_string()));
    }

    pub fn merge(&mut self, other: Report) {
        self.cases += other.cases;
        self.violations.extend(other.violations);
        self.notes.extend(other.notes);
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}
