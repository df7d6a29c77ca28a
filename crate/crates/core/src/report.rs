use serde::{Deserialize, Serialize};
use std::fmt;

/// Outcome of one named check inside a validator run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

/// Per-axiom pass/fail listing produced by every validator in the crate.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pass(&mut self, id: impl Into<String>) {
        self.checks.push(Check {
            id: id.into(),
            passed: true,
            counterexample: None,
            detail: String::new(),
        });
    }

    pub fn fail(&mut self, id: impl Into<String>, witness: Vec<usize>, detail: impl Into<String>) {
        self.checks.push(Check {
            id: id.into(),
            passed: false,
            counterexample: Some(witness),
            detail: detail.into(),
        });
    }

    /// Records `id` as passed when `witness` is `None`, failed otherwise.
    pub fn record(&mut self, id: impl Into<String>, witness: Option<Vec<usize>>) {
        match witness {
            None => self.pass(id),
            Some(w) => self.fail(id, w, ""),
        }
    }

    pub fn merge(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.id = format!("{prefix}{}", c.id);
            self.checks.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            write!(f, "{mark} {}", c.id)?;
            if let Some(w) = &c.counterexample {
                write!(f, " at {w:?}")?;
            }
            if !c.detail.is_empty() {
                write!(f, " ({})", c.detail)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
