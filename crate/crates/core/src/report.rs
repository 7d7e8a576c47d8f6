//! Pass/fail tallies for the exhaustive checks.

use serde::Serialize;

const KEPT_FAILURES: usize = 20;

#[derive(Debug, Clone, Default, Serialize)]
pub struct Report {
    pub name: String,
    pub checked: usize,
    pub failed: usize,
    /// The first few failure messages.
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(name: impl Into<String>) -> Self {
        Report {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) -> bool {
        self.checked += 1;
        if !ok {
            self.fail(msg());
        }
        ok
    }

    pub fn fail(&mut self, msg: String) {
        self.failed += 1;
        if self.failures.len() < KEPT_FAILURES {
            self.failures.push(msg);
        }
    }

    pub fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn absorb(&mut self, other: Report) {
        self.checked += other.checked;
        self.failed += other.failed;
        for f in other.failures {
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(format!("{}: {f}", other.name));
            }
        }
        self.notes.extend(other.notes);
    }
}
