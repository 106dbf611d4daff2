use serde::Serialize;
use serde_json::{json, Value};

/// One failed identity with the generators that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub identity: String,
    pub witness: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

impl Violation {
    pub fn new(
        identity: impl Into<String>,
        witness: Vec<String>,
        lhs: impl ToString,
        rhs: impl ToString,
    ) -> Self {
        Violation { identity: identity.into(), witness, lhs: lhs.to_string(), rhs: rhs.to_string() }
    }
}

/// Outcome of an exhaustive check: how many instances were evaluated and
/// which ones failed. Empty `violations` means pass.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
    /// Informational findings that do not count as failures.
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn passed(&self) -> bool {
        self.is_empty()
    }

    pub fn record(&mut self, ok: bool, v: impl FnOnce() -> Violation) {
        self.checked += 1;
        if !ok {
            self.violations.push(v());
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
        self.notes.extend(other.notes);
    }

    pub fn to_json(&self) -> Value {
        json!({
            "checked": self.checked,
            "passed": self.passed(),
            "violations": self.violations,
            "notes": self.notes,
        })
    }
}
