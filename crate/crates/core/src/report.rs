//! Labelled check results shared by the validators.

use serde::Serialize;

/// A failed equation and the first entry where it fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub label: String,
    pub row: usize,
    pub col: usize,
    pub value: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checked: Vec<String>,
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn failed_labels(&self) -> Vec<&str> {
        self.violations.iter().map(|v| v.label.as_str()).collect()
    }

    /// Records that `label` was checked; `residual` must vanish.
    pub fn expect_zero(&mut self, label: &str, residual: &crate::PolyMatrix) {
        self.checked.push(label.to_string());
        if let Some((row, col, v)) = residual.first_nonzero() {
            self.violations.push(Violation { label: label.to_string(), row, col, value: v.to_canonical() });
        }
    }

    pub fn merge(&mut self, other: Report) {
        self.checked.extend(other.checked);
        self.violations.extend(other.violations);
    }
}
