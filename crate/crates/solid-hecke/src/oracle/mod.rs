//! Independent back-ends used to cross-check the engine: the group algebra
//! of ℤ_d^n ⋊ S_n at q = 1, and a separate type-A Hecke algebra with its
//! own normal form and trace.

mod hecke_a;
mod wreath;

use serde::Serialize;

pub use hecke_a::{homfly_a, ocneanu_trace_a, AElement};
pub use wreath::{specialize, specialize_check, wreath_image, WreathElement, WreathError};

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportEntry {
    pub case: String,
    pub expected: String,
    pub got: String,
    pub status: Status,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Report(pub Vec<ReportEntry>);

impl Report {
    pub fn push(&mut self, case: String, expected: String, got: String) {
        let status = if expected == got { Status::Pass } else { Status::Fail };
        self.0.push(ReportEntry { case, expected, got, status });
    }

    pub fn failures(&self) -> usize {
        self.0.iter().filter(|e| e.status == Status::Fail).count()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }
}
