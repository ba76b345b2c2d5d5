//! Verification report types shared by every check in the crate.

use serde::{Deserialize, Serialize};

/// Version stamped into every machine-readable output.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Must hold; a failure fails the run.
    Identity,
    /// Reported for comparison only, never a failure.
    Informational,
}

/// Outcome of one relation check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub relation: String,
    pub q: f64,
    pub lmax: u32,
    pub max_residual: f64,
    pub tolerance: f64,
    #[serde(rename = "pass")]
    pub passed: bool,
    pub kind: CheckKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl RelationCheck {
    pub fn identity(
        relation: impl Into<String>,
        q: f64,
        lmax: u32,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            relation: relation.into(),
            q,
            lmax,
            max_residual: residual,
            tolerance,
            passed: residual.is_finite() && residual < tolerance,
            kind: CheckKind::Identity,
            note: None,
        }
    }

    pub fn informational(
        relation: impl Into<String>,
        q: f64,
        lmax: u32,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        let mut c = Self::identity(relation, q, lmax, residual, tolerance);
        c.kind = CheckKind::Informational;
        c
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// A computed quantity placed next to the closed form it is supposed to
/// equal. Comparisons are informational.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub relation: String,
    pub q: f64,
    pub label: String,
    pub computed: f64,
    pub reference: f64,
    pub agrees: bool,
}

impl Comparison {
    pub fn new(
        relation: impl Into<String>,
        q: f64,
        label: impl Into<String>,
        computed: f64,
        reference: f64,
    ) -> Self {
        let agrees = (computed - reference).abs() <= 1e-9 * (1.0 + reference.abs());
        Self {
            relation: relation.into(),
            q,
            label: label.into(),
            computed,
            reference,
            agrees,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub q: f64,
    pub lmax: u32,
    pub tolerance: f64,
    pub checks: Vec<RelationCheck>,
    pub comparisons: Vec<Comparison>,
}

impl VerificationReport {
    pub fn new(q: f64, lmax: u32, tolerance: f64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            q,
            lmax,
            tolerance,
            checks: Vec::new(),
            comparisons: Vec::new(),
        }
    }

    pub fn push(&mut self, check: RelationCheck) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = RelationCheck>) {
        self.checks.extend(checks);
    }

    pub fn compare(&mut self, comparison: Comparison) {
        self.comparisons.push(comparison);
    }

    /// True when every identity check passed.
    pub fn all_passed(&self) -> bool {
        self.failures().next().is_none()
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks
            .iter()
            .filter(|c| c.kind == CheckKind::Identity && !c.passed)
    }

    pub fn find(&self, relation: &str) -> Option<&RelationCheck> {
        self.checks.iter().find(|c| c.relation == relation)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is always serializable")
    }
}
