//! Pass/fail reports produced by the identity checkers.

use crate::algebra::AlgebraElement;

/// One violated identity, with enough context to reproduce it.
///
/// `expected`/`actual` carry algebra elements when the identity compares
/// elements; checks that fail for structural reasons (a missing
/// precondition, say) leave them empty and explain in `witness`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Name of the identity that failed.
    pub identity: String,
    /// The basis units or elements the identity was instantiated at.
    pub witness: String,
    pub expected: Option<AlgebraElement>,
    pub actual: Option<AlgebraElement>,
}

/// Outcome of an identity check: passed iff no violations were recorded.
///
/// Checkers collect every violated instance rather than stopping at the
/// first, so a failing report doubles as a fuzzing diagnostic.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CheckReport {
    violations: Vec<Violation>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn push(&mut self, violation: Violation) {
        self.violations.push(violation);
    }

    /// Records a violation when `expected != actual`.
    pub fn expect_eq(
        &mut self,
        identity: &str,
        witness: impl FnOnce() -> String,
        expected: &AlgebraElement,
        actual: &AlgebraElement,
    ) {
        if expected != actual {
            self.violations.push(Violation {
                identity: identity.to_string(),
                witness: witness(),
                expected: Some(expected.clone()),
                actual: Some(actual.clone()),
            });
        }
    }

    /// Records a structural violation carrying only a description.
    pub fn fail(&mut self, identity: &str, witness: impl Into<String>) {
        self.violations.push(Violation {
            identity: identity.to_string(),
            witness: witness.into(),
            expected: None,
            actual: None,
        });
    }

    /// Folds another report into this one.
    pub fn merge(&mut self, other: CheckReport) {
        self.violations.extend(other.violations);
    }
}
