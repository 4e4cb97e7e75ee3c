//! Verdict records emitted by every claim-checking operation.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::field::FieldDescriptor;

/// One checked claim: what was checked, over which field, the ranks and
/// dimensions it rests on, and whether it held.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub claim: String,
    pub field: FieldDescriptor,
    pub parameters: BTreeMap<String, i64>,
    pub quantities: BTreeMap<String, usize>,
    /// Hypothesis status of the input, e.g. `nodal(2)` or `uncertified`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hypothesis: Option<String>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl Certificate {
    pub fn new(claim: impl Into<String>, field: FieldDescriptor) -> Self {
        Certificate {
            claim: claim.into(),
            field,
            parameters: BTreeMap::new(),
            quantities: BTreeMap::new(),
            hypothesis: None,
            passed: false,
            detail: None,
        }
    }

    pub fn parameter(mut self, name: &str, value: i64) -> Self {
        self.parameters.insert(name.to_string(), value);
        self
    }

    pub fn quantity(mut self, name: &str, value: usize) -> Self {
        self.quantities.insert(name.to_string(), value);
        self
    }

    pub fn passed(mut self, passed: bool) -> Self {
        self.passed = passed;
        self
    }

    pub fn detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn with_hypothesis(mut self, hypothesis: impl Into<String>) -> Self {
        self.hypothesis = Some(hypothesis.into());
        self
    }

    /// True if both certificates record the same claim, parameters,
    /// quantities and verdict, ignoring the field.
    pub fn agrees_with(&self, other: &Certificate) -> bool {
        self.claim == other.claim
            && self.parameters == other.parameters
            && self.quantities == other.quantities
            && self.passed == other.passed
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}] {}", self.claim, self.field, if self.passed { "pass" } else { "FAIL" })?;
        for (k, v) in &self.parameters {
            write!(f, " {k}={v}")?;
        }
        for (k, v) in &self.quantities {
            write!(f, " {k}={v}")?;
        }
        if let Some(h) = &self.hypothesis {
            write!(f, " hypothesis={h}")?;
        }
        if let Some(d) = &self.detail {
            write!(f, " ({d})")?;
        }
        Ok(())
    }
}
