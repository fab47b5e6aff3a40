//! Verification outcomes shared by the checking operations.

use std::fmt;

use serde::Serialize;

use crate::arithfun::FunctionId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
}

/// Where a check broke: which family (or which pair), at what position, and
/// the expected versus observed values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub family: Option<String>,
    pub position: u64,
    pub expected: String,
    pub actual: String,
}

impl Counterexample {
    pub fn new(
        family: Option<String>,
        position: u64,
        expected: impl fmt::Display,
        actual: impl fmt::Display,
    ) -> Self {
        Counterexample {
            family,
            position,
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }

    /// A pointwise witness `n`, e.g. the least `n` violating a hypothesis.
    pub fn witness(n: u128, expected: impl fmt::Display, actual: impl fmt::Display) -> Self {
        Counterexample::new(None, n as u64, expected, actual)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    OrbitNumber,
    AntiOrbitNumber,
}

/// "o(f) >= families" or "a(f) >= families", certified on prefixes of the
/// given depth. Never a claim of infinitude.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertifiedBound {
    pub quantity: Quantity,
    pub function: FunctionId,
    pub families: u64,
    pub depth: u64,
}

impl fmt::Display for CertifiedBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = match self.quantity {
            Quantity::OrbitNumber => "o",
            Quantity::AntiOrbitNumber => "a",
        };
        write!(
            f,
            "{q}({}) >= {} certified at depth {}",
            self.function, self.families, self.depth
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub lemma_id: String,
    pub families_checked: u64,
    pub depth: u64,
    pub status: Status,
    pub counterexample: Option<Counterexample>,
    pub certified_bound: Option<CertifiedBound>,
    pub conclusions: Vec<String>,
}

impl VerificationReport {
    pub fn pass(lemma_id: impl Into<String>, families_checked: u64, depth: u64) -> Self {
        VerificationReport {
            lemma_id: lemma_id.into(),
            families_checked,
            depth,
            status: Status::Pass,
            counterexample: None,
            certified_bound: None,
            conclusions: Vec::new(),
        }
    }

    pub fn fail(
        lemma_id: impl Into<String>,
        families_checked: u64,
        depth: u64,
        counterexample: Counterexample,
    ) -> Self {
        VerificationReport {
            lemma_id: lemma_id.into(),
            families_checked,
            depth,
            status: Status::Fail,
            counterexample: Some(counterexample),
            certified_bound: None,
            conclusions: Vec::new(),
        }
    }

    /// Attaches a certified bound; ignored on a failing report.
    pub fn with_bound(mut self, bound: CertifiedBound) -> Self {
        if self.passed() {
            self.certified_bound = Some(bound);
        }
        self
    }

    pub fn with_conclusion(mut self, text: impl Into<String>) -> Self {
        self.conclusions.push(text.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}
