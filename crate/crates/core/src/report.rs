//! Machine-readable verification outcomes.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

/// How much weight a result carries at the exit gate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tag {
    /// A stated result; a failure is an implementation bug.
    #[default]
    Theorem,
    /// A conjecture; reported but never gating.
    Conjecture,
    /// Found by scanning, not stated anywhere.
    Empirical,
}

impl Tag {
    pub fn is_gating(self) -> bool {
        self == Tag::Theorem
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    /// Index at which the check failed (progression index, or exponent for identities).
    pub n: u64,
    pub value: String,
    pub expected: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub claim_id: String,
    pub status: Status,
    #[serde(default)]
    pub tag: Tag,
    /// Largest index examined.
    pub n_max: u64,
    /// Number of indices actually compared (after filters).
    pub checked: u64,
    pub first_counterexample: Option<Counterexample>,
    /// Truncation of the expansion the check read from.
    pub trunc: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub(crate) fn from_outcome(
        claim_id: impl Into<String>,
        n_max: u64,
        checked: u64,
        trunc: usize,
        failure: Option<Counterexample>,
    ) -> Self {
        VerificationReport {
            claim_id: claim_id.into(),
            status: if failure.is_some() {
                Status::Fail
            } else {
                Status::Pass
            },
            tag: Tag::Theorem,
            n_max,
            checked,
            first_counterexample: failure,
            trunc,
            notes: Vec::new(),
        }
    }

    pub fn with_tag(mut self, tag: Tag) -> Self {
        self.tag = tag;
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let status = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        };
        let mut line = format!(
            "{status} {} (n <= {}, {} checked, trunc {})",
            self.claim_id, self.n_max, self.checked, self.trunc
        );
        if self.tag != Tag::Theorem {
            line.push_str(&format!(" [{:?}]", self.tag).to_uppercase());
        }
        if let Some(c) = &self.first_counterexample {
            line.push_str(&format!(
                " first counterexample n={} value={} expected={}",
                c.n, c.value, c.expected
            ));
        }
        line
    }
}
