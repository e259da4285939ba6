use thiserror::Error;

use crate::series::Ring;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(Ring, Ring),

    #[error("constant term {0} is not a unit in {1}")]
    NonUnitConstantTerm(String, Ring),

    #[error("cannot reduce a series over {from} modulo {to}")]
    IncompatibleModulus { from: Ring, to: u64 },

    #[error("invalid modulus {0}: must satisfy 2 <= M < 2^63")]
    InvalidModulus(u64),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("cost limit exceeded: {0}")]
    CostLimit(String),

    #[error("truncation too small: need {needed}, have {available}")]
    TruncationTooSmall { needed: usize, available: usize },

    #[error("truncation budget exceeded: need {needed}, budget {budget}")]
    BudgetExceeded { needed: usize, budget: usize },

    #[error("{d} does not divide the level {level}")]
    NotADivisor { d: u64, level: u64 },

    #[error("eta-quotient conditions not met: {0}")]
    ConditionsNotMet(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("side condition violated: {0}")]
    SideConditionViolated(String),

    #[error("unknown selection `{0}`")]
    UnknownSelection(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }
}
