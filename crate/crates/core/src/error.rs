use alloc::{string::String, vec::Vec};

use crate::{mode::LevelKind, validate::Violation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{kind} level {value} outside [1, 6]")]
    LevelOutOfRange { kind: LevelKind, value: u32 },
    #[error("empty set of (likelihood, severity) pairs")]
    EmptyPairSet,
    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    DimensionMismatch { what: &'static str, expected: usize, found: usize },
    #[error("assignment was quantified with a different mode than the instance")]
    ModeMismatch,
    #[error("invalid instance: {}", first_violation(.0))]
    InvalidInstance(Vec<Violation>),
    #[error("invalid definition: {0}")]
    InvalidDefinition(String),
    #[error("invalid generator spec: {0}")]
    InvalidGenSpec(&'static str),
    #[error("risk index {index} out of range for {n} risks")]
    RiskOutOfRange { index: usize, n: usize },
    #[error("no-op mitigation on risk {risk}: at least one delta must be positive")]
    NoOpMitigation { risk: usize },
    #[error("risk elimination on risk {risk}: levels cannot drop below 1")]
    RiskElimination { risk: usize },
    #[error("side constraint #{index} is invalid: {reason}")]
    InvalidSideConstraint { index: usize, reason: &'static str },
    #[error("the fast path only solves the unconstrained problem")]
    UnsupportedConstraints,
    #[error("base assignment violates the side constraints on risk {risk}")]
    BaseViolatesSide { risk: usize },
    #[error("base solution is not acceptable")]
    UnacceptableBase,
    #[error("instance too large for oracle: {count} assignments exceed cap {cap}")]
    OracleCapExceeded { count: u128, cap: u128 },
}

fn first_violation(v: &[Violation]) -> String {
    use alloc::string::ToString;
    match v {
        [] => String::from("no violations"),
        [one] => one.to_string(),
        [first, rest @ ..] => alloc::format!("{first} (+{} more)", rest.len()),
    }
}
