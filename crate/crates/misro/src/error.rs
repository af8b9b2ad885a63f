use std::{io, path::PathBuf};

use crate::{bench::BenchError, dzn::DznError, json::JsonError};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] misro_core::Error),
    #[error(transparent)]
    Dzn(#[from] DznError),
    #[error(transparent)]
    Json(#[from] JsonError),
    #[error(transparent)]
    Bench(#[from] BenchError),
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Short machine-readable class of the error.
    pub fn kind(&self) -> &'static str {
        use misro_core::Error as C;
        match self {
            Error::Core(e) => match e {
                C::LevelOutOfRange { .. } => "range",
                C::EmptyPairSet => "domain",
                C::DimensionMismatch { .. } => "dimension",
                C::ModeMismatch => "dimension",
                C::InvalidInstance(_) => "invalid-instance",
                C::InvalidDefinition(_) => "invalid-definition",
                C::InvalidGenSpec(_) => "invalid-spec",
                C::RiskOutOfRange { .. } => "range",
                C::NoOpMitigation { .. } => "no-op-mitigation",
                C::RiskElimination { .. } => "risk-elimination",
                C::InvalidSideConstraint { .. } => "invalid-constraint",
                C::UnsupportedConstraints => "unsupported-constraints",
                C::BaseViolatesSide { .. } | C::UnacceptableBase => "precondition",
                C::OracleCapExceeded { .. } => "too-large",
            },
            Error::Dzn(e) => e.kind(),
            Error::Json(e) => e.kind(),
            Error::Bench(e) => e.kind(),
            Error::Usage(_) => "usage",
            Error::Io { .. } => "io",
        }
    }
}
