use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("terminal {0} has no incident edge")]
    IsolatedTerminal(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("node {0} has no activation levels")]
    EmptyLevels(String),
    #[error("activation predicate for {0}-{1} is not monotone")]
    NonMonotone(String, String),
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("augmentation oracle increased the potential from {before} to {after}")]
    OracleViolation { before: String, after: String },
    #[error("instance is not bipartite between terminals and non-terminals")]
    NotBipartite,
    #[error("facility {0} does not have locally uniform thresholds")]
    NonUniformFacility(String),
    #[error("instance has a threshold different from 1")]
    NotUnitThresholds,
    #[error("set rooted at {root} has {size} elements, more than k={k}")]
    SizeBoundViolated { root: String, size: usize, k: usize },
    #[error("instance generation failed after {0} attempts")]
    GenerationFailed(usize),
    #[error("parse error: {0}")]
    Parse(String),
}
