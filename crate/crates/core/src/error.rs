use thiserror::Error;

/// Errors raised by the library. Every variant carries enough context to
/// locate the offending input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("logarithm of non-positive value {0}")]
    NonPositiveLog(String),
    #[error("element `{0}` is not in the sample space")]
    UnknownElement(String),
    #[error("duplicate element `{0}` in sample space")]
    DuplicateElement(String),
    #[error("multiset is empty")]
    EmptyMultiset,
    #[error("evidence is empty")]
    EmptyEvidence,
    #[error("weights are not convex: {0}")]
    WeightsNotConvex(String),
    #[error("sample spaces do not match: {0}")]
    SpaceMismatch(String),
    #[error("product space would have {size} elements (limit {limit})")]
    SizeLimit { size: u128, limit: u128 },
    #[error("factor is not a predicate: value {0} exceeds 1")]
    NotAPredicate(String),
    #[error("negative factor value {0}")]
    NegativeValue(String),
    #[error("zero validity: {0}")]
    ZeroValidity(String),
    #[error("support violation: {0}")]
    SupportViolation(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("cannot parse scalar `{0}`")]
    ScalarParse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
