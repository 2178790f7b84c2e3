use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("constant term in t must be exactly 1, found {0}")]
    NonUnitConstant(String),
    #[error("constant term in t must be 0, found {0}")]
    NonZeroConstant(String),
    #[error("coefficient t^{n} requested beyond truncation order {trunc}")]
    BeyondTruncation { n: usize, trunc: usize },
    #[error("path is not a member of the monoid: {0}")]
    NotInMonoid(String),
    #[error("invalid kernel polynomial: {0}")]
    InvalidKernel(String),
    #[error(
        "a smaller positive endpoint ({found},0) is reachable than the requested p = {requested}"
    )]
    SmallerEndpoint { found: i32, requested: i32 },
    #[error("no positive endpoint (p,0) is reachable within {trunc} steps")]
    NoPositiveEndpoint { trunc: usize },
    #[error("invalid step set: {0}")]
    InvalidSteps(String),
    #[error("invalid constraint: {0}")]
    InvalidConstraint(String),
    #[error("invalid grading {0:?}: expected x, y, mark or a,b")]
    InvalidGrading(String),
}

pub type Result<T> = std::result::Result<T, Error>;
