use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("value is not a root of unity of the required odd order")]
    NotOddRoot,
    #[error("not a group: {reason} at ({a}, {b}, {c})")]
    NotAGroup {
        reason: String,
        a: usize,
        b: usize,
        c: usize,
    },
    #[error("order limit exceeded: {size} > {limit}")]
    OrderLimitExceeded { size: usize, limit: usize },
    #[error("subgroup is not abelian")]
    NotAbelian,
    #[error("element {0} is not in the subgroup")]
    NotInSubgroup(usize),
    #[error("operation requires odd order")]
    EvenOrder,
    #[error("tensor degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("element is not invertible")]
    NotInvertible,
    #[error("tensor is not a twist")]
    NotATwist,
    #[error("twist is not invariant (fails for generator {0})")]
    NotInvariant(usize),
    #[error("theta contract violated: {0}")]
    ThetaContractViolated(String),
    #[error("table is not a normalized two-cocycle")]
    NotACocycle,
    #[error("tensor is not supported in the given subgroup")]
    NotSupported,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("rules disagree: {0}")]
    RuleConflict(String),
    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),
}

impl Error {
    pub(crate) fn parse(msg: impl Into<String>) -> Error {
        Error::Parse(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
