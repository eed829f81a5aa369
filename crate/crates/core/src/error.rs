use thiserror::Error;

/// Errors raised by the numeration library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("polynomial has degree 0")]
    DegenerateDegree,
    #[error("no real root greater than 1 at the requested position: {0}")]
    NoSuchRoot(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is a zero divisor modulo the defining polynomial")]
    NonInvertible,
    #[error("refinement budget of {0} bits exceeded")]
    RefinementBudgetExceeded(u32),
    #[error("embedding index {index} out of range (field has {available} embeddings)")]
    BadEmbeddingIndex { index: usize, available: usize },
    #[error("point outside the domain of the transformation: {0}")]
    OutOfDomain(String),
    #[error("reference word is undecided within the orbit budget of {0} steps")]
    UndecidedReference(usize),
    #[error("undecided (truncated) word given where a decided word is required")]
    UndecidedInput,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("the set of (-beta)-integers is trivial for this base")]
    TrivialSet,
    #[error("reference word is not eventually periodic (not sofic)")]
    NotSofic,
    #[error("projection does not commute with the antimorphism at letter {0}")]
    CommutationFailed(u32),
    #[error("d_beta(1) is not eventually periodic within budget (not a Parry number)")]
    NotParry,
    #[error("some conjugate of beta used for embedding has modulus >= 1")]
    UnboundedEmbedding,
    #[error("i/o failure: {0}")]
    IoFailure(String),
    #[error("parse error: {0}")]
    ParseError(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::IoFailure(e.to_string())
    }
}
