use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("chain needs at least {min} bonds, got {got}")]
    ChainTooShort { min: usize, got: usize },

    #[error("coupling {index} is not finite ({value})")]
    NonFiniteCoupling { index: usize, value: f64 },

    #[error("bond index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("bond pair requires h != k (got h = k = {0})")]
    CoincidentPair(usize),

    #[error("brute-force enumeration limited to {max} {what}, got {got}")]
    TooLarge {
        what: &'static str,
        max: usize,
        got: usize,
    },

    #[error("graph contains a cycle through site {0}")]
    Cycle(usize),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid bond law: {0}")]
    InvalidLaw(String),

    #[error("operation requires {expected} laws, bond {index} is {found}")]
    WrongLawKind {
        expected: &'static str,
        index: usize,
        found: &'static str,
    },

    #[error("exact enumeration requires all laws of one kind (bond 1 is {first}, bond {index} is {found})")]
    MixedKinds {
        first: &'static str,
        index: usize,
        found: &'static str,
    },

    #[error("exact enumeration requires discrete laws, bond {0} is continuous")]
    ContinuousLaw(usize),

    #[error("bond {index} must have zero mean for this reduction (mean = {mean})")]
    NonZeroMean { index: usize, mean: f64 },

    #[error("model fits none of the systems I, II, III")]
    Unclassified,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("model file: {0}")]
    Config(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
