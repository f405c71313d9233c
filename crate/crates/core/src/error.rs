use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands that should live over the same group, ground set or complex do not.
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// A search or solver would exceed its configured budget.
    #[error("capacity exceeded: {what} needs {needed} but the budget is {budget}")]
    Capacity { what: String, needed: String, budget: u64 },
    #[error("complex is not pure: simplex {witness:?} has no top-dimensional coface")]
    Purity { witness: Vec<usize> },
    #[error("morphism is not measure preserving: {0}")]
    Morphism(String),
    #[error("edge labeling is not flat around triangle {witness:?}")]
    Labeling { witness: Vec<usize> },
    #[error("structure error: {0}")]
    Structure(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    pub fn capacity(what: impl Into<String>, needed: impl ToString, budget: u64) -> Self {
        Error::Capacity { what: what.into(), needed: needed.to_string(), budget }
    }

    /// True for errors caused by a budget rather than by malformed input.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}
