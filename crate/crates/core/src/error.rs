use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph is not connected")]
    GraphNotConnected,

    #[error("invalid walk: {0}")]
    InvalidWalk(String),

    #[error("measurement matrix has no rows")]
    EmptyMatrix,

    /// Enumeration stopped early. `partial` describes the bound certified so far.
    #[error("enumeration budget exceeded ({partial})")]
    BudgetExceeded { partial: String },

    #[error("invalid LP problem: {0}")]
    InvalidProblem(String),

    #[error("simplex stalled after {iterations} iterations")]
    SolverStalled { iterations: usize },

    #[error("system y = Ax has no admissible solution")]
    NoSolution,

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}
