use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("probability {value} at position {index} is outside [0, 1]")]
    ProbabilityOutOfRange { index: usize, value: f64 },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("input of length {len} exceeds the enumeration limit of {limit}")]
    SizeLimit { len: usize, limit: usize },

    #[error("infeasible demand: theta1 ({theta1}) + theta0 ({theta0}) exceeds k ({k})")]
    InfeasibleDemand { k: usize, theta1: usize, theta0: usize },

    #[error("probability vector has length {got}, expected crowd size k = {k}")]
    LengthMismatch { got: usize, k: usize },

    #[error("degenerate demand window: theta1 = theta2 = {0}")]
    DegenerateWindow(usize),

    #[error("invalid crowd size k = {k} for {n} candidates: {reason}")]
    InvalidK { k: usize, n: usize, reason: &'static str },

    #[error("enumerating C({n}, {k}) subsets exceeds the guard of {limit}")]
    EnumerationGuard { n: usize, k: usize, limit: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("exact enumeration exceeded its time budget")]
    Timeout,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, message: msg.into() }
    }

    /// True for errors caused by the caller's input rather than the environment.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io(_) | Error::Timeout)
    }
}
