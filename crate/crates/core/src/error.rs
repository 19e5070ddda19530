use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} is not valid for the {system} system")]
    BadIndex { system: &'static str, index: i64 },

    #[error("lowest weight must be one of -3, 1, 2 (got {0})")]
    BadMu(i64),

    #[error("lower parameter {0} is a non-positive integer")]
    ParameterPole(f64),

    #[error("series did not converge after {0} terms")]
    NoConvergence(usize),

    #[error("operator for {op} cannot act on a vector over {basis}")]
    LadderMismatch { op: String, basis: String },

    #[error("sample point x = {0} lies inside the excluded region |x| < {1}")]
    SingularRegion(f64, f64),

    #[error("odd cat state is the zero vector at z = 0")]
    DegenerateCat,

    #[error("truncation cap of {0} terms reached before the tail converged")]
    TruncationCap(usize),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("malformed coefficient file: {0}")]
    Parse(String),
}
