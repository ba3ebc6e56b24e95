use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        actual: String,
    },

    #[error("{0} contains a non-finite entry")]
    NonFinite(&'static str),

    #[error("matrix is not Hermitian: defect {defect:e} exceeds {allowed:e}")]
    NotHermitian { defect: f64, allowed: f64 },

    #[error("Hermitian eigensolver did not converge within {iterations} iterations")]
    EigenNonConvergence { iterations: usize },

    #[error("spectral function undefined at eigenvalue {eigenvalue:e}")]
    Domain { eigenvalue: f64 },

    #[error("vectors do not form a frame: lower bound {lower:e} is below the singularity floor {floor:e}")]
    NotAFrame { lower: f64, floor: f64 },

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("frame is not Parseval: measured bounds ({lower}, {upper})")]
    NotParseval { lower: f64, upper: f64 },

    #[error("frames are not dual: reconstruction deviation {deviation:e} exceeds {allowed:e}")]
    NotADual { deviation: f64, allowed: f64 },

    #[error("operators do not resolve the identity: ‖U + V − I‖ = {deviation:e} exceeds {allowed:e}")]
    NotAResolution { deviation: f64, allowed: f64 },

    #[error("invalid splitting: {0}")]
    InvalidSplit(String),

    #[error("invalid subset: {0}")]
    InvalidSubset(String),

    #[error("unknown frame `{name}`; available: {catalogue}")]
    UnknownFrame { name: String, catalogue: String },

    #[error("random frame rejected {attempts} times (condition number above {cap}); try a larger condition cap")]
    Generation { attempts: usize, cap: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn dims(context: &'static str, expected: impl ToString, actual: impl ToString) -> Self {
        Error::DimensionMismatch {
            context,
            expected: expected.to_string(),
            actual: actual.to_string(),
        }
    }
}
