use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("unknown builtin complex {0:?}")]
    UnknownBuiltin(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("complex has no flip involution; surgery needs one")]
    MissingFlip,

    #[error("absolute gradings are only available for n in {{-1, 0, 1}} (got {0})")]
    UnsupportedSurgery(i64),

    #[error("operation needs a knot in S^3 (ambient {0:?} has b1 > 0)")]
    NontrivialAmbient(String),

    #[error("connected sum of two knots in manifolds with b1 > 0 is not supported")]
    BothAmbientsNontrivial,

    #[error("tau must be 0 (got {0})")]
    NonzeroTau(i64),

    #[error("vertical pairing failed; unmatched generators: {0:?}")]
    PairingFailed(Vec<String>),

    #[error("doubling needs a nontrivial knot")]
    TrivialKnot,

    #[error("negative rank {rank} at (m={maslov}, s={alexander}) in formal sum")]
    NegativeRank { maslov: String, alexander: i64, rank: i64 },

    #[error("input is not of the supported shape: {0}")]
    UnsupportedShape(String),

    #[error("inconsistent exact triangle: {0}")]
    InconsistentTriangle(String),

    #[error("inconsistent grading shift at step {step}: declared {declared}, expected {expected}")]
    InconsistentShift { step: usize, declared: String, expected: String },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
