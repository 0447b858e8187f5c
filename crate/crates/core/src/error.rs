use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("inexact polynomial division, remainder {remainder}")]
    InexactDivision { remainder: String },

    #[error("invalid rank {rank} for {family}: {bound}")]
    InvalidRank {
        family: &'static str,
        rank: usize,
        bound: &'static str,
    },

    #[error("unknown affine type tag `{0}`")]
    UnknownType(String),

    #[error("index {index} outside 0..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("weight has {got} coordinates, expected {expected}")]
    WeightShape { got: usize, expected: usize },

    #[error("unsupported highest weight {weight} for {family}: {reason}")]
    UnsupportedWeight {
        family: &'static str,
        weight: String,
        reason: String,
    },

    #[error("crystal is not perfect: {0}")]
    NotPerfect(String),

    #[error("invalid parameter: {0}")]
    Domain(String),

    #[error("guard tripped: {0}")]
    Guard(String),

    #[error("internal arithmetic error: {0}")]
    Internal(String),
}
