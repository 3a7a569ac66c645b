use core::fmt;

use crate::model::TupleId;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    DimensionMismatch { expected: usize, found: usize },
    /// Datasets need at least two attributes.
    DimensionTooSmall(usize),
    ValueOutOfRange { id: TupleId, index: usize, value: f64 },
    DuplicateId(TupleId),
    InvalidWeights,
    InfeasibleConstraints,
    LpIterationLimit(usize),
    InvalidParameter(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimensionality mismatch: expected {expected}, found {found}")
            }
            Error::DimensionTooSmall(d) => write!(f, "dimensionality must be at least 2, got {d}"),
            Error::ValueOutOfRange { id, index, value } => {
                write!(f, "tuple {id}: attribute {} = {value} is not a finite value in [0,1]", index + 1)
            }
            Error::DuplicateId(id) => write!(f, "duplicate tuple id {id}"),
            Error::InvalidWeights => {
                f.write_str("weights must be non-negative and sum to 1")
            }
            Error::InfeasibleConstraints => f.write_str("infeasible constraints"),
            Error::LpIterationLimit(n) => write!(f, "simplex did not converge within {n} pivots"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
