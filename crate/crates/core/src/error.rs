// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Failure while evaluating a map or an expression at a point.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("logarithm of non-positive value {0}")]
    LogDomain(f64),
    #[error("square root of negative value {0}")]
    SqrtDomain(f64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative base {base} raised to non-integer exponent {exponent}")]
    PowDomain { base: f64, exponent: f64 },
    #[error("non-finite result")]
    NonFinite,
    #[error("expected input of dimension {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("{0}")]
    Other(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("evaluation of selection {selection} failed at point {point:?}: {source}")]
    Evaluation {
        point: Vec<f64>,
        selection: usize,
        #[source]
        source: EvalError,
    },
    #[error("no sample point of radius {radius} around {center:?} lies in the domain")]
    EmptyNeighbourhood { center: Vec<f64>, radius: f64 },
    #[error(
        "no admissible z found in {attempts} domain samples; \
         the line direction appears orthogonal to the domain"
    )]
    NoAdmissibleZ { attempts: usize },
    #[error("{0}")]
    Parse(#[from] crate::expr::ParseError),
    #[error("malformed spec `{token}`: {reason}")]
    Spec { token: String, reason: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}
