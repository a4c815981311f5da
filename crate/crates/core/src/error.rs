use thiserror::Error;

use crate::construct::Violation;

#[derive(Debug, Error)]
pub enum GesError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cyclotomic order must be at least 1, got {0}")]
    InvalidOrder(u64),
    #[error("operands live in different cyclotomic fields (orders {left} and {right})")]
    FieldMismatch { left: u64, right: u64 },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix shape mismatch: {0}")]
    Shape(String),
    #[error("invalid construction parameters: {}", format_violations(.0))]
    InvalidParams(Vec<Violation>),
    #[error("digit {digit} at position {position} is out of range for local dimension {dim}")]
    DigitOutOfRange { position: usize, digit: usize, dim: usize },
    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),
    #[error("spanning check needs at least {needed} rows, matrix has {rows}")]
    TooFewRows { rows: usize, needed: usize },
    #[error("scale factors are not exact; exact arithmetic is unavailable for this instance")]
    InexactScales,
    #[error("operator is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),
    #[error("numerical rank {numeric} disagrees with exact rank {exact}")]
    RankMismatch { numeric: usize, exact: usize },
    #[error("invalid exponent table: {0}")]
    InvalidTable(String),
    #[error("invalid scale factor: {0}")]
    InvalidScale(String),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, GesError>;
