use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial is not exactly divisible")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("series constant term must be 1")]
    NotInvertible,
    #[error("variable s{0} lies outside the variable universe (max s{1})")]
    OutsideUniverse(usize, usize),
    #[error("type sequence has no entry s{0}")]
    SpecTooShort(usize),
    #[error("operation not supported for {0}")]
    Unsupported(&'static str),
    #[error("row {requested} exceeds the built row bound {bound}")]
    OutOfRange { requested: i64, bound: usize },
    #[error("hankel query needs rows up to {needed}, table has {available}")]
    InsufficientRows { needed: i64, available: usize },
    #[error("matrix of order {0} is too large for cofactor expansion")]
    TooLarge(usize),
    #[error("fraction-free elimination produced an inexact division")]
    InternalNonExactDivision,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
