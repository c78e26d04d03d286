use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("root of unity of order {denominator} does not embed in the {order}-th cyclotomic field")]
    UnsupportedOrder { denominator: i64, order: u32 },
    #[error("coefficient ring mismatch: {0}")]
    RingMismatch(String),
    #[error("series is not invertible: {0}")]
    NotInvertible(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("exponent {exponent} is not on the grain-{grain} lattice")]
    Grain { exponent: String, grain: i64 },
    #[error("operation needs a finite precision: {0}")]
    InfinitePrecision(String),
    #[error("connection matrix has a pole: {0}")]
    SingularConnection(String),
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error("{what} is not constant in q: first offending exponent {exponent}")]
    NotConstant { what: String, exponent: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}
