use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} parameters, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid grid box: lo {lo:?} is not below hi {hi:?}")]
    InvalidBox { lo: Vec<i64>, hi: Vec<i64> },

    #[error("invalid cube: x {x:?} is not below y {y:?}")]
    InvalidCube { x: Vec<i64>, y: Vec<i64> },

    #[error("point {0:?} lies outside the grid box")]
    OutsideBox(Vec<i64>),

    #[error("empty module not representable")]
    EmptyModule,

    #[error("invalid module ({0} violations)")]
    InvalidModule(usize),

    #[error("not a generalized rank invariant: nonzero value at {u:?}|{v:?}")]
    NotRankInvariant { u: Vec<i64>, v: Vec<i64> },

    #[error("index outside N_+: {0}")]
    IndexOutsideDomain(String),

    #[error("recovery requires positive summand data")]
    NonPositiveSummand,

    #[error("signed sets unsupported")]
    SignedSetUnsupported,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("exponent overflow for k = {0}")]
    ExponentOverflow(u64),
}
