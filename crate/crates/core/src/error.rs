use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("unknown standard lattice `{0}`")]
    UnknownLattice(String),

    #[error("parameter n = {0} is out of range (n >= 2 required)")]
    BadN(i64),

    #[error("zero vector not allowed here")]
    ZeroVector,

    #[error("reflection in an isotropic vector")]
    IsotropicReflection,

    #[error("reflection in {vector} is not integral (norm {norm} does not divide 2*div = {twice_div})")]
    NonIntegralReflection {
        vector: String,
        norm: BigInt,
        twice_div: BigInt,
    },

    #[error("matrix is not an isometry of the lattice")]
    NotIsometry,

    #[error("discriminant group is not cyclic (invariant factors {0:?})")]
    NotCyclic(Vec<BigInt>),

    #[error("isometry acts on the discriminant group by u = {u} mod {order}, not by +-1")]
    ChiUndefined { u: BigInt, order: BigInt },

    #[error("nothing found within bound {bound} at stage `{stage}`")]
    SearchExhausted { stage: String, bound: i64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("plane is not positive definite: {0}")]
    NotPositive(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn dims(expected: impl ToString, got: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            got: got.to_string(),
        }
    }
}
