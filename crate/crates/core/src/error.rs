use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("series is not invertible: leading coefficient is zero up to precision")]
    NotInvertible,

    #[error("insufficient precision: exponent {num24}/24 requested, series known below {prec24}/24")]
    InsufficientPrecision { num24: i64, prec24: i64 },

    #[error("invalid eta quotient: {0}")]
    InvalidEtaQuotient(String),

    #[error("unknown lattice `{0}`")]
    UnknownLattice(String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("evaluation would be irrational: {0}")]
    IrrationalEvaluation(String),

    #[error("cost guard exceeded: {0}")]
    CostGuard(String),

    #[error("no primitive representation of {0} as x^2 + 3y^2")]
    NoRepresentation(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
