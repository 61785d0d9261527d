use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate lattice: {0}")]
    DegenerateLattice(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("enumeration capacity exceeded: more than {cap} vectors within the requested radius")]
    Capacity { cap: usize },

    #[error("primitivity is undefined for the zero vector")]
    ZeroVector,

    #[error("vectors are not H-linearly independent")]
    Dependent,

    #[error("lattice determinant is {det}, expected 1")]
    NotUnimodular { det: String },

    #[error("support condition violated: {0}; use a smaller alpha")]
    SupportCondition(String),

    #[error("unsupported test function: {0}")]
    Unsupported(String),

    #[error("body is not invariant under the Hurwitz unit group: {0}")]
    NotInvariant(String),

    #[error("value out of supported range: {0}")]
    Range(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
