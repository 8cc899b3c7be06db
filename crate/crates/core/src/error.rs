use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported root system type `{0}`")]
    UnsupportedType(String),

    #[error("dimension mismatch: expected rank {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("simple reflection index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("{0} is not in the Weyl group orbit of rho")]
    NotInOrbit(String),

    #[error("weight {0} is not dominant")]
    NotDominant(String),

    #[error("weight {0} is not integral")]
    NotIntegral(String),

    #[error("element is not an involution")]
    NotInvolution,

    #[error("involution fixes fundamental weights {0:?}; the scattered sieve needs I(s) empty")]
    FixedWeights(Vec<usize>),

    #[error("malformed data: {0}")]
    Data(String),

    #[error("missing string constants: {0:?}")]
    MissingConstants(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
