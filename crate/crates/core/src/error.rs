use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("torus point is not generic: {0}")]
    NonGenericPoint(String),

    #[error("weight {weight:?} exceeds the degree budget ({budget})")]
    DegreeBudget { weight: Vec<u32>, budget: u32 },

    #[error("weight {0:?} has odd parts; Grassmannian weights must be even")]
    OddWeight(Vec<u32>),

    #[error("eigenvalue collision between {a:?} and {b:?} that no commuting operator separates")]
    EigenvalueCollision { a: Vec<u32>, b: Vec<u32> },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
