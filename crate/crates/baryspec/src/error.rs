use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("family `{family}` needs n >= {min}, got {n}")]
    FamilyTooSmall {
        family: String,
        min: usize,
        n: usize,
    },
    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),
    #[error("dimension {dim} exceeds dense solver limit {limit}; use inertia slicing")]
    DenseLimitExceeded { dim: usize, limit: usize },
    #[error("problem too large for exhaustive oracle: {0}")]
    OracleTooLarge(String),
    #[error("evaluation point {z} collides with a spectral atom (nearest at distance {dist:.3e})")]
    AtomCollision { z: f64, dist: f64 },
    #[error("empty spectrum")]
    EmptySpectrum,
    #[error("{0}")]
    Numerical(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
