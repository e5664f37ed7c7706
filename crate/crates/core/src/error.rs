use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("atom count must be at least 1")]
    ZeroAtoms,

    #[error("parameter `{name}` must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("size mismatch: {left} atoms vs {right} atoms")]
    SizeMismatch { left: usize, right: usize },

    #[error("amplitude vector has length {got}, expected {expected}")]
    AmplitudeLength { got: usize, expected: usize },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("{what} supports at most {max} atoms, got {n}")]
    Capacity {
        what: &'static str,
        n: usize,
        max: usize,
    },

    #[error("expected {expected} single-atom factors, got {got}")]
    FactorCount { got: usize, expected: usize },

    #[error("single-atom factor {index} is not normalized (|g|^2 + |e|^2 = {norm_sqr})")]
    UnnormalizedFactor { index: usize, norm_sqr: f64 },

    #[error("cat superposition has norm {norm}; branches are not orthogonal enough to form a normalized state")]
    CatNotNormalized { norm: f64 },

    #[error("state lies outside the symmetric subspace (residual {residual:e})")]
    OutOfSubspace { residual: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("invalid beta grid: {0}")]
    InvalidGrid(String),

    #[error("invalid mixture: {0}")]
    InvalidMixture(String),
}
