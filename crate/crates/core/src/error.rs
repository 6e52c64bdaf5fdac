use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition {0:?}: parts must be positive and weakly decreasing")]
    InvalidPartition(Vec<usize>),

    #[error("sequence is not weakly decreasing and non-negative: {0:?}")]
    NotSorted(Vec<f64>),

    #[error("negative entry {value} at index {index}")]
    NegativeEntry { index: usize, value: f64 },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("not a density operator: {0}")]
    NotDensity(String),

    #[error("state is not pure: Tr(psi^2) = {0}")]
    NotPure(f64),

    #[error("{what} = {value} exceeds the configured bound {bound}")]
    GuardExceeded {
        what: &'static str,
        value: u128,
        bound: u128,
    },

    #[error("vectors are not orthonormal (deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("eigensolver did not converge")]
    EigenFailure,

    #[error("zero denominator: {0}")]
    ZeroDenominator(String),

    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
