use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("expected {expected} entries, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("{what} did not converge")]
    NoConvergence { what: &'static str },

    #[error("matrix is numerically singular")]
    Singular,

    #[error("spectra too close for a unique Sylvester solution (gap {gap:e} <= {threshold:e})")]
    SpectraOverlap { gap: f64, threshold: f64 },

    #[error("restricted block T1 is not invertible (min singular value {sigma_min:e})")]
    T1Singular { sigma_min: f64 },

    #[error("sequence of length {len} is too short to decide its order")]
    SequenceTooShort { len: usize },

    #[error("integer coefficients overflow for k={k}, m={m}, n={n}; exact big-integer arithmetic required")]
    ExactArithmeticRequired { k: usize, m: usize, n: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown catalog id `{0}`")]
    UnknownExample(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
