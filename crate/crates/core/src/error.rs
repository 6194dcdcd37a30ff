use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("amplitudes are not normalized: |a|^2 + |b|^2 = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("{what} = {value} is outside {range}")]
    OutOfRange {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("register of {requested} qubits exceeds the capacity of {max}")]
    CapacityExceeded { requested: usize, max: usize },

    #[error("expected {expected} amplitudes, got {actual}")]
    AmplitudeCount { expected: usize, actual: usize },

    #[error("non-finite amplitude at index {0}")]
    NonFinite(usize),

    #[error("qubit label {0} appears more than once")]
    DuplicateLabel(usize),

    #[error("qubit label {0} is not in the register")]
    UnknownQubitLabel(usize),

    #[error("operation needs a {expected}-qubit state, got {actual}")]
    WrongQubitCount { expected: usize, actual: usize },

    #[error("basis is not orthonormal (max Gram deviation {deviation:e})")]
    BasisNotOrthonormal { deviation: f64 },

    #[error(
        "no Bell basis with exponents <= {r_max} gives two correctable outcomes on pair {pair:?}"
    )]
    NoMatchedBasis { pair: (usize, usize), r_max: u64 },

    #[error("closed forms exist for n <= 3 only, got n = {0}")]
    UnsupportedDepth(usize),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad user input rather than a failed computation.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Io(_) | Error::Json(_))
    }
}
