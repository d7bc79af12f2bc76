use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("dimension {dim} exceeds the cap of {cap}")]
    SizeCap { dim: usize, cap: usize },

    #[error("eigensolver did not converge for dim {dim} within {max_iter} sweeps (off-diagonal residual {residual:e})")]
    NoConvergence {
        dim: usize,
        max_iter: usize,
        residual: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("probability vector has length {probs} but {states} Eve states were given")]
    LengthMismatch { probs: usize, states: usize },

    #[error("P({index}) = {value} is negative")]
    NegativeProbability { index: usize, value: f64 },

    #[error("probabilities sum to {0}, not 1")]
    ProbabilitySum(f64),

    #[error("Eve state {index} is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { index: usize, min_eigenvalue: f64 },

    #[error("Eve state {index} has trace {trace}, not 1")]
    TraceNotOne { index: usize, trace: f64 },

    #[error("Eve state {index} has dimension {found}, expected {expected}")]
    EveDimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("empty alphabet")]
    EmptyAlphabet,

    #[error("Kraus operators are not trace preserving (deviation {0:e})")]
    NotTracePreserving(f64),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("invalid hash family: {0}")]
    InvalidFamily(String),

    #[error("family domain has {family} symbols but the state alphabet has {alphabet}")]
    AlphabetMismatch { family: usize, alphabet: usize },

    #[error("function table is invalid: {0}")]
    InvalidFunction(String),
}

pub type Result<T> = core::result::Result<T, Error>;
