use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("exponent {exponent:?} is not dominated by {bound:?}")]
    Domination { exponent: Vec<u32>, bound: Vec<u32> },

    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,

    #[error("denominator is not stable: min sampled modulus {min_modulus:e} at {witness:?}")]
    Unstable { min_modulus: f64, witness: Vec<(f64, f64)> },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("singular point: denominator modulus {modulus:e} below {threshold:e}")]
    SingularPoint { modulus: f64, threshold: f64 },

    #[error("root cancellation is ambiguous: pair distance {distance:e} against tolerance {tolerance:e}")]
    ReductionUnstable { distance: f64, tolerance: f64 },

    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("reconstruction failed: {0}")]
    ReconstructionFailure(String),

    #[error("value disc radius {radius:e} is below {threshold:e}; data is nearly unique")]
    NearUnique { radius: f64, threshold: f64 },

    #[error("inapplicable: {0}")]
    Inapplicable(String),

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}
