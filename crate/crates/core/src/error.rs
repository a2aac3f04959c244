use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(
        "unstable filter: reflection coefficient {reflection} at order {order} has modulus >= 1"
    )]
    UnstableFilter { order: usize, reflection: f64 },

    #[error("impulse response did not reach the truncation tolerance within {cap} samples")]
    NonConvergent { cap: usize },

    #[error("window length {window} exceeds signal length {len}")]
    WindowTooLong { window: usize, len: usize },

    #[error("lag function is not symmetric: imaginary part {imag:e} vs real scale {real:e}")]
    AsymmetricLag { imag: f64, real: f64 },

    #[error("spectrum has zero total power")]
    EmptySpectrum,

    #[error("reference signal has zero energy")]
    ZeroSignal,

    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for errors that signal a broken output invariant rather than bad input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::InvariantViolation(_))
    }
}
