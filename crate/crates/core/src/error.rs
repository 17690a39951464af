use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular input: {0}")]
    SingularInput(String),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("regime error: {0}")]
    Regime(String),

    #[error("accuracy target not reached: {what} (achieved estimate {achieved:e})")]
    Accuracy { what: String, achieved: f64 },

    #[error("positive definiteness lost at degree {degree} with {bits} bits; increase --bits")]
    Precision { degree: usize, bits: u32 },

    #[error("particle number {n} is smaller than the symmetry order {d}")]
    Underflow { n: usize, d: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
