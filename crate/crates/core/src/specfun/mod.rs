//! Extended-precision special functions: `ln Γ`, `ln G` (Barnes), Bernoulli
//! numbers, ζ'(-1) and the regularised incomplete gamma function.
//!
//! Everything works at the precision of its argument. Large-argument
//! series are summed only once the argument has been shifted past a
//! threshold where the smallest series term is below the working
//! precision; the threshold grows with precision and is never smaller
//! than the configured value.

mod barnes;
mod bernoulli;
mod gamma;
mod incgamma;
mod zeta;

pub use barnes::{barnes_asymptotic_series, log_barnes_g, log_barnes_g_with_threshold};
pub use bernoulli::bernoulli;
pub use gamma::{gamma_asymptotic_series, log_gamma, log_gamma_with_threshold};
pub use incgamma::{regularized_gamma_p, regularized_gamma_q};
pub use zeta::zeta_prime_minus_one;

pub(crate) use barnes::ln_barnes_g_float;
pub(crate) use gamma::ln_gamma_float;

pub use rug::Rational;

/// Default argument shift threshold for the asymptotic series.
pub const DEFAULT_SHIFT_THRESHOLD: f64 = 30.0;

/// Extra bits carried internally and rounded away on return.
pub(crate) const GUARD_BITS: u32 = 48;

/// The smallest term of the Stirling/Barnes series at argument `x` is about
/// `e^{-2πx}`; pick `x` so that term is below `2^-(bits+8)`.
pub(crate) fn shift_threshold(bits: u32, configured: f64) -> f64 {
    let needed = (f64::from(bits + 8) * std::f64::consts::LN_2 / (2.0 * std::f64::consts::PI)).ceil() + 1.0;
    configured.max(needed)
}

/// `f64` convenience: `ln Γ(x)` evaluated at 128 bits.
pub fn log_gamma_f64(x: f64) -> f64 {
    log_gamma(&crate::BigReal::from_f64(x, 128)).map(|v| v.to_f64()).unwrap_or(f64::NAN)
}

/// `f64` convenience: `ln G(x)` evaluated at 128 bits.
pub fn log_barnes_g_f64(x: f64) -> f64 {
    log_barnes_g(&crate::BigReal::from_f64(x, 128)).map(|v| v.to_f64()).unwrap_or(f64::NAN)
}
