use rug::Float;

use super::gamma::{asymptotic_tail, ln_gamma_float};
use super::zeta::zeta_prime_minus_one_float;
use super::{shift_threshold, GUARD_BITS};
use crate::bigreal::BigReal;
use crate::error::{Error, Result};

/// `ln G(z+1) ≈ z²ln z/2 - 3z²/4 + z ln(2π)/2 - ln z/12 + ζ'(-1) + Σ B_{2k+2}/(4k(k+1) z^{2k})`.
pub(crate) fn barnes_series_float(z: &Float, max_terms: Option<usize>) -> Float {
    let prec = z.prec();
    let ln_z = Float::with_val(prec, z.ln_ref());
    let z2 = Float::with_val(prec, z.square_ref());
    let ln_2pi = BigReal::ln_2pi(prec).into_float();

    let mut base = Float::with_val(prec, &z2 * &ln_z) / 2u32;
    base -= Float::with_val(prec, &z2 * 3u32) / 4u32;
    base += Float::with_val(prec, &ln_2pi * z) / 2u32;
    base -= Float::with_val(prec, &ln_z / 12u32);
    base += zeta_prime_minus_one_float(prec);

    let inv_z2 = Float::with_val(prec, z2.recip_ref());
    let mut zpow = inv_z2.clone();
    // term k uses B_{2k+2}, i.e. index k in the B_2, B_4, … table
    let tail = asymptotic_tail(prec, max_terms, 1, |k, b| {
        let kk = k as u64;
        let t = Float::with_val(prec, b * &zpow) / (4 * kk * (kk + 1));
        zpow *= &inv_z2;
        t
    });
    base + tail
}

pub(crate) fn ln_barnes_g_float(x: &Float, threshold: f64) -> Float {
    let prec = x.prec();
    let thr = shift_threshold(prec, threshold);
    if *x >= thr {
        let z = Float::with_val(prec, x - 1u32);
        return barnes_series_float(&z, None);
    }
    // ln G(x) = ln G(x+k) - Σ_{i<k} ln Γ(x+i)
    //         = ln G(x+k) - k ln Γ(x) - Σ_{j≤k-2} (k-1-j) ln(x+j)
    let k = Float::with_val(prec, thr - x).ceil().to_u32_saturating().unwrap_or(0).max(1);
    let lg = ln_gamma_float(x, threshold);
    let mut weighted = Float::with_val(prec, 1);
    let mut y = x.clone();
    for j in 0..k.saturating_sub(1) {
        let e = k - 1 - j;
        weighted *= Float::with_val(prec, rug::ops::Pow::pow(&y, e));
        y += 1u32;
    }
    let top = Float::with_val(prec, x + k);
    let z = Float::with_val(prec, &top - 1u32);
    barnes_series_float(&z, None) - lg * k - weighted.ln()
}

/// `ln G(x)` for `x > 0` at the precision of `x`.
pub fn log_barnes_g(x: &BigReal) -> Result<BigReal> {
    log_barnes_g_with_threshold(x, super::DEFAULT_SHIFT_THRESHOLD)
}

pub fn log_barnes_g_with_threshold(x: &BigReal, threshold: f64) -> Result<BigReal> {
    if !(x.signum() > 0) {
        return Err(Error::Domain(format!("log_barnes_g needs x > 0, got {}", x.to_f64())));
    }
    let bits = x.bits();
    let xw = Float::with_val(bits + GUARD_BITS, x.as_float());
    let r = ln_barnes_g_float(&xw, threshold);
    Ok(BigReal::from_float(Float::with_val(bits, r)))
}

/// Truncation of the large-argument series for `ln G(z+1)` after `terms` Bernoulli terms.
pub fn barnes_asymptotic_series(z: &BigReal, terms: usize) -> Result<BigReal> {
    if !(z.signum() > 0) {
        return Err(Error::Domain(format!("series needs z > 0, got {}", z.to_f64())));
    }
    let bits = z.bits();
    let zw = Float::with_val(bits + GUARD_BITS, z.as_float());
    let r = barnes_series_float(&zw, Some(terms));
    Ok(BigReal::from_float(Float::with_val(bits, r)))
}
