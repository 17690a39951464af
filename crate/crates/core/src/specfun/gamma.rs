use rug::{Float, Integer};

use super::bernoulli::even_bernoulli_floats;
use super::{shift_threshold, GUARD_BITS};
use crate::bigreal::BigReal;
use crate::error::{Error, Result};

/// Arguments up to this size that are exact integers go through `ln((x-1)!)`.
const EXACT_FACTORIAL_LIMIT: u32 = 2048;

/// `Σ_{k≥1} coef(k) · B_{2k+shift} · z^{-(2k-1+offset)}` style tails share this driver.
///
/// `term(k, b)` returns the k-th term given the Bernoulli value it needs;
/// with `max_terms == None` the sum stops at the smallest term or once a
/// term drops below `2^-(prec+8)` relative to the running sum.
pub(crate) fn asymptotic_tail<F>(prec: u32, max_terms: Option<usize>, bernoulli_offset: usize, mut term: F) -> Float
where
    F: FnMut(usize, &Float) -> Float,
{
    let explicit = max_terms.is_some();
    let limit = max_terms.unwrap_or(usize::MAX);
    let mut have = if explicit { limit + bernoulli_offset } else { (0.35 * f64::from(prec + 8)).ceil() as usize + 8 };
    let mut table = even_bernoulli_floats(have.max(1), prec);
    let mut sum = Float::with_val(prec, 0);
    let mut prev: Option<Float> = None;
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32) - 8));
    let mut k = 1;
    while k <= limit {
        let idx = k - 1 + bernoulli_offset;
        if idx >= table.len() {
            have *= 2;
            table = even_bernoulli_floats(have, prec);
        }
        let t = term(k, &table[idx]);
        if !explicit {
            let mag = Float::with_val(prec, t.abs_ref());
            if let Some(p) = &prev {
                if mag > *p {
                    break;
                }
            }
            let stop = mag <= Float::with_val(prec, sum.abs_ref()) * &eps;
            sum += &t;
            if stop || t.is_zero() {
                break;
            }
            prev = Some(mag);
        } else {
            sum += &t;
        }
        k += 1;
    }
    sum
}

/// `(z - 1/2) ln z - z + ln(2π)/2 + Σ B_{2k} / (2k(2k-1) z^{2k-1})`.
pub(crate) fn stirling_float(z: &Float, max_terms: Option<usize>) -> Float {
    let prec = z.prec();
    let ln_z = Float::with_val(prec, z.ln_ref());
    let half_ln_2pi = BigReal::ln_2pi(prec).into_float() / 2u32;
    let mut base = Float::with_val(prec, z - 0.5f64) * &ln_z;
    base -= z;
    base += &half_ln_2pi;

    let inv_z2 = Float::with_val(prec, z.square_ref()).recip();
    let mut zpow = Float::with_val(prec, z.recip_ref());
    let tail = asymptotic_tail(prec, max_terms, 0, |k, b| {
        let kk = 2 * k as u64;
        let t = Float::with_val(prec, b * &zpow) / (kk * (kk - 1));
        zpow *= &inv_z2;
        t
    });
    base + tail
}

/// `ln Γ(x)` for `x > 0` at the precision of `x`.
pub(crate) fn ln_gamma_float(x: &Float, threshold: f64) -> Float {
    let prec = x.prec();
    if x.is_integer() && *x <= EXACT_FACTORIAL_LIMIT {
        let n = x.to_u32_saturating().unwrap_or(1);
        let fact = Integer::from(Integer::factorial(n.saturating_sub(1)));
        return Float::with_val(prec, &fact).ln();
    }
    let thr = shift_threshold(prec, threshold);
    if *x >= thr {
        return stirling_float(x, None);
    }
    let shift = Float::with_val(prec, thr - x).ceil().to_u32_saturating().unwrap_or(0);
    let mut prod = Float::with_val(prec, 1);
    let mut y = x.clone();
    for _ in 0..shift {
        prod *= &y;
        y += 1u32;
    }
    stirling_float(&y, None) - prod.ln()
}

/// `ln Γ(x)` correct to a few ulp at the precision of `x`.
///
/// Shifts the argument upward with `Γ(x+1) = xΓ(x)` until the Stirling
/// series converges to the working precision, then sums the series under
/// the smallest-term stopping rule.
pub fn log_gamma(x: &BigReal) -> Result<BigReal> {
    log_gamma_with_threshold(x, super::DEFAULT_SHIFT_THRESHOLD)
}

pub fn log_gamma_with_threshold(x: &BigReal, threshold: f64) -> Result<BigReal> {
    if !(x.signum() > 0) {
        return Err(Error::Domain(format!("log_gamma needs x > 0, got {}", x.to_f64())));
    }
    let bits = x.bits();
    let xw = Float::with_val(bits + GUARD_BITS, x.as_float());
    let r = ln_gamma_float(&xw, threshold);
    Ok(BigReal::from_float(Float::with_val(bits, r)))
}

/// The Stirling series for `ln Γ(z)` truncated after `terms` Bernoulli terms, with no shift.
pub fn gamma_asymptotic_series(z: &BigReal, terms: usize) -> Result<BigReal> {
    if !(z.signum() > 0) {
        return Err(Error::Domain(format!("series needs z > 0, got {}", z.to_f64())));
    }
    let bits = z.bits();
    let zw = Float::with_val(bits + GUARD_BITS, z.as_float());
    let r = stirling_float(&zw, Some(terms));
    Ok(BigReal::from_float(Float::with_val(bits, r)))
}
