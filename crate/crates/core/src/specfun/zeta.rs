use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rug::Float;

use super::gamma::asymptotic_tail;
use super::{shift_threshold, DEFAULT_SHIFT_THRESHOLD, GUARD_BITS};
use crate::bigreal::BigReal;

/// ζ'(-1) through `ζ'(-1) = 1/12 - ln A`, with the Glaisher constant from the
/// Euler–Maclaurin expansion of `ln Π_{k≤M} k^k`:
///
/// `ln A = Σ_{k≤M} k ln k - (M²/2 + M/2 + 1/12) ln M + M²/4 + Σ_{j≥2} B_{2j} / (2j(2j-1)(2j-2) M^{2j-2})`.
fn compute(prec: u32) -> Float {
    let w = prec + GUARD_BITS;
    let m = shift_threshold(w, DEFAULT_SHIFT_THRESHOLD) as u32;
    let mut s = Float::with_val(w, 0);
    for k in 2..=m {
        s += Float::with_val(w, k).ln() * k;
    }
    let mf = Float::with_val(w, m);
    let ln_m = Float::with_val(w, mf.ln_ref());
    let m2 = Float::with_val(w, mf.square_ref());
    let coef = Float::with_val(w, &m2 / 2u32) + Float::with_val(w, &mf / 2u32) + Float::with_val(w, 1) / 12u32;
    let mut ln_a = s - coef * &ln_m + Float::with_val(w, &m2 / 4u32);

    let inv_m2 = Float::with_val(w, m2.recip_ref());
    let mut mpow = inv_m2.clone();
    // j = k + 1 runs from 2; the tail reads B_{2j} = B_{2k+2}
    ln_a += asymptotic_tail(w, None, 1, |k, b| {
        let j = (k + 1) as u64;
        let t = Float::with_val(w, b * &mpow) / (2 * j * (2 * j - 1) * (2 * j - 2));
        mpow *= &inv_m2;
        t
    });
    let zp = Float::with_val(w, 1) / 12u32 - ln_a;
    Float::with_val(prec, zp)
}

pub(crate) fn zeta_prime_minus_one_float(prec: u32) -> Float {
    static CACHE: OnceLock<Mutex<HashMap<u32, Float>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().expect("cache poisoned").get(&prec) {
        return v.clone();
    }
    let v = compute(prec);
    cache.lock().expect("cache poisoned").insert(prec, v.clone());
    v
}

/// ζ'(-1) = -0.1654211437004509292139… at `bits` of precision.
pub fn zeta_prime_minus_one(bits: u32) -> BigReal {
    BigReal::from_float(zeta_prime_minus_one_float(bits.max(crate::bigreal::MIN_BITS)))
}
