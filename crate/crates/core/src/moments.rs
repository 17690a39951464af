//! Moments `E|det(G_N - a)|^γ` of the characteristic polynomial of an
//! `N × N` complex Ginibre matrix (entries of variance `1/N`).
//!
//! The exact route is the norm product
//! `E|det(G_N - a)|^{2c} = N!/Z_N^Gin · Π_{j<N} h_j^{(c)}(a)`. Only `a ≥ 0`
//! is accepted; the law is rotation invariant so callers pass `|a|`.

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::exact::{ln_factorial, ln_ginibre_float, log_norm_sums, ortho_norms};
use crate::specfun::{bernoulli, log_barnes_g, GUARD_BITS};

/// Largest number of `1/N` corrections [`log_moment_asymptotic_bulk`] will add.
pub const MAX_CORRECTIONS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentQuery {
    pub n: usize,
    pub a: f64,
    pub gamma: f64,
}

impl MomentQuery {
    pub fn new(n: usize, a: f64, gamma: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("N must be at least 1".into()));
        }
        if !(a >= 0.0) || !a.is_finite() {
            return Err(Error::Domain(format!("a must be finite and nonnegative, got {a}")));
        }
        if !(gamma > -2.0) || !gamma.is_finite() {
            return Err(Error::Domain(format!("gamma must exceed -2, got {gamma}")));
        }
        Ok(Self { n, a, gamma })
    }

    /// Exponent `c = γ/2` of `|z - a|^{2c}`.
    pub fn c(&self) -> f64 {
        self.gamma / 2.0
    }
}

/// `log E|det(G_N - a)|^γ` from the orthogonal norms.
pub fn log_moment_exact(q: &MomentQuery, bits: u32) -> Result<BigReal> {
    if q.gamma == 0.0 {
        return Ok(BigReal::zero(bits));
    }
    let w = bits + GUARD_BITS;
    let c = Float::with_val(w, q.gamma) / 2u32;
    let a = Float::with_val(w, q.a);
    let (sum, _) = log_norm_sums(q.n, &c, &a, false, w)?;
    let v = ln_factorial(q.n, w) - ln_ginibre_float(q.n, w) + sum;
    Ok(BigReal::from_float(Float::with_val(bits, v)))
}

fn big(v: f64, bits: u32) -> BigReal {
    BigReal::from_f64(v, bits + GUARD_BITS)
}

/// `a = 0`: `-(γ/2) N log N + log G(N+1+γ/2) - log G(N+1) - log G(1+γ/2)`.
pub fn log_moment_a0_closed(n: usize, gamma: f64, bits: u32) -> Result<BigReal> {
    MomentQuery::new(n, 0.0, gamma)?;
    if gamma == 0.0 {
        return Ok(BigReal::zero(bits));
    }
    let c = big(gamma, bits) / 2i64;
    let nb = BigReal::from_i64(n as i64, bits + GUARD_BITS);
    let v =
        -(&c * &nb * nb.ln()) + log_barnes_g(&(&nb + &c + 1i64))? - log_barnes_g(&(&nb + 1i64))? - log_barnes_g(&(&c + 1i64))?;
    Ok(v.with_bits(bits))
}

/// Leading behaviour for `a > 1`: `γ N log a - (γ²/4) log((a²-1)/a²)`.
pub fn log_moment_asymptotic_outside(n: usize, a: f64, gamma: f64, bits: u32) -> Result<BigReal> {
    MomentQuery::new(n, a, gamma)?;
    if !(a > 1.0) {
        return Err(Error::Regime(format!("outside expansion needs a > 1, got {a}")));
    }
    let (ab, g) = (big(a, bits), big(gamma, bits));
    let a2 = ab.square();
    let v = &g * n as i64 * ab.ln() - g.square() / 4i64 * ((&a2 - 1i64) / &a2).ln();
    Ok(v.with_bits(bits))
}

/// `𝒞_m` for a rational exponent, exactly.
pub fn correction_coefficient_exact(m: usize, gamma: &Rational) -> Rational {
    assert!(m >= 1, "correction index starts at 1");
    let half = Rational::from(gamma / 2u32);
    let pow = |e: usize| -> Rational { Rational::from(rug::ops::Pow::pow(&half, e as u32)) };
    let mi = m as u64;
    let sq = Rational::from(gamma * gamma);
    let first = sq / Integer::from(4 * mi * (mi + 1) * (mi + 2)) - Rational::from((1u32, 12 * mi as u32));
    let mut out = first * pow(m);
    if m % 2 == 0 {
        out = -out;
    }
    let mut second = Rational::new();
    for k in 1..=(m - 1) / 2 {
        let denom = Integer::from(4 * (k * (k + 1)) as u64) * Integer::from(Integer::factorial(2 * k as u32 - 1));
        let falling = Integer::from(Integer::factorial(m as u32 - 1)) / Integer::from(Integer::factorial((m - 2 * k) as u32));
        second += bernoulli(2 * k + 2) / denom * falling * pow(m - 2 * k);
    }
    if m % 2 == 1 {
        second = -second;
    }
    out + second
}

/// `𝒞_m` at `γ` (taken as the exact binary value of the `f64`).
pub fn correction_coefficient(m: usize, gamma: f64, bits: u32) -> Result<BigReal> {
    if m == 0 {
        return Err(Error::Domain("correction index starts at 1".into()));
    }
    let g = Rational::from_f64(gamma).ok_or_else(|| Error::Domain(format!("gamma must be finite, got {gamma}")))?;
    Ok(BigReal::from_rational(&correction_coefficient_exact(m, &g), bits))
}

/// Bulk expansion for `0 ≤ a < 1` with `corrections` terms of the `1/N` series:
/// `(γ/2)(a²-1)N + (γ²/8) log N + (γ/4) log 2π - log G(1+γ/2) + Σ 𝒞_m N^{-m}`.
pub fn log_moment_asymptotic_bulk(n: usize, a: f64, gamma: f64, corrections: usize, bits: u32) -> Result<BigReal> {
    MomentQuery::new(n, a, gamma)?;
    if !(a < 1.0) {
        return Err(Error::Regime(format!("bulk expansion needs a < 1, got {a}")));
    }
    if corrections > MAX_CORRECTIONS {
        return Err(Error::Unsupported(format!("at most {MAX_CORRECTIONS} corrections, got {corrections}")));
    }
    if gamma == 0.0 {
        return Ok(BigReal::zero(bits));
    }
    let w = bits + GUARD_BITS;
    let (ab, g) = (big(a, bits), big(gamma, bits));
    let nb = BigReal::from_i64(n as i64, w);
    let mut v = &g / 2i64 * (ab.square() - 1i64) * &nb + g.square() / 8i64 * nb.ln() + &g / 4i64 * BigReal::ln_2pi(w)
        - log_barnes_g(&(&g / 2i64 + 1i64))?;
    let inv = nb.recip();
    let mut p = inv.clone();
    for m in 1..=corrections {
        v += correction_coefficient(m, gamma, w)? * &p;
        p *= &inv;
    }
    Ok(v.with_bits(bits))
}

/// `log_moment_a0_closed(N, γ) + (γ/2) a² N`, exact up to `O(N^{-∞})` in the bulk.
pub fn log_moment_unified_bulk(n: usize, a: f64, gamma: f64, bits: u32) -> Result<BigReal> {
    MomentQuery::new(n, a, gamma)?;
    if !(a < 1.0) {
        return Err(Error::Regime(format!("bulk formula needs a < 1, got {a}")));
    }
    let base = log_moment_a0_closed(n, gamma, bits + GUARD_BITS)?;
    let ab = big(a, bits);
    Ok((base + big(gamma, bits) / 2i64 * ab.square() * n as i64).with_bits(bits))
}

/// Large-`N` form of `log h_N^{(c)}(a)` at scale `N`:
/// `-N + ½ log(2π/N)`, plus `2c log a` when `a > 1`.
pub fn norm_asymptotic(n: usize, a: f64, c: f64, bits: u32) -> Result<BigReal> {
    if n == 0 || !(c > -1.0) || !(a >= 0.0) {
        return Err(Error::Domain(format!("need N ≥ 1, c > -1, a ≥ 0, got N = {n}, c = {c}, a = {a}")));
    }
    if a == 1.0 {
        return Err(Error::Regime("the edge a = 1 has no formula here".into()));
    }
    let w = bits + GUARD_BITS;
    let nb = BigReal::from_i64(n as i64, w);
    let mut v = -&nb + (BigReal::ln_2pi(w) - nb.ln()) / 2i64;
    if a > 1.0 {
        v += big(c, bits) * 2i64 * big(a, bits).ln();
    }
    Ok(v.with_bits(bits))
}

/// Coefficient of `z^{N-1}` in the monic degree-`N` polynomial orthogonal for
/// `|z - a|^{2c} e^{-N|z|²}`.
pub fn subleading_coefficient(n: usize, c: f64, a: f64, bits: u32) -> Result<BigReal> {
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let table = ortho_norms(n, &BigReal::from_f64(c, bits), &BigReal::from_f64(a, bits), n, bits)?;
    Ok(table.subleading(n).cloned().unwrap_or_else(|| BigReal::zero(bits)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BITS: u32 = 256;

    fn q(n: usize, a: f64, g: f64) -> MomentQuery {
        MomentQuery::new(n, a, g).unwrap()
    }

    #[test]
    fn exact_small_cases() {
        assert!(log_moment_exact(&q(7, 0.3, 0.0), BITS).unwrap().is_zero());
        assert!(log_moment_exact(&q(1, 0.0, 2.0), BITS).unwrap().abs() < 1e-70);
        // ∫ |z - 2|² e^{-|z|²} d²z/π = 1 + 4
        let v = log_moment_exact(&q(1, 2.0, 2.0), BITS).unwrap();
        assert!((v.to_f64() - 5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn a0_closed_form_agrees_with_norms() {
        assert!(log_moment_a0_closed(1, 2.0, BITS).unwrap().abs() < 1e-70);
        for g in [-1.5, 0.8, 3.0] {
            for n in [1usize, 2, 5, 11, 25] {
                let a = log_moment_a0_closed(n, g, BITS).unwrap();
                let b = log_moment_exact(&q(n, 0.0, g), BITS).unwrap();
                assert!((a - b).abs() < 1e-15, "γ = {g}, N = {n}");
            }
        }
    }

    #[test]
    fn correction_values() {
        let r = |n: i64, d: i64| Rational::from((n, d));
        assert_eq!(correction_coefficient_exact(1, &r(2, 1)), r(1, 12));
        assert_eq!(correction_coefficient_exact(2, &r(2, 1)), r(0, 1));
        assert_eq!(correction_coefficient_exact(3, &r(1, 1)), r(7, 5760));
        // low-order polynomials in γ
        for g in [r(-3, 2), r(1, 3), r(7, 5), r(5, 2)] {
            let g2 = Rational::from(&g * &g);
            let g4 = Rational::from(&g2 * &g2);
            let c1 = (&g * Rational::from(&g2 - 2u32)) / 48u32;
            let c2 = -(&g2 * Rational::from(&g2 - 4u32)) / 384u32;
            let c3 = (&g * (Rational::from(24u32) - Rational::from(&g2 * 20u32) + Rational::from(&g4 * 3u32))) / 5760u32;
            let c4 = -(&g2 * (Rational::from(24u32) - Rational::from(&g2 * 10u32) + &g4)) / 7680u32;
            assert_eq!(correction_coefficient_exact(1, &g), c1);
            assert_eq!(correction_coefficient_exact(2, &g), c2);
            assert_eq!(correction_coefficient_exact(3, &g), c3);
            assert_eq!(correction_coefficient_exact(4, &g), c4);
        }
    }

    #[test]
    fn gamma_zero_is_zero_everywhere() {
        assert!(log_moment_asymptotic_outside(10, 1.5, 0.0, BITS).unwrap().is_zero());
        assert!(log_moment_asymptotic_bulk(10, 0.5, 0.0, 6, BITS).unwrap().is_zero());
        assert!(log_moment_unified_bulk(10, 0.5, 0.0, BITS).unwrap().is_zero());
        assert!(log_moment_a0_closed(10, 0.0, BITS).unwrap().is_zero());
    }

    #[test]
    fn regime_checks() {
        assert!(matches!(log_moment_asymptotic_outside(5, 0.9, 1.0, BITS), Err(Error::Regime(_))));
        assert!(matches!(log_moment_asymptotic_bulk(5, 1.2, 1.0, 0, BITS), Err(Error::Regime(_))));
        assert!(matches!(log_moment_unified_bulk(5, 1.0, 1.0, BITS), Err(Error::Regime(_))));
        assert!(matches!(norm_asymptotic(5, 1.0, 0.5, BITS), Err(Error::Regime(_))));
        assert!(matches!(log_moment_asymptotic_bulk(5, 0.2, 1.0, 13, BITS), Err(Error::Unsupported(_))));
        assert!(MomentQuery::new(3, 0.1, -2.0).is_err());
    }

    #[test]
    fn unified_bulk_is_super_polynomially_accurate() {
        assert_eq!(log_moment_unified_bulk(9, 0.0, 1.3, BITS).unwrap(), log_moment_a0_closed(9, 1.3, BITS).unwrap());
        let e = log_moment_exact(&q(30, 0.5, 2.0), BITS).unwrap();
        let u = log_moment_unified_bulk(30, 0.5, 2.0, BITS).unwrap();
        assert!((e - u).abs() < 1e-6);
    }

    #[test]
    fn outside_large_a_limit() {
        // value - γ N log a → 0 as a → ∞
        let v = log_moment_asymptotic_outside(10, 1e6, 1.5, BITS).unwrap();
        let lead = 1.5 * 10.0 * 1e6f64.ln();
        assert!((v.to_f64() - lead).abs() < 1e-11);
    }

    #[test]
    fn subleading_trivial_cases() {
        assert!(subleading_coefficient(6, 0.7, 0.0, BITS).unwrap().abs() < 1e-60);
        assert!(subleading_coefficient(6, 0.0, 0.8, BITS).unwrap().abs() < 1e-60);
        let c0 = norm_asymptotic(12, 0.4, 0.0, BITS).unwrap();
        let c1 = norm_asymptotic(12, 1.7, 0.0, BITS).unwrap();
        assert_eq!(c0, c1);
    }

    fn fd_derivative(n: usize, c: f64, a: f64, h: f64) -> f64 {
        let up = log_moment_exact(&q(n, a + h, 2.0 * c), BITS).unwrap();
        let dn = log_moment_exact(&q(n, a - h, 2.0 * c), BITS).unwrap();
        ((up - dn) / (2.0 * h)).to_f64()
    }

    #[test]
    fn differential_identity() {
        for (n, c, a) in [(20usize, 1.0, 1.5), (8, 0.6, 0.4), (12, -0.4, 1.1), (15, 2.5, 0.9)] {
            let fd = fd_derivative(n, c, a, 1e-4);
            let s = subleading_coefficient(n, c, a, BITS).unwrap().to_f64();
            let rel = (fd - 2.0 * n as f64 * s).abs() / fd.abs();
            assert!(rel < 1e-4, "N = {n}, c = {c}, a = {a}: {fd} vs {}", 2.0 * n as f64 * s);
        }
    }

    #[test]
    fn outside_derivative() {
        let (n, c, a) = (60usize, 1.0, 1.6);
        let fd = fd_derivative(n, c, a, 1e-4);
        let want = 2.0 * c / a * n as f64 + 2.0 * c * c / (a * (1.0 - a * a));
        assert!((fd - want).abs() < 5.0 / n as f64, "{fd} vs {want}");
    }

    #[test]
    fn nondecreasing_in_a_for_positive_gamma() {
        for g in [0.5, 2.0] {
            let mut prev = f64::NEG_INFINITY;
            for k in 0..12 {
                let v = log_moment_exact(&q(10, 0.15 * k as f64, g), BITS).unwrap().to_f64();
                assert!(v >= prev);
                prev = v;
            }
        }
    }
}
