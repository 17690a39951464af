//! Exact values of `log Z_n`: closed forms for the Ginibre, radial and dual
//! potentials, and the reduction of the lemniscate ensemble to `d` shifted
//! Ginibre-type weights.

pub mod gram;
mod ldl;
mod norms;

pub use gram::{lemniscate_moment, log_z_gram, GramEvaluation, GRAM_DEGREE_CAP};
pub use norms::{norm_c1_incomplete_gamma, ortho_norms, planar_moment, OrthoNormTable, DEGREE_CAP, MAX_WORKING_BITS};

pub(crate) use norms::norms_float;

use rayon::prelude::*;
use rug::{Float, Integer};
use serde::Serialize;

use crate::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::model::LemniscateParams;
use crate::specfun::{ln_barnes_g_float, ln_gamma_float, shift_threshold, DEFAULT_SHIFT_THRESHOLD, GUARD_BITS};

pub(crate) fn ln_factorial(k: usize, w: u32) -> Float {
    Float::with_val(w, Integer::from(Integer::factorial(k as u32))).ln()
}

fn ln_g(x: &Float, bits: u32) -> Float {
    ln_barnes_g_float(x, shift_threshold(bits, DEFAULT_SHIFT_THRESHOLD))
}

fn ln_gamma(x: &Float, bits: u32) -> Float {
    ln_gamma_float(x, shift_threshold(bits, DEFAULT_SHIFT_THRESHOLD))
}

fn finish(v: Float, bits: u32) -> BigReal {
    BigReal::from_float(Float::with_val(bits, v))
}

pub(crate) fn ln_ginibre_float(n: usize, w: u32) -> Float {
    let nf = Float::with_val(w, n);
    let g = ln_g(&Float::with_val(w, n + 2), w);
    g - Float::with_val(w, nf.ln_ref()) * ((n * (n + 1)) as f64 / 2.0)
}

/// `log Z_N^Gin = -N(N+1)/2 · log N + log G(N+2)`.
pub fn log_z_ginibre(n: usize, bits: u32) -> Result<BigReal> {
    if n == 0 {
        return Err(Error::Domain("Ginibre partition function needs N ≥ 1".into()));
    }
    Ok(finish(ln_ginibre_float(n, bits + GUARD_BITS), bits))
}

fn check_radial(n: usize, d: u32, c: f64) -> Result<()> {
    if n == 0 || d == 0 {
        return Err(Error::Domain(format!("need n ≥ 1 and d ≥ 1, got n = {n}, d = {d}")));
    }
    if !(c > -1.0) || !c.is_finite() {
        return Err(Error::Domain(format!("charge must exceed -1, got {c}")));
    }
    Ok(())
}

/// Terms of the radial formula that do not involve `Γ`.
fn radial_prefix(n: usize, d: u32, c: f64, w: u32) -> Float {
    let nf = Float::with_val(w, n);
    let ln_n = Float::with_val(w, nf.ln_ref());
    let ln_d = Float::with_val(w, d).ln();
    let expo = Float::with_val(w, n) * (Float::with_val(w, c) * 2u32 + (n + 1) as f64) / (2 * d);
    ln_factorial(n, w) - ln_d * n as u32 - expo * ln_n
}

/// `log Z_n` at `t = 0`, with `Σ_j log Γ((j+c+1)/d)` regrouped into Barnes functions.
pub fn log_z_radial(n: usize, d: u32, c: f64, bits: u32) -> Result<BigReal> {
    check_radial(n, d, c)?;
    let w = bits + GUARD_BITS;
    let (nn, m) = (n / d as usize, n % d as usize);
    let mut acc = radial_prefix(n, d, c, w);
    for l in 0..d as usize {
        let x = (Float::with_val(w, c) + (l + 1) as f64) / d;
        let count = nn + usize::from(l < m);
        acc += ln_g(&Float::with_val(w, &x + count), w) - ln_g(&x, w);
    }
    Ok(finish(acc, bits))
}

/// Same quantity as [`log_z_radial`], summing `log Γ` term by term.
pub fn log_z_radial_gamma_product(n: usize, d: u32, c: f64, bits: u32) -> Result<BigReal> {
    check_radial(n, d, c)?;
    let w = bits + GUARD_BITS;
    let mut acc = radial_prefix(n, d, c, w);
    for j in 0..n {
        let x = (Float::with_val(w, c) + (j + 1) as f64) / d;
        acc += ln_gamma(&x, w);
    }
    Ok(finish(acc, bits))
}

/// Reduction `n = dN + m` to `d` shifted Ginibre weights.
#[derive(Debug, Clone, Serialize)]
pub struct ReducedParams {
    pub n_scale: usize,
    pub m: usize,
    /// `a = √(n/N) · t`.
    pub a: BigReal,
    /// `γ_ℓ = -2(1 - (ℓ+1+c)/d)`; the `ℓ`-th weight is `|z - a|^{γ_ℓ}`.
    pub gammas: Vec<BigReal>,
}

impl ReducedParams {
    /// Exponent `c_ℓ = γ_ℓ/2` in the notation of [`ortho_norms`].
    pub fn half_gamma(&self, l: usize) -> BigReal {
        &self.gammas[l] / 2.0
    }
}

pub fn map_parameters(n: usize, p: &LemniscateParams, bits: u32) -> Result<ReducedParams> {
    let d = p.d as usize;
    if n < d {
        return Err(Error::Underflow { n, d });
    }
    let (nn, m) = (n / d, n % d);
    let w = bits + GUARD_BITS;
    let ratio = BigReal::from_ratio(n as i64, nn as i64, w);
    let a = (ratio.sqrt() * p.t).with_bits(bits);
    let gammas = (0..d)
        .map(|l| {
            let x = (BigReal::from_f64(p.c, w) + (l + 1) as i64) / p.d as i64;
            ((x - 1i64) * 2i64).with_bits(bits)
        })
        .collect();
    Ok(ReducedParams { n_scale: nn, m, a, gammas })
}

fn ln_cndm(nn: usize, d: u32, m: usize, c: f64, w: u32) -> Float {
    let n = d as usize * nn + m;
    let (nf, mf, df) = (nn as f64, m as f64, f64::from(d));
    let c = Float::with_val(w, c);
    let e = Float::with_val(w, df * nf * nf / 2.0)
        + (Float::with_val(w, &c * 2u32) + (1.0 + 2.0 * mf)) * (nf / 2.0)
        + (Float::with_val(w, &c * 2u32) + (1.0 + mf)) * mf / (2.0 * df);
    let ln_ratio = Float::with_val(w, Float::with_val(w, nn) / n).ln();
    ln_factorial(n, w) - ln_factorial(nn, w) * d - Float::with_val(w, df).ln() * n as u32 + e * ln_ratio
}

/// `log c_{N,d}(m) = log n! - d log N! - n log d + E log(N/n)` with
/// `E = dN²/2 + (1+2c+2m)N/2 + m(1+2c+m)/(2d)`.
pub fn prefactor_log_cndm(nn: usize, d: u32, m: usize, c: f64, bits: u32) -> Result<BigReal> {
    if nn == 0 || d == 0 || m >= d as usize {
        return Err(Error::Domain(format!("need N ≥ 1 and 0 ≤ m < d, got N = {nn}, m = {m}, d = {d}")));
    }
    Ok(finish(ln_cndm(nn, d, m, c, bits + GUARD_BITS), bits))
}

/// The three pieces of `log Z_n = A1 + A2 + A3`.
#[derive(Debug, Clone, Serialize)]
pub struct LogZParts {
    pub reduced: ReducedParams,
    /// `n²t² + log c_{N,d}(m) + d log Z_N^Gin`.
    pub a1: BigReal,
    /// `Σ_ℓ [log N! - log Z_N^Gin + Σ_{j<N} log h_j^{(γ_ℓ/2)}(a)]`.
    pub a2: BigReal,
    /// `Σ_{ℓ<m} log h_N^{(γ_ℓ/2)}(a)`.
    pub a3: BigReal,
}

impl LogZParts {
    pub fn total(&self) -> BigReal {
        &(&self.a1 + &self.a2) + &self.a3
    }
}

/// `(Σ_{j<N} log h_j, log h_N if wanted)` for one reduced weight.
pub(crate) fn log_norm_sums(nn: usize, c: &Float, a: &Float, with_top: bool, w: u32) -> Result<(Float, Option<Float>)> {
    let top = if with_top { nn } else { nn - 1 };
    let logs: Vec<Float> = if c.is_zero() {
        // unshifted Ginibre weight: h_j = j!/N^{j+1}
        let ln_n = Float::with_val(w, nn).ln();
        (0..=top).map(|j| ln_factorial(j, w) - Float::with_val(w, &ln_n * (j as u32 + 1))).collect()
    } else {
        let (norms, _) = norms_float(nn, c, a, top, w)?;
        norms.into_iter().map(|h| h.ln()).collect()
    };
    let mut sum = Float::with_val(w, 0);
    for v in &logs[..nn] {
        sum += v;
    }
    Ok((sum, with_top.then(|| logs[nn].clone())))
}

pub fn log_z_lemniscate_parts(n: usize, p: &LemniscateParams, bits: u32) -> Result<LogZParts> {
    let reduced = map_parameters(n, p, bits)?;
    let d = p.d;
    let w = bits + GUARD_BITS;
    let (nn, m) = (reduced.n_scale, reduced.m);
    let a = Float::with_val(w, p.t) * Float::with_val(w, Float::with_val(w, n) / nn).sqrt();
    let ln_gin = ln_ginibre_float(nn, w);
    let per_l: Vec<(Float, Option<Float>)> = (0..d as usize)
        .into_par_iter()
        .map(|l| {
            let c = (Float::with_val(w, p.c) + (l + 1) as f64) / d - 1u32;
            log_norm_sums(nn, &c, &a, l < m, w)
        })
        .collect::<Result<_>>()?;
    let n2t2 = Float::with_val(w, p.t).square() * Float::with_val(w, n).square();
    let a1 = n2t2 + ln_cndm(nn, d, m, p.c, w) + Float::with_val(w, &ln_gin * d);
    let mut a2 = Float::with_val(w, 0);
    let mut a3 = Float::with_val(w, 0);
    let base = ln_factorial(nn, w) - &ln_gin;
    for (sum, top) in per_l {
        a2 += sum + &base;
        if let Some(v) = top {
            a3 += v;
        }
    }
    Ok(LogZParts { reduced, a1: finish(a1, bits), a2: finish(a2, bits), a3: finish(a3, bits) })
}

/// `log Z_n` for the lemniscate potential with a point charge `c` at the origin.
pub fn log_z_lemniscate(n: usize, p: &LemniscateParams, bits: u32) -> Result<BigReal> {
    log_z_lemniscate_parts(n, p, bits).map(|parts| parts.total())
}

/// `log Z_n` for the potential `|z|^{2/d}` (one of the `d` preimages of a
/// Ginibre ensemble under `z ↦ z^d`).
pub fn log_z_dual_potential(n: usize, d: u32, bits: u32) -> Result<BigReal> {
    if n == 0 || d == 0 {
        return Err(Error::Domain(format!("need n ≥ 1 and d ≥ 1, got n = {n}, d = {d}")));
    }
    let w = bits + GUARD_BITS;
    let (nf, df) = (n as f64, f64::from(d));
    let ln_n = Float::with_val(w, n).ln();
    let ln_d = Float::with_val(w, d).ln();
    let ln_2pi = Float::with_val(w, rug::float::Constant::Pi).ln() + Float::with_val(w, 2).ln();
    let half = df * nf * (nf + 1.0) / 2.0;
    let mut acc = ln_factorial(n, w) + Float::with_val(w, &ln_d * (half + nf / 2.0)) - Float::with_val(w, &ln_n * half)
        + ln_2pi * (nf * (1.0 - df) / 2.0);
    for l in 0..d {
        let x = Float::with_val(w, l) / d + 1u32;
        acc += ln_g(&Float::with_val(w, &x + n), w) - ln_g(&x, w);
    }
    Ok(finish(acc, bits))
}
