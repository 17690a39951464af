//! Squared norms `h_j^{(c)}(a)` of the monic polynomials orthogonal for
//! `|z - a|^{2c} e^{-N|z|²} d²z/π`.
//!
//! Moments are taken in the shifted basis `w^j`, `w = z - a`, where they are
//! convergent hypergeometric series with terms of one sign:
//!
//! `∫ w^j w̄^k |w|^{2c} e^{-N|w+a|²} d²w/π
//!     = (-1)^δ e^{-Na²} Σ_p a^{2p+δ} N^{p-k-c-1} Γ(j+p+c+1) / (p! (p+δ)!)`, `δ = j - k ≥ 0`.
//!
//! The basis is unitriangular with respect to `z^j`, so the `D` factor of
//! `G = LDLᵀ` gives the norms directly and `-L_{j,j-1} - j·a` is the
//! subleading coefficient of the degree-`j` polynomial in `z`.

use rayon::prelude::*;
use rug::{Float, Integer};

use super::ldl::{ldl, LdlFailure};
use crate::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::specfun::{ln_gamma_float, regularized_gamma_q, DEFAULT_SHIFT_THRESHOLD};

/// Largest degree accepted by [`ortho_norms`].
pub const DEGREE_CAP: usize = 400;
/// Working precision is never raised beyond this.
pub const MAX_WORKING_BITS: u32 = 8192;
const GUARD: u32 = 64;

#[derive(Debug, Clone)]
pub struct OrthoNormTable {
    /// Scale `N` in the weight `e^{-N|z|²}`.
    pub n_scale: usize,
    pub c: BigReal,
    pub a: BigReal,
    /// `h_j` for `j = 0..=n_max`.
    pub norms: Vec<BigReal>,
    pub bits: u32,
    /// Precision the moments and factorisation were carried at.
    pub working_bits: u32,
    subleading: Vec<BigReal>,
}

impl OrthoNormTable {
    pub fn log_norms(&self) -> Vec<BigReal> {
        self.norms.iter().map(BigReal::ln).collect()
    }

    /// Coefficient of `z^{j-1}` in the monic orthogonal polynomial of degree `j ≥ 1`.
    pub fn subleading(&self, j: usize) -> Option<&BigReal> {
        j.checked_sub(1).and_then(|i| self.subleading.get(i))
    }
}

struct Raw {
    norms: Vec<Float>,
    subleading: Vec<Float>,
    working_bits: u32,
}

fn closed_form_radial(n_scale: usize, c: &Float, n_max: usize, prec: u32) -> Raw {
    // a = 0: the weight is radial, h_j = Γ(j+c+1) / N^{j+c+1}
    let ln_n = Float::with_val(prec, n_scale).ln();
    let norms = (0..=n_max)
        .map(|j| {
            let s = Float::with_val(prec, c + (j as u32 + 1));
            let lg = ln_gamma_float(&s, DEFAULT_SHIFT_THRESHOLD);
            (lg - s * &ln_n).exp()
        })
        .collect();
    Raw { norms, subleading: vec![Float::with_val(prec, 0); n_max], working_bits: prec }
}

fn shifted_moments(n_scale: usize, c: &Float, a: &Float, size: usize, w: u32) -> Vec<Vec<Float>> {
    let nf = Float::with_val(w, n_scale);
    let ln_n = Float::with_val(w, nf.ln_ref());
    let ln_a = Float::with_val(w, a.ln_ref());
    let a2n = Float::with_val(w, a.square_ref()) * &nf;
    let lg: Vec<Float> =
        (0..size).map(|j| ln_gamma_float(&Float::with_val(w, c + (j as u32 + 1)), DEFAULT_SHIFT_THRESHOLD)).collect();
    let ln_fact: Vec<Float> = (0..size).map(|k| Float::with_val(w, Integer::from(Integer::factorial(k as u32))).ln()).collect();
    let eps = Float::with_val(w, Float::i_exp(1, -(w as i32) - 4));
    let pairs: Vec<(usize, usize)> = (0..size).flat_map(|j| (0..=j).map(move |k| (j, k))).collect();
    let values: Vec<Float> = pairs
        .par_iter()
        .map(|&(j, k)| {
            let delta = j - k;
            let mut ln_t0 = Float::with_val(w, &ln_a * delta as u32);
            ln_t0 -= Float::with_val(w, c + (k as u32 + 1)) * &ln_n;
            ln_t0 += &lg[j];
            ln_t0 -= &ln_fact[delta];
            ln_t0 -= &a2n;
            let mut term = ln_t0.exp();
            let mut sum = term.clone();
            let mut p: u64 = 0;
            let jc = Float::with_val(w, c + (j as u32 + 1));
            loop {
                let num = Float::with_val(w, &jc + p) * &a2n;
                let ratio = num / ((p + 1) * (p + delta as u64 + 1));
                term *= &ratio;
                sum += &term;
                p += 1;
                if ratio < 0.5 && Float::with_val(w, &term / &sum) < eps {
                    break;
                }
            }
            if delta % 2 == 1 {
                -sum
            } else {
                sum
            }
        })
        .collect();
    let mut g: Vec<Vec<Float>> = (0..size).map(|j| Vec::with_capacity(j + 1)).collect();
    for ((j, _), v) in pairs.into_iter().zip(values) {
        g[j].push(v);
    }
    g
}

fn initial_working_bits(bits: u32, a: f64, n_max: usize) -> u32 {
    let est = 2.0 * n_max as f64 * (1.0 + a).log2() + 8.0;
    bits + GUARD + est.ceil() as u32
}

fn compute(n_scale: usize, c: &Float, a: &Float, n_max: usize, bits: u32) -> Result<Raw> {
    if n_scale == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    if n_max > DEGREE_CAP {
        return Err(Error::Domain(format!("degree {n_max} exceeds the cap {DEGREE_CAP}")));
    }
    if !(*c > -1) {
        return Err(Error::Domain(format!("c must exceed -1, got {}", c.to_f64())));
    }
    if *a < 0 {
        return Err(Error::Domain("a must be nonnegative".into()));
    }
    let mut w = initial_working_bits(bits, a.to_f64(), n_max);
    if a.is_zero() {
        return Ok(closed_form_radial(n_scale, &Float::with_val(w, c), n_max, w));
    }
    loop {
        let cw = Float::with_val(w, c);
        let aw = Float::with_val(w, a);
        let g = shifted_moments(n_scale, &cw, &aw, n_max + 1, w);
        let retry = match ldl(&g, w) {
            Ok(f) if f.loss_bits + f64::from(bits) + 32.0 <= f64::from(w) => {
                let subleading = (1..=n_max)
                    .map(|j| {
                        let s = Float::with_val(w, &aw * j as u32);
                        -Float::with_val(w, &f.lower[j][j - 1]) - s
                    })
                    .collect();
                return Ok(Raw { norms: f.diag, subleading, working_bits: w });
            }
            Ok(f) => (bits + f.loss_bits.ceil() as u32 + 96).max(w + w / 2),
            Err(LdlFailure::NotPositive(_)) => 2 * w,
        };
        if retry > MAX_WORKING_BITS {
            let degree = match ldl(&g, w) {
                Err(LdlFailure::NotPositive(j)) => j,
                Ok(_) => n_max,
            };
            return Err(Error::Precision { degree, bits: w });
        }
        w = retry;
    }
}

pub(crate) fn norms_float(n_scale: usize, c: &Float, a: &Float, n_max: usize, bits: u32) -> Result<(Vec<Float>, Vec<Float>)> {
    let raw = compute(n_scale, c, a, n_max, bits)?;
    Ok((raw.norms, raw.subleading))
}

/// Norm table `h_j^{(c)}(a)` for `j = 0..=n_max`, accurate to `bits`.
pub fn ortho_norms(n_scale: usize, c: &BigReal, a: &BigReal, n_max: usize, bits: u32) -> Result<OrthoNormTable> {
    let raw = compute(n_scale, c.as_float(), a.as_float(), n_max, bits)?;
    let round = |v: Float| BigReal::from_float(Float::with_val(bits, v));
    Ok(OrthoNormTable {
        n_scale,
        c: c.with_bits(bits),
        a: a.with_bits(bits),
        norms: raw.norms.into_iter().map(round).collect(),
        bits,
        working_bits: raw.working_bits,
        subleading: raw.subleading.into_iter().map(round).collect(),
    })
}

/// `∫ z^j z̄^k |z - a|^{2c} e^{-N|z|²} d²z/π` (real, since `a` is real).
pub fn planar_moment(n_scale: usize, c: &BigReal, a: &BigReal, j: usize, k: usize, bits: u32) -> Result<BigReal> {
    if !(*c > -1.0) {
        return Err(Error::Domain("c must exceed -1".into()));
    }
    let top = j.max(k);
    let w = initial_working_bits(bits, a.to_f64(), top) + 2 * top as u32;
    let cw = Float::with_val(w, c.as_float());
    let aw = Float::with_val(w, a.as_float());
    if a.is_zero() {
        if j != k {
            return Ok(BigReal::zero(bits));
        }
        let raw = closed_form_radial(n_scale, &cw, j, w);
        return Ok(BigReal::from_float(Float::with_val(bits, &raw.norms[j])));
    }
    let g = shifted_moments(n_scale, &cw, &aw, top + 1, w);
    let mw = |i: usize, l: usize| if i >= l { &g[i][l] } else { &g[l][i] };
    // z^j = Σ_i C(j,i) a^{j-i} w^i
    let binom = |n: usize, r: usize| Float::with_val(w, Integer::from(Integer::binomial_u(n as u32, r as u32)));
    let apow: Vec<Float> = (0..=j + k).map(|e| Float::with_val(w, rug::ops::Pow::pow(&aw, e as u32))).collect();
    let mut acc = Float::with_val(w, 0);
    for i in 0..=j {
        for l in 0..=k {
            let coef = binom(j, i) * binom(k, l) * &apow[j - i + k - l];
            acc += coef * mw(i, l);
        }
    }
    Ok(BigReal::from_float(Float::with_val(bits, acc)))
}

/// `h_k^{(1)}(a) = (k+1)!/N^{k+2} · Q(k+2, Na²)/Q(k+1, Na²)`.
pub fn norm_c1_incomplete_gamma(n_scale: usize, a: &BigReal, k: usize, bits: u32) -> Result<BigReal> {
    let w = bits + GUARD;
    let x = BigReal::from_float(Float::with_val(w, a.as_float())).square() * n_scale as f64;
    let q2 = regularized_gamma_q(&BigReal::from_i64(k as i64 + 2, w), &x)?;
    let q1 = regularized_gamma_q(&BigReal::from_i64(k as i64 + 1, w), &x)?;
    let fact = BigReal::from_float(Float::with_val(w, Integer::from(Integer::factorial(k as u32 + 1))));
    let nn = BigReal::from_i64(n_scale as i64, w).powi(k as i32 + 2);
    Ok((fact / nn * q2 / q1).with_bits(bits))
}
