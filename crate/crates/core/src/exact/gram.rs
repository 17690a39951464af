//! Direct evaluation of `Z_n = n! det[M_jk]` with the monomial moments of the
//! lemniscate weight `|z|^{2c} e^{-nV(z)}`. Expanding `e^{nt z^d}` and
//! `e^{nt z̄^d}` gives, for `j - k = d·e ≥ 0`,
//!
//! `M_jk = Σ_p (nt)^{2p+e} / (p! (p+e)!) · Γ((s+c+1)/d) / (d n^{(s+c+1)/d})`, `s = j + dp`,
//!
//! and `M_jk = 0` unless `j ≡ k (mod d)`. This route shares nothing with the
//! shifted-Ginibre norms beyond `ln Γ`, and serves as a cross-check.

use rug::{Float, Integer};

use super::ldl::{ldl, LdlFailure};
use crate::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::model::LemniscateParams;
use crate::specfun::{ln_gamma_float, DEFAULT_SHIFT_THRESHOLD};

/// Largest `n` the determinant route accepts.
pub const GRAM_DEGREE_CAP: usize = 20;

#[derive(Debug, Clone)]
pub struct GramEvaluation {
    pub log_z: BigReal,
    /// Squared norms of the monic orthogonal polynomials of the lemniscate weight.
    pub norms: Vec<BigReal>,
    pub working_bits: u32,
}

fn moment(n: usize, p: &LemniscateParams, j: usize, k: usize, w: u32) -> Float {
    let d = p.d as usize;
    if j % d != k % d {
        return Float::with_val(w, 0);
    }
    let (j, k) = if j >= k { (j, k) } else { (k, j) };
    let e = ((j - k) / d) as u32;
    let nf = Float::with_val(w, n);
    let ln_n = Float::with_val(w, nf.ln_ref());
    let c = Float::with_val(w, p.c);
    let df = Float::with_val(w, p.d);
    let x0 = (Float::with_val(w, &c + (j as u32 + 1))) / &df;
    let mut ln_t0 =
        ln_gamma_float(&x0, DEFAULT_SHIFT_THRESHOLD) - Float::with_val(w, &x0 * &ln_n) - Float::with_val(w, df.ln_ref());
    if p.t == 0.0 {
        return if e == 0 { ln_t0.exp() } else { Float::with_val(w, 0) };
    }
    let nt = Float::with_val(w, p.t) * &nf;
    ln_t0 += Float::with_val(w, nt.ln_ref()) * e;
    ln_t0 -= Float::with_val(w, Integer::from(Integer::factorial(e))).ln();
    let mut term = ln_t0.exp();
    let mut sum = term.clone();
    let nt2 = Float::with_val(w, p.t).square() * &nf;
    let eps = Float::with_val(w, Float::i_exp(1, -(w as i32) - 4));
    let mut s = j as u64;
    let mut q: u64 = 0;
    loop {
        // (s+c+1)/d moves to (s+d+c+1)/d: Γ grows by that argument, n^{-1} appears
        let x = (Float::with_val(w, &c + (s + 1))) / &df;
        let ratio = x * &nt2 / ((q + 1) * (q + u64::from(e) + 1));
        term *= &ratio;
        sum += &term;
        q += 1;
        s += d as u64;
        if ratio < 0.5 && Float::with_val(w, &term / &sum) < eps {
            break;
        }
    }
    sum
}

/// `∫ z^j z̄^k |z|^{2c} e^{-nV(z)} d²z/π`.
pub fn lemniscate_moment(n: usize, p: &LemniscateParams, j: usize, k: usize, bits: u32) -> BigReal {
    BigReal::from_float(Float::with_val(bits, moment(n, p, j, k, bits + 32)))
}

/// `log Z_n` from the full `n × n` Gram determinant (no use of the band structure).
pub fn log_z_gram(n: usize, p: &LemniscateParams, bits: u32) -> Result<GramEvaluation> {
    if n == 0 || n > GRAM_DEGREE_CAP {
        return Err(Error::Domain(format!("Gram route needs 1 ≤ n ≤ {GRAM_DEGREE_CAP}, got {n}")));
    }
    let mut w = bits + 64 + 4 * n as u32;
    loop {
        let g: Vec<Vec<Float>> = (0..n).map(|j| (0..=j).map(|k| moment(n, p, j, k, w)).collect()).collect();
        match ldl(&g, w) {
            Ok(f) if f.loss_bits + f64::from(bits) + 32.0 <= f64::from(w) => {
                let mut log_z = Float::with_val(w, Integer::from(Integer::factorial(n as u32))).ln();
                for dj in &f.diag {
                    log_z += Float::with_val(w, dj.ln_ref());
                }
                return Ok(GramEvaluation {
                    log_z: BigReal::from_float(Float::with_val(bits, log_z)),
                    norms: f.diag.iter().map(|v| BigReal::from_float(Float::with_val(bits, v))).collect(),
                    working_bits: w,
                });
            }
            Ok(_) | Err(LdlFailure::NotPositive(_)) if w < super::norms::MAX_WORKING_BITS => w *= 2,
            Err(LdlFailure::NotPositive(j)) => return Err(Error::Precision { degree: j, bits: w }),
            Ok(_) => return Err(Error::Precision { degree: n - 1, bits: w }),
        }
    }
}
