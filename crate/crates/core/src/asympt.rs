//! Large-`n` expansion of `log Z_n` for the lemniscate potential with a point
//! charge, and the expansions of its three building blocks `A1`, `A2`, `A3`.
//!
//! All coefficients are evaluated in [`BigReal`] so that expansions can be
//! compared with exact values far below `f64` resolution.

use serde::Serialize;

use crate::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::exact::{ln_factorial, log_z_ginibre};
use crate::fit::basis_fit;
use crate::model::{LemniscateParams, Regime};
use crate::specfun::{barnes_asymptotic_series, gamma_asymptotic_series, log_barnes_g, zeta_prime_minus_one, GUARD_BITS};

#[derive(Debug, Clone, Serialize)]
pub struct ExpansionCoefficients {
    pub c1: BigReal,
    pub c2: BigReal,
    pub c3: BigReal,
    pub c4: BigReal,
    /// Full constant term, oscillatory part included.
    pub c5: BigReal,
    /// `d{n/d}({n/d}-1) log(√d t)` in the multi-component regime, zero otherwise.
    pub c5_oscillatory: BigReal,
    pub regime: Regime,
    /// Whether `c5` depends on `n mod d`.
    pub n_dependent: bool,
}

impl ExpansionCoefficients {
    pub fn as_array(&self) -> [&BigReal; 5] {
        [&self.c1, &self.c2, &self.c3, &self.c4, &self.c5]
    }
}

/// Shorthand for the quantities every formula needs, at working precision.
struct Ctx {
    w: u32,
    d: BigReal,
    t: BigReal,
    c: BigReal,
    ln_d: BigReal,
    ln_2pi: BigReal,
}

impl Ctx {
    fn new(p: &LemniscateParams, bits: u32) -> Self {
        let w = bits + GUARD_BITS;
        let d = BigReal::from_i64(i64::from(p.d), w);
        Self { w, ln_d: d.ln(), d, t: BigReal::from_f64(p.t, w), c: BigReal::from_f64(p.c, w), ln_2pi: BigReal::ln_2pi(w) }
    }

    fn q(&self, num: i64, den: i64) -> BigReal {
        BigReal::from_ratio(num, den, self.w)
    }

    /// `log(√d t)`.
    fn ln_sqrt_d_t(&self) -> BigReal {
        self.ln_d.clone() / 2i64 + self.t.ln()
    }

    /// `log((dt²-1)/(dt²))`.
    fn ln_gap(&self) -> BigReal {
        let dt2 = &self.d * &self.t.square();
        ((&dt2 - 1i64) / &dt2).ln()
    }

    /// `1 + 2c - d`.
    fn shift(&self) -> BigReal {
        &self.c * 2i64 + 1i64 - &self.d
    }

    /// `c(d - c - 1)`.
    fn charge_term(&self) -> BigReal {
        &self.c * (&self.d - &self.c - 1i64)
    }

    /// `(d-1)(2d-1)`.
    fn kappa_num(&self) -> BigReal {
        (&self.d - 1i64) * (&self.d * 2i64 - 1i64)
    }

    fn barnes_sum(&self, p: &LemniscateParams) -> Result<BigReal> {
        let mut s = BigReal::zero(self.w);
        for l in 0..p.d {
            s += log_barnes_g(&((&self.c + i64::from(l) + 1i64) / &self.d))?;
        }
        Ok(s)
    }
}

/// `d x(x-1) log(√d t)` with `x = (n mod d)/d`.
fn oscillatory_constant(ctx: &Ctx, d: u32, n: usize) -> BigReal {
    let x = ctx.q((n % d as usize) as i64, i64::from(d));
    &ctx.d * &x * (&x - 1i64) * ctx.ln_sqrt_d_t()
}

pub fn coefficients(p: &LemniscateParams, n: usize, bits: u32) -> Result<ExpansionCoefficients> {
    let regime = p.require_noncritical()?;
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let x = Ctx::new(p, bits);
    let zeta = zeta_prime_minus_one(x.w);
    let half_ln_2pi = x.ln_2pi.clone() / 2i64;
    let c1 = x.t.square() - x.q(3, 4) / &x.d - x.ln_d.clone() / (&x.d * 2i64);
    let c2 = x.q(1, 2);
    let (c3, c4, c5, osc) = match regime {
        Regime::MultiComponent => {
            let c3 = &half_ln_2pi - 1i64 + x.shift() / &x.d * x.t.ln() - &x.ln_d;
            let c4 = (x.q(6, 1) - &x.d) / 12i64;
            let osc = oscillatory_constant(&x, p.d, n);
            let c5 = &x.d * &zeta
                + &half_ln_2pi
                + (x.charge_term() - x.kappa_num() / 6i64) / &x.d * x.ln_gap()
                + &x.d / 12i64 * &x.ln_d
                + &osc;
            (c3, c4, c5, osc)
        }
        _ => {
            let dt2m1 = &x.d * &x.t.square() - 1i64;
            let c3 =
                &half_ln_2pi - 1i64 + x.shift() / (&x.d * 2i64) * dt2m1 - (&x.c * 2i64 + 1i64 + &x.d) / (&x.d * 2i64) * &x.ln_d;
            let c4 = x.q(5, 12) + (&x.d - 1i64).square() / (&x.d * 12i64) - x.charge_term() / (&x.d * 2i64);
            let c5 = &x.d * &zeta
                + (&x.c * 2i64 + 3i64 - &x.d) / 4i64 * &x.ln_2pi
                + (&x.d / 12i64 - x.kappa_num() / (&x.d * 12i64) + x.charge_term() / (&x.d * 2i64)) * &x.ln_d
                - x.barnes_sum(p)?;
            (c3, c4, c5, BigReal::zero(x.w))
        }
    };
    let r = |v: BigReal| v.with_bits(bits);
    Ok(ExpansionCoefficients {
        c1: r(c1),
        c2: r(c2),
        c3: r(c3),
        c4: r(c4),
        c5: r(c5),
        c5_oscillatory: r(osc),
        regime,
        n_dependent: regime == Regime::MultiComponent && p.d > 1,
    })
}

/// The basis `n², n log n, n, log n, 1`.
pub fn expansion_basis(n: usize, bits: u32) -> [BigReal; 5] {
    let nb = BigReal::from_i64(n as i64, bits);
    let ln = nb.ln();
    [nb.square(), &nb * &ln, nb.clone(), ln, BigReal::one(bits)]
}

/// `C1 n² + C2 n log n + C3 n + C4 log n + C5`.
pub fn expansion_value(p: &LemniscateParams, n: usize, bits: u32) -> Result<BigReal> {
    let k = coefficients(p, n, bits + GUARD_BITS)?;
    Ok(evaluate(&k, n, bits + GUARD_BITS).with_bits(bits))
}

pub fn evaluate(k: &ExpansionCoefficients, n: usize, bits: u32) -> BigReal {
    let basis = expansion_basis(n, bits);
    k.as_array().iter().zip(&basis).fold(BigReal::zero(bits), |s, (c, b)| s + *c * b)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FunctionalSet {
    pub f: f64,
    pub g_n: f64,
    pub h_n: f64,
    /// Number of droplet components.
    pub chi: u32,
}

/// `F`, `G_n`, `H_n` and `χ` in the general free-energy expansion, for `c = 0`.
pub fn functionals(p: &LemniscateParams, n: usize, bits: u32) -> Result<FunctionalSet> {
    if p.c != 0.0 {
        return Err(Error::Unsupported("the functional decomposition is only available for c = 0".into()));
    }
    let regime = p.require_noncritical()?;
    let x = Ctx::new(p, bits);
    let kappa = x.kappa_num() / (&x.d * 6i64);
    Ok(match regime {
        Regime::MultiComponent => FunctionalSet {
            f: (-(kappa * x.ln_gap()) + &x.d / 12i64 * &x.ln_d).to_f64(),
            g_n: oscillatory_constant(&x, p.d, n).to_f64(),
            h_n: 0.0,
            chi: p.d,
        },
        _ => {
            let nb = BigReal::from_i64(n as i64, x.w);
            let zeta = zeta_prime_minus_one(x.w);
            let h = (&x.d - 1i64).square() / (&x.d * 12i64) * nb.ln() + (&x.d - 1i64) * (zeta - x.ln_2pi.clone() / 4i64)
                - x.barnes_sum(p)?;
            FunctionalSet { f: ((&x.d / 12i64 - kappa / 2i64) * &x.ln_d).to_f64(), g_n: 0.0, h_n: h.to_f64(), chi: 1 }
        }
    })
}

/// `(6-χ)/12 + (d-1)²/(12d)`.
pub fn conjectured_log_coefficient(chi: u32, d: u32) -> f64 {
    let (chi, d) = (f64::from(chi), f64::from(d));
    (6.0 - chi) / 12.0 + (d - 1.0).powi(2) / (12.0 * d)
}

fn check_split(p: &LemniscateParams, nn: usize, m: usize) -> Result<()> {
    if nn == 0 || m >= p.d as usize {
        return Err(Error::Domain(format!("need N ≥ 1 and 0 ≤ m < d, got N = {nn}, m = {m}")));
    }
    Ok(())
}

/// `N + log N/2 - log(2π)/2`.
fn norm_growth(x: &Ctx, nn: usize) -> BigReal {
    let nb = BigReal::from_i64(nn as i64, x.w);
    &nb + nb.ln() / 2i64 - x.ln_2pi.clone() / 2i64
}

/// Expansion of `A1 = n²t² + log c_{N,d}(m) + d log Z_N^Gin`, `n = dN + m`.
///
/// With `n_terms = 0` this is the closed expansion through `O(1)`. With
/// `n_terms > 0` the exact expression is kept and only `log Γ` and `log G`
/// are replaced by their large-argument series truncated after `n_terms`
/// Bernoulli terms, which leaves an `O(n^{-2·n_terms-1})` error.
pub fn a1_asymptotic(p: &LemniscateParams, nn: usize, m: usize, n_terms: usize, bits: u32) -> Result<BigReal> {
    check_split(p, nn, m)?;
    let x = Ctx::new(p, bits);
    let n = p.d as usize * nn + m;
    let nb = BigReal::from_i64(n as i64, x.w);
    let nnb = BigReal::from_i64(nn as i64, x.w);
    let v = if n_terms == 0 {
        let half_ln_2pi = x.ln_2pi.clone() / 2i64;
        (x.t.square() - x.q(3, 4) / &x.d - x.ln_d.clone() / (&x.d * 2i64)) * nb.square()
            + &nb * nb.ln() / 2i64
            + (&half_ln_2pi - 1i64 - (&x.c * 2i64 + 1i64 + &x.d) / (&x.d * 2i64) * &x.ln_d) * &nb
            + (x.q(6, 1) - &x.d) / 12i64 * nb.ln()
            + &x.d * zeta_prime_minus_one(x.w)
            + &x.d / 12i64 * &x.ln_d
            + &half_ln_2pi
            + (norm_growth(&x, nn) + (&x.d - &x.c * 2i64 - 1i64) / (&x.d * 2i64)) * m as i64
    } else {
        // log k! ≈ log k + Stirling(k); log G(N+2) = log G(N+1) + log N!
        let ln_fact = |z: &BigReal| -> Result<BigReal> { Ok(gamma_asymptotic_series(z, n_terms)? + z.ln()) };
        let ln_n_fact = ln_fact(&nb)?;
        let ln_nn_fact = ln_fact(&nnb)?;
        let ln_g = barnes_asymptotic_series(&nnb, n_terms)? + &ln_nn_fact;
        let ln_gin = ln_g - nnb.ln() * (nn * (nn + 1)) as i64 / 2i64;
        let (nf, mf) = (nnb.clone(), BigReal::from_i64(m as i64, x.w));
        let e = &x.d * nf.square() / 2i64
            + (&x.c * 2i64 + 1i64 + &mf * 2i64) * &nf / 2i64
            + &mf * (&x.c * 2i64 + 1i64 + &mf) / (&x.d * 2i64);
        let ln_c = &ln_n_fact - &ln_nn_fact * i64::from(p.d) - &x.ln_d * n as i64 + e * (nnb.ln() - nb.ln());
        nb.square() * x.t.square() + ln_c + ln_gin * i64::from(p.d)
    };
    Ok(v.with_bits(bits))
}

/// Expansion of `A2` through `O(1)`.
pub fn a2_asymptotic(p: &LemniscateParams, nn: usize, m: usize, bits: u32) -> Result<BigReal> {
    check_split(p, nn, m)?;
    let regime = p.require_noncritical()?;
    let x = Ctx::new(p, bits);
    let n = p.d as usize * nn + m;
    let nb = BigReal::from_i64(n as i64, x.w);
    let shift = x.shift();
    let v = match regime {
        Regime::MultiComponent => {
            let l = x.ln_sqrt_d_t();
            &shift * &l / &x.d * &nb
                + (x.charge_term() / &x.d - x.kappa_num() / (&x.d * 6i64)) * x.ln_gap()
                + &shift / (&x.d * 2i64) * (BigReal::one(x.w) - l * 2i64) * m as i64
        }
        _ => {
            let dt2m1 = &x.d * &x.t.square() - 1i64;
            &shift / (&x.d * 2i64) * dt2m1 * &nb
                + (x.kappa_num() / (&x.d * 12i64) - x.charge_term() / (&x.d * 2i64)) * (nb.ln() - &x.ln_d)
                + &shift / 4i64 * &x.ln_2pi
                - x.barnes_sum(p)?
                + &shift / (&x.d * 2i64) * m as i64
        }
    };
    Ok(v.with_bits(bits))
}

/// Expansion of `A3` through `O(1)`.
pub fn a3_asymptotic(p: &LemniscateParams, nn: usize, m: usize, bits: u32) -> Result<BigReal> {
    check_split(p, nn, m)?;
    let regime = p.require_noncritical()?;
    if m == 0 {
        return Ok(BigReal::zero(bits));
    }
    let x = Ctx::new(p, bits);
    let mut v = -(norm_growth(&x, nn) * m as i64);
    if regime == Regime::MultiComponent {
        v += (&x.c * 2i64 + (m as i64 + 1 - 2 * i64::from(p.d))) * m as i64 / &x.d * x.ln_sqrt_d_t();
    }
    Ok(v.with_bits(bits))
}

/// An `m`-dependent term written as `growth · (N + log N/2 - log(2π)/2) + constant`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillatoryPart {
    pub growth: f64,
    pub constant: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillationTable {
    pub a1: OscillatoryPart,
    pub a2: OscillatoryPart,
    pub a3: OscillatoryPart,
    pub total: OscillatoryPart,
}

/// The `m`-dependent parts of the three expansions and their sum.
pub fn oscillation_cancellation(p: &LemniscateParams, m: usize) -> Result<OscillationTable> {
    let regime = p.require_noncritical()?;
    if m >= p.d as usize {
        return Err(Error::Domain(format!("m = {m} must be below d = {}", p.d)));
    }
    let (d, c, mf) = (f64::from(p.d), p.c, m as f64);
    let l = (d.sqrt() * p.t).ln();
    let multi = regime == Regime::MultiComponent;
    let a1 = OscillatoryPart { growth: mf, constant: mf * (d - 2.0 * c - 1.0) / (2.0 * d) };
    let a2 = OscillatoryPart {
        growth: 0.0,
        constant: -mf * (d - 2.0 * c - 1.0) / (2.0 * d) + if multi { mf * (d - 2.0 * c - 1.0) / d * l } else { 0.0 },
    };
    let a3 = OscillatoryPart { growth: -mf, constant: if multi { mf * (mf + 1.0 + 2.0 * c - 2.0 * d) / d * l } else { 0.0 } };
    let total = OscillatoryPart { growth: a1.growth + a2.growth + a3.growth, constant: a1.constant + a2.constant + a3.constant };
    Ok(OscillationTable { a1, a2, a3, total })
}

/// Closed form of the summed oscillation: `m(m-d)/d · log(√d t)` for `t > t_c`, else 0.
pub fn oscillation_total(p: &LemniscateParams, m: usize) -> Result<f64> {
    Ok(match p.require_noncritical()? {
        Regime::MultiComponent => {
            let (d, mf) = (f64::from(p.d), m as f64);
            mf * (mf - d) / d * (d.sqrt() * p.t).ln()
        }
        _ => 0.0,
    })
}

/// Sign convention for the `(t/t_c)` power in the earlier `n = dN` prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DeanoSimmVariant {
    /// Exponent `-N(d-1)`, which follows from `Σ_ℓ N γ_ℓ`.
    Corrected,
    /// Exponent `+N(d-1)` as originally printed.
    AsPrinted,
}

/// `(d-1)(2d-1)/(6d)`.
pub fn kappa(d: u32) -> f64 {
    let d = f64::from(d);
    (d - 1.0) * (2.0 * d - 1.0) / (6.0 * d)
}

/// Log of `(e^{dN²t²} Z_N^Gin)^d c_{N,d} (t/t_c)^{∓N(d-1)} (1 - (t_c/t)²)^{-κ_d}`,
/// with `c_{N,d} = (dN)!/(N!)^d · d^{-N(dN+2d+1)/2}`.
pub fn deano_simm_rhs(nn: usize, d: u32, t: f64, variant: DeanoSimmVariant, bits: u32) -> Result<BigReal> {
    let p = LemniscateParams::new(d, t, 0.0)?;
    if p.require_noncritical()? != Regime::MultiComponent {
        return Err(Error::Unsupported(format!("the prediction needs t > 1/√d, got t = {t}")));
    }
    if nn == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let x = Ctx::new(&p, bits);
    let nb = BigReal::from_i64(nn as i64, x.w);
    let gin = log_z_ginibre(nn, x.w)?;
    let n = d as usize * nn;
    let ln_c = BigReal::from_float(ln_factorial(n, x.w) - ln_factorial(nn, x.w) * d)
        - &nb * (&x.d * &nb + &x.d * 2i64 + 1i64) / 2i64 * &x.ln_d;
    let ln_ratio = x.ln_sqrt_d_t();
    let power = (&x.d - 1i64) * &nb * ln_ratio;
    let power = match variant {
        DeanoSimmVariant::Corrected => -power,
        DeanoSimmVariant::AsPrinted => power,
    };
    let tail = BigReal::one(x.w) - (&x.d * x.t.square()).recip();
    let v = (&x.d * nb.square() * x.t.square() + gin) * &x.d + ln_c + power - tail.ln() * kappa(d);
    Ok(v.with_bits(bits))
}

#[derive(Debug, Clone, Serialize)]
pub struct SumRuleReport {
    pub residue: usize,
    pub grid: Vec<usize>,
    /// Least-squares coefficients of `A1 + A2 + A3` on `n², n log n, n, log n, 1`.
    pub fitted: Vec<BigReal>,
    pub expected: Vec<BigReal>,
    pub max_abs_difference: f64,
    pub condition: f64,
}

/// Grid of about `points` values of `n ≡ m (mod d)`, geometric from `lo` to `hi`.
pub fn residue_grid(d: u32, m: usize, lo: usize, hi: usize, points: usize) -> Vec<usize> {
    let d = d as usize;
    let ratio = (hi as f64 / lo as f64).powf(1.0 / (points.max(2) - 1) as f64);
    let mut out: Vec<usize> = (0..points)
        .map(|k| {
            let target = lo as f64 * ratio.powi(k as i32);
            let base = (target / d as f64).round() as usize * d;
            base + m
        })
        .filter(|&n| n >= d)
        .collect();
    out.dedup();
    out
}

/// Fit `A1 + A2 + A3` expansions on `n ∈ [64, 4096]`, `n ≡ m (mod d)`, against the
/// basis and compare with `C1..C5`.
pub fn sum_rule(p: &LemniscateParams, m: usize, bits: u32) -> Result<SumRuleReport> {
    let w = bits + GUARD_BITS;
    let grid = residue_grid(p.d, m, 64, 4096, 13);
    let mut design = Vec::with_capacity(grid.len());
    let mut y = Vec::with_capacity(grid.len());
    for &n in &grid {
        let nn = n / p.d as usize;
        let total = a1_asymptotic(p, nn, m, 0, w)? + a2_asymptotic(p, nn, m, w)? + a3_asymptotic(p, nn, m, w)?;
        design.push(expansion_basis(n, w).to_vec());
        y.push(total);
    }
    let fit = basis_fit(&design, &y)?;
    let k = coefficients(p, grid[0], w)?;
    let expected: Vec<BigReal> = k.as_array().iter().map(|v| (*v).clone()).collect();
    let max_abs_difference = fit.coefficients.iter().zip(&expected).map(|(a, b)| (a - b).abs().to_f64()).fold(0.0, f64::max);
    Ok(SumRuleReport {
        residue: m,
        grid,
        fitted: fit.coefficients.into_iter().map(|v| v.with_bits(bits)).collect(),
        expected: expected.into_iter().map(|v| v.with_bits(bits)).collect(),
        max_abs_difference,
        condition: fit.condition,
    })
}
