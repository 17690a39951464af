//! Studies that combine the exact and asymptotic routes, plus a Monte Carlo
//! sampler used to look at the droplet.

mod sampler;

pub use sampler::{
    distance_to_droplet, empirical_vs_equilibrium, radial_cdf, sample_equilibrium, sample_gas, DropletStatistics, SampleCloud,
    SamplerConfig,
};

use rayon::prelude::*;
use serde::Serialize;

use crate::asympt::{coefficients, evaluate};
use crate::bigreal::BigReal;
use crate::error::{Error, Result};
use crate::exact::{log_z_lemniscate, DEGREE_CAP};
use crate::fit::{linear_fit, power_law_fit, LinearFit};
use crate::model::LemniscateParams;

/// Schema tag carried by every machine-readable report.
pub const SCHEMA: &str = "lemniscate-lab/1";

/// Envelope for JSON reports.
#[derive(Debug, Clone, Serialize)]
pub struct Report<T: Serialize> {
    pub schema: &'static str,
    pub kind: &'static str,
    pub bits: u32,
    pub seed: Option<u64>,
    pub payload: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(kind: &'static str, bits: u32, seed: Option<u64>, payload: T) -> Self {
        Self { schema: SCHEMA, kind, bits, seed, payload }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub exact: BigReal,
    pub asymptotic: BigReal,
    pub remainder: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub params: LemniscateParams,
    pub rows: Vec<ConvergenceRow>,
    /// Slope of `log|remainder|` against `log n`.
    pub fitted_exponent: f64,
    /// `K` in `|remainder| ≈ K n^{exponent}`.
    pub fitted_constant: f64,
}

/// Remainders below `2^{-bits/2}` are treated as noise and left out of fits.
pub fn noise_floor(bits: u32) -> f64 {
    2f64.powf(-f64::from(bits) / 2.0)
}

/// Power-law fit of remainders, as used in [`ConvergenceReport`].
pub fn fit_remainders(ns: &[usize], remainders: &[f64], bits: u32) -> LinearFit {
    let ns: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    power_law_fit(&ns, remainders, noise_floor(bits))
}

fn check_grid(p: &LemniscateParams, n_grid: &[usize]) -> Result<Vec<usize>> {
    p.require_noncritical()?;
    let mut grid = n_grid.to_vec();
    grid.sort_unstable();
    grid.dedup();
    let d = p.d as usize;
    match (grid.first(), grid.last()) {
        (Some(&lo), Some(&hi)) if lo >= d && hi / d <= DEGREE_CAP => Ok(grid),
        (Some(_), Some(_)) => Err(Error::Domain(format!(
            "grid must satisfy d ≤ n and n/d ≤ {DEGREE_CAP}; got {:?}..{:?}",
            grid.first(),
            grid.last()
        ))),
        _ => Err(Error::Domain("empty n grid".into())),
    }
}

/// `log Z_n` exactly and from the five-term expansion, over a grid of `n`.
pub fn run_convergence(p: &LemniscateParams, n_grid: &[usize], bits: u32) -> Result<ConvergenceReport> {
    let grid = check_grid(p, n_grid)?;
    let rows: Vec<ConvergenceRow> = grid
        .par_iter()
        .map(|&n| {
            let exact = log_z_lemniscate(n, p, bits)?;
            let k = coefficients(p, n, bits)?;
            let asymptotic = evaluate(&k, n, bits);
            let remainder = (&exact - &asymptotic).to_f64();
            Ok(ConvergenceRow { n, exact, asymptotic, remainder })
        })
        .collect::<Result<_>>()?;
    let ns: Vec<usize> = rows.iter().map(|r| r.n).collect();
    let rs: Vec<f64> = rows.iter().map(|r| r.remainder).collect();
    let fit = fit_remainders(&ns, &rs, bits);
    Ok(ConvergenceReport { params: *p, rows, fitted_exponent: fit.slope, fitted_constant: fit.intercept.exp() })
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidueClass {
    pub m: usize,
    pub ns: Vec<usize>,
    /// `log Z_n` minus the expansion without its oscillatory constant.
    pub residuals: Vec<f64>,
    pub mean: f64,
    /// Intercept of `residual ≈ α + β/n` over the class: the `O(1)` part.
    pub constant: f64,
    pub slope_in_inverse_n: f64,
    /// `d{n/d}({n/d}-1) log(√d t)` for `t > t_c`, zero otherwise.
    pub predicted: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OscillationReport {
    pub params: LemniscateParams,
    pub classes: Vec<ResidueClass>,
}

impl OscillationReport {
    /// Largest `|constant - predicted|` over the classes.
    pub fn max_error(&self) -> f64 {
        self.classes.iter().map(|c| (c.constant - c.predicted).abs()).fold(0.0, f64::max)
    }

    /// Largest `|mean - predicted|` over the classes.
    pub fn max_mean_error(&self) -> f64 {
        self.classes.iter().map(|c| (c.mean - c.predicted).abs()).fold(0.0, f64::max)
    }
}

/// Residuals `log Z_n - (C1 n² + C2 n log n + C3 n + C4 log n + C5 - G_n)` sorted
/// into classes `n mod d`, each reduced to its `O(1)` part by an `α + β/n` fit.
pub fn extract_oscillation(p: &LemniscateParams, n_grid: &[usize], bits: u32) -> Result<OscillationReport> {
    let grid = check_grid(p, n_grid)?;
    let values: Vec<(usize, f64, f64)> = grid
        .par_iter()
        .map(|&n| {
            let exact = log_z_lemniscate(n, p, bits)?;
            let k = coefficients(p, n, bits)?;
            let smooth = evaluate(&k, n, bits) - &k.c5_oscillatory;
            // `+ 0.0` turns a negative zero into zero
            Ok((n, (exact - smooth).to_f64(), k.c5_oscillatory.to_f64() + 0.0))
        })
        .collect::<Result<_>>()?;
    let d = p.d as usize;
    let classes = (0..d)
        .filter_map(|m| {
            let members: Vec<&(usize, f64, f64)> = values.iter().filter(|v| v.0 % d == m).collect();
            if members.is_empty() {
                return None;
            }
            let ns: Vec<usize> = members.iter().map(|v| v.0).collect();
            let residuals: Vec<f64> = members.iter().map(|v| v.1).collect();
            let mean = residuals.iter().sum::<f64>() / residuals.len() as f64;
            let (constant, slope) = if members.len() >= 2 {
                let pts: Vec<(f64, f64)> = members.iter().map(|v| (1.0 / v.0 as f64, v.1)).collect();
                let f = linear_fit(&pts);
                (f.intercept, f.slope)
            } else {
                (mean, 0.0)
            };
            Some(ResidueClass { m, ns, residuals, mean, constant, slope_in_inverse_n: slope, predicted: members[0].2 })
        })
        .collect();
    Ok(OscillationReport { params: *p, classes })
}
