//! Least-squares helpers: straight lines, power laws and extended-precision
//! fits against a fixed function basis.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::bigreal::BigReal;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
}

/// Ordinary least squares `y ≈ intercept + slope·x`.
pub fn linear_fit(points: &[(f64, f64)]) -> LinearFit {
    let n = points.len() as f64;
    if points.len() < 2 {
        return LinearFit { slope: f64::NAN, intercept: f64::NAN };
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    LinearFit { slope, intercept: my - slope * mx }
}

/// Fit `|r| ≈ K n^slope` on the points with `|r| > floor`; the intercept is `log K`.
pub fn power_law_fit(ns: &[f64], residuals: &[f64], floor: f64) -> LinearFit {
    let pts: Vec<(f64, f64)> =
        ns.iter().zip(residuals).filter(|(_, r)| r.abs() > floor && r.is_finite()).map(|(n, r)| (n.ln(), r.abs().ln())).collect();
    linear_fit(&pts)
}

#[derive(Debug, Clone)]
pub struct BasisFit {
    pub coefficients: Vec<BigReal>,
    /// 2-norm condition number of the column-normalised design matrix.
    pub condition: f64,
    pub max_residual: f64,
}

/// Least squares `y ≈ Σ_k β_k f_k(x)` by modified Gram–Schmidt in extended precision.
pub fn basis_fit(design: &[Vec<BigReal>], y: &[BigReal]) -> Result<BasisFit> {
    let rows = design.len();
    let cols = design.first().map_or(0, Vec::len);
    if rows < cols || cols == 0 || y.len() != rows {
        return Err(Error::Domain(format!("basis fit needs rows ≥ cols > 0, got {rows}×{cols}")));
    }
    let bits = y[0].bits();
    // column-major copies
    let mut q: Vec<Vec<BigReal>> = (0..cols).map(|k| design.iter().map(|r| r[k].clone()).collect()).collect();
    let mut r = vec![vec![BigReal::zero(bits); cols]; cols];
    for k in 0..cols {
        for i in 0..k {
            let dot = dot(&q[i], &q[k], bits);
            let qi = q[i].clone();
            for (qk, qi) in q[k].iter_mut().zip(&qi) {
                *qk -= &dot * qi;
            }
            r[i][k] = dot;
        }
        let norm = dot(&q[k], &q[k], bits).sqrt();
        if norm.is_zero() {
            return Err(Error::SingularInput("rank-deficient basis".into()));
        }
        for v in q[k].iter_mut() {
            *v /= &norm;
        }
        r[k][k] = norm;
    }
    let qty: Vec<BigReal> = (0..cols).map(|k| dot(&q[k], y, bits)).collect();
    let mut beta = vec![BigReal::zero(bits); cols];
    for k in (0..cols).rev() {
        let mut acc = qty[k].clone();
        for j in k + 1..cols {
            acc -= &r[k][j] * &beta[j];
        }
        beta[k] = acc / &r[k][k];
    }
    let max_residual = design
        .iter()
        .zip(y)
        .map(|(row, yi)| {
            let fitted = row.iter().zip(&beta).fold(BigReal::zero(bits), |s, (a, b)| s + a * b);
            (yi - &fitted).abs().to_f64()
        })
        .fold(0.0, f64::max);
    Ok(BasisFit { coefficients: beta, condition: condition_number(design), max_residual })
}

fn dot(a: &[BigReal], b: &[BigReal], bits: u32) -> BigReal {
    a.iter().zip(b).fold(BigReal::zero(bits), |s, (x, y)| s + x * y)
}

fn condition_number(design: &[Vec<BigReal>]) -> f64 {
    let rows = design.len();
    let cols = design[0].len();
    let mut m = DMatrix::from_fn(rows, cols, |i, j| design[i][j].to_f64());
    for mut col in m.column_iter_mut() {
        let n = col.norm();
        if n > 0.0 {
            col /= n;
        }
    }
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    max / min
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_an_exact_power_law() {
        let ns: Vec<f64> = (1..=6).map(|k| 10.0 * 2f64.powi(k)).collect();
        let r: Vec<f64> = ns.iter().map(|n| 3.0 / n).collect();
        let fit = power_law_fit(&ns, &r, 0.0);
        assert!((fit.slope + 1.0).abs() < 1e-12);
        assert!((fit.intercept - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn basis_fit_reproduces_known_coefficients() {
        let bits = 256;
        let truth = [1.25, -0.5, 3.0, 0.125, -2.0];
        let mut design = Vec::new();
        let mut y = Vec::new();
        for k in 0..12 {
            let n = BigReal::from_f64(64.0 * 1.5f64.powi(k), bits);
            let ln = n.ln();
            let row = vec![&n * &n, &n * &ln, n.clone(), ln.clone(), BigReal::one(bits)];
            let v = row.iter().zip(truth).fold(BigReal::zero(bits), |s, (a, b)| s + a * b);
            design.push(row);
            y.push(v);
        }
        let fit = basis_fit(&design, &y).unwrap();
        for (got, want) in fit.coefficients.iter().zip(truth) {
            assert!((got - want).abs() < 1e-40);
        }
        assert!(fit.condition > 1.0 && fit.condition.is_finite());
    }
}
