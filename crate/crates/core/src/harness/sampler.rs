//! Metropolis sampling of the β = 2 gas and direct sampling of `σ_V`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{droplet_boundary, droplet_contains, LemniscateParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplerConfig {
    pub sweeps: usize,
    /// Initial proposal standard deviation.
    pub step: f64,
    pub seed: u64,
    /// Record the confinement fraction every this many post-burn-in sweeps.
    pub record_every: usize,
    /// Distance to the droplet counted as confined.
    pub confinement_tolerance: f64,
}

impl SamplerConfig {
    pub fn new(sweeps: usize, step: f64, seed: u64) -> Self {
        Self { sweeps, step, seed, record_every: 10, confinement_tolerance: 0.05 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleCloud {
    pub params: LemniscateParams,
    pub n: usize,
    pub seed: u64,
    pub points: Vec<Complex64>,
    /// Acceptance rate after tuning stopped.
    pub acceptance_rate: f64,
    pub sweeps: usize,
    pub burn_in: usize,
    pub final_step: f64,
    /// Fraction of points within the tolerance of the droplet, at each recorded sweep.
    pub confinement_trace: Vec<f64>,
    pub warning: Option<String>,
}

impl SampleCloud {
    /// Confinement over every recorded post-burn-in configuration.
    pub fn mean_confinement(&self) -> f64 {
        if self.confinement_trace.is_empty() {
            return f64::NAN;
        }
        self.confinement_trace.iter().sum::<f64>() / self.confinement_trace.len() as f64
    }
}

/// `σ_V`-distributed points: uniform `w` in `|w - t| ≤ 1/√d`, then a uniformly
/// chosen `d`-th root.
pub fn sample_equilibrium(p: &LemniscateParams, n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    draw_equilibrium(p, n, &mut rng)
}

fn draw_equilibrium(p: &LemniscateParams, n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let df = f64::from(p.d);
    let r = 1.0 / df.sqrt();
    (0..n)
        .map(|_| {
            let rho = r * rng.gen::<f64>().sqrt();
            let theta = 2.0 * PI * rng.gen::<f64>();
            let w = Complex64::new(p.t + rho * theta.cos(), rho * theta.sin());
            let k = rng.gen_range(0..p.d);
            Complex64::from_polar(w.norm().powf(1.0 / df), (w.arg() + 2.0 * PI * f64::from(k)) / df)
        })
        .collect()
}

/// `n V(z) - 2c log|z|`.
fn external(p: &LemniscateParams, n: f64, z: Complex64) -> f64 {
    let zd = z.powu(p.d);
    let mut v = n * (zd.norm_sqr() - 2.0 * p.t * zd.re);
    if p.c != 0.0 {
        v -= 2.0 * p.c * z.norm().ln();
    }
    v
}

/// Distance from `z` to `S_V` against a boundary polyline of `boundary.len()` points.
pub fn distance_to_droplet(p: &LemniscateParams, boundary: &[Complex64], z: Complex64) -> f64 {
    if droplet_contains(p, z) {
        return 0.0;
    }
    boundary.iter().map(|b| (b - z).norm()).fold(f64::INFINITY, f64::min)
}

fn confinement(p: &LemniscateParams, boundary: &[Complex64], pts: &[Complex64], tol: f64) -> f64 {
    pts.iter().filter(|&&z| distance_to_droplet(p, boundary, z) <= tol).count() as f64 / pts.len() as f64
}

/// Metropolis chain for the density `∝ Π|z_j - z_k|² Π e^{-n V^{(c)}(z_j)}` with
/// single-site Gaussian proposals, started from a `σ_V` sample. The step is
/// doubled or halved during the first 20% of sweeps to keep the acceptance
/// between 30% and 50%, then frozen.
pub fn sample_gas(p: &LemniscateParams, n: usize, cfg: &SamplerConfig) -> Result<SampleCloud> {
    if n < 2 || !(cfg.step > 0.0) || cfg.sweeps == 0 {
        return Err(Error::Domain("need n ≥ 2, a positive step and at least one sweep".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut z = draw_equilibrium(p, n, &mut rng);
    let nf = n as f64;
    let boundary = droplet_boundary(p, 4096);
    let burn_in = cfg.sweeps / 5;
    let mut step = cfg.step;
    let (mut acc, mut tried) = (0usize, 0usize);
    let (mut window_acc, mut window_tried) = (0usize, 0usize);
    let mut trace = Vec::new();
    for sweep in 0..cfg.sweeps {
        for j in 0..n {
            let old = z[j];
            let dx: f64 = rng.sample(StandardNormal);
            let dy: f64 = rng.sample(StandardNormal);
            let new = old + Complex64::new(dx, dy) * step;
            let mut delta = external(p, nf, new) - external(p, nf, old);
            for (k, zk) in z.iter().enumerate() {
                if k != j {
                    delta -= 2.0 * ((new - zk).norm() / (old - zk).norm()).ln();
                }
            }
            let accept = delta <= 0.0 || rng.gen::<f64>() < (-delta).exp();
            if accept {
                z[j] = new;
            }
            if sweep < burn_in {
                window_tried += 1;
                window_acc += usize::from(accept);
            } else {
                tried += 1;
                acc += usize::from(accept);
            }
        }
        if sweep < burn_in && (sweep + 1) % 10 == 0 {
            let rate = window_acc as f64 / window_tried as f64;
            if rate < 0.3 {
                step /= 2.0;
            } else if rate > 0.5 {
                step *= 2.0;
            }
            window_acc = 0;
            window_tried = 0;
        }
        if sweep >= burn_in && (sweep - burn_in) % cfg.record_every.max(1) == 0 {
            trace.push(confinement(p, &boundary, &z, cfg.confinement_tolerance));
        }
    }
    let acceptance_rate = if tried > 0 { acc as f64 / tried as f64 } else { f64::NAN };
    let warning = (!(0.05..=0.95).contains(&acceptance_rate))
        .then(|| format!("acceptance rate {acceptance_rate:.3} outside [0.05, 0.95] after tuning"));
    Ok(SampleCloud {
        params: *p,
        n,
        seed: cfg.seed,
        points: z,
        acceptance_rate,
        sweeps: cfg.sweeps,
        burn_in,
        final_step: step,
        confinement_trace: trace,
        warning,
    })
}

/// Law of `|w|` for `w` uniform on `|w - t| ≤ R`: area of the disk inside `|w| ≤ s` over `πR²`.
pub fn radial_cdf(p: &LemniscateParams, s: f64) -> f64 {
    let r = 1.0 / f64::from(p.d).sqrt();
    let t = p.t;
    if s <= 0.0 {
        return 0.0;
    }
    if s >= t + r {
        return 1.0;
    }
    if s <= (t - r).max(r - t) {
        // one circle contains the other, or they are disjoint
        return if t <= r - s || (t < r && s <= r - t) { (s / r).powi(2) } else { 0.0 };
    }
    // lens area of two intersecting circles of radii s and r at distance t
    let a1 = ((t * t + s * s - r * r) / (2.0 * t * s)).clamp(-1.0, 1.0).acos();
    let a2 = ((t * t + r * r - s * s) / (2.0 * t * r)).clamp(-1.0, 1.0).acos();
    let k = ((-t + s + r) * (t + s - r) * (t - s + r) * (t + s + r)).max(0.0).sqrt();
    (s * s * a1 + r * r * a2 - 0.5 * k) / (PI * r * r)
}

#[derive(Debug, Clone, Serialize)]
pub struct DropletStatistics {
    pub in_droplet_fraction: f64,
    /// Fraction within `tolerance` of the droplet.
    pub near_droplet_fraction: f64,
    pub tolerance: f64,
    /// Bin edges of `|z|^d`.
    pub edges: Vec<f64>,
    pub empirical_cdf: Vec<f64>,
    pub equilibrium_cdf: Vec<f64>,
    /// `max |empirical - equilibrium|` over the edges.
    pub sup_distance: f64,
}

/// Compare a point cloud with `σ_V`: confinement and the distribution of `|z|^d`.
pub fn empirical_vs_equilibrium(points: &[Complex64], p: &LemniscateParams, radial_bins: usize) -> Result<DropletStatistics> {
    if points.is_empty() || radial_bins == 0 {
        return Err(Error::Domain("need a nonempty cloud and at least one bin".into()));
    }
    let tolerance = 0.05;
    let boundary = droplet_boundary(p, 4096);
    let n = points.len() as f64;
    let inside = points.iter().filter(|&&z| droplet_contains(p, z)).count() as f64 / n;
    let near = confinement(p, &boundary, points, tolerance);
    let r = 1.0 / f64::from(p.d).sqrt();
    let (lo, hi) = ((p.t - r).max(0.0), p.t + r);
    let mut radii: Vec<f64> = points.iter().map(|z| z.norm().powi(p.d as i32)).collect();
    radii.sort_by(f64::total_cmp);
    let edges: Vec<f64> = (1..=radial_bins).map(|k| lo + (hi - lo) * k as f64 / radial_bins as f64).collect();
    let empirical_cdf: Vec<f64> = edges.iter().map(|&e| radii.partition_point(|&x| x <= e) as f64 / n).collect();
    let equilibrium_cdf: Vec<f64> = edges.iter().map(|&e| radial_cdf(p, e)).collect();
    let sup_distance = empirical_cdf.iter().zip(&equilibrium_cdf).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(DropletStatistics {
        in_droplet_fraction: inside,
        near_droplet_fraction: near,
        tolerance,
        edges,
        empirical_cdf,
        equilibrium_cdf,
        sup_distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::GaussLegendre;

    #[test]
    fn radial_cdf_matches_quadrature() {
        for (d, t) in [(2u32, 0.75), (2, 0.3), (3, 0.2), (1, 0.4), (3, 0.9)] {
            let p = LemniscateParams::new(d, t, 0.0).unwrap();
            let r = 1.0 / f64::from(d).sqrt();
            let gl = GaussLegendre::new(64);
            for s in [0.1, 0.35, 0.6, 0.9, 1.2] {
                // area of {|w - t| ≤ r, |w| ≤ s} in polar coordinates about 0
                let area = crate::quad::periodic(2048, |phi| {
                    gl.integrate(0.0, s, |rho| {
                        let w = Complex64::from_polar(rho, phi);
                        if (w - t).norm() <= r {
                            rho
                        } else {
                            0.0
                        }
                    })
                });
                assert!((radial_cdf(&p, s) - area / (PI * r * r)).abs() < 2e-3, "d={d} t={t} s={s}");
            }
        }
    }

    #[test]
    fn direct_sampler_reproduces_equilibrium() {
        let p = LemniscateParams::new(2, 0.75, 0.0).unwrap();
        let pts = sample_equilibrium(&p, 2000, 11);
        let s = empirical_vs_equilibrium(&pts, &p, 40).unwrap();
        assert_eq!(s.in_droplet_fraction, 1.0);
        assert!(s.sup_distance < 0.05);
    }

    #[test]
    fn seeds_are_deterministic() {
        let p = LemniscateParams::new(2, 0.75, 0.0).unwrap();
        let cfg = SamplerConfig::new(20, 0.05, 3);
        let a = sample_gas(&p, 30, &cfg).unwrap();
        let b = sample_gas(&p, 30, &cfg).unwrap();
        assert_eq!(a.points, b.points);
        let c = sample_gas(&p, 30, &SamplerConfig::new(20, 0.05, 4)).unwrap();
        assert_ne!(a.points, c.points);
    }

    #[test]
    fn two_particle_ginibre_spacing() {
        // n = 2, V = |z|²: with u = z1 - z2 the weight is |u|² e^{-|u|²} ⊗ e^{-4|v|²},
        // so E|u|² = ∫ r⁵ e^{-r²} dr / ∫ r³ e^{-r²} dr, evaluated by quadrature
        let gl = GaussLegendre::new(96);
        let num = gl.integrate(0.0, 12.0, |r| r.powi(5) * (-r * r).exp());
        let den = gl.integrate(0.0, 12.0, |r| r.powi(3) * (-r * r).exp());
        let oracle = num / den;
        let p = LemniscateParams::new(1, 0.0, 0.0).unwrap();
        let samples: Vec<f64> = (100..140)
            .map(|seed| {
                let cloud = sample_gas(&p, 2, &SamplerConfig::new(2000, 0.5, seed)).unwrap();
                (cloud.points[0] - cloud.points[1]).norm_sqr()
            })
            .collect();
        let mean = samples.iter().sum::<f64>() / samples.len() as f64;
        let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (samples.len() - 1) as f64;
        let se = (var / samples.len() as f64).sqrt();
        assert!((mean - oracle).abs() < 3.0 * se, "{mean} vs {oracle} ± {se}");
    }
}
