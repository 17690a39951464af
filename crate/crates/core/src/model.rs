//! The lemniscate potential `V(z) = |z|^{2d} - t(z^d + z̄^d)`, its droplet
//! `{(Re z^d - t)² + (Im z^d)² ≤ 1/d}` and equilibrium measure.
//!
//! Droplet integrals go through `w = z^d`: the equilibrium measure pushes
//! forward to the uniform measure on the disk `|w - t| ≤ 1/√d`, and the
//! logarithmic potential satisfies `U_V(z) = U_Q(z^d)/d` with
//! `Q(w) = d|w - t|² - dt²`, because `Π_k (z - ζ_k) = z^d - w` over the `d`
//! roots `ζ_k` of `w`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{periodic, GaussLegendre};

/// Relative tolerance used to classify `t ≈ t_c` as critical.
pub const CRITICAL_TOLERANCE: f64 = 1e-9;

const RADIAL_NODES: usize = 48;
const ANGULAR_NODES: usize = 4 * RADIAL_NODES;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemniscateParams {
    pub d: u32,
    pub t: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    /// `t > 1/√d`: the droplet has `d` components.
    MultiComponent,
    /// `t < 1/√d`: one component, density vanishing at the origin.
    ConformalSingularity,
    Critical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    /// `I_V[σ_V]`.
    pub energy: f64,
    /// `F_V` in `U_V + V/2 = F_V` on the droplet.
    pub robin_constant: f64,
    /// `∫ log(ΔV) dσ_V`.
    pub entropy: f64,
    pub method: Method,
}

impl LemniscateParams {
    pub fn new(d: u32, t: f64, c: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("d must be at least 1".into()));
        }
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::Domain(format!("t must be finite and nonnegative, got {t}")));
        }
        if !(c > -1.0 && c.is_finite()) {
            return Err(Error::Domain(format!("c must exceed -1, got {c}")));
        }
        Ok(Self { d, t, c })
    }

    pub fn critical_t(&self) -> f64 {
        critical_t(self.d)
    }

    /// Regime with the default relative tolerance.
    pub fn regime(&self) -> Regime {
        regime(self, CRITICAL_TOLERANCE * self.critical_t())
    }

    pub(crate) fn radius(&self) -> f64 {
        1.0 / f64::from(self.d).sqrt()
    }

    pub(crate) fn require_noncritical(&self) -> Result<Regime> {
        match self.regime() {
            Regime::Critical => {
                Err(Error::Unsupported(format!("t = {} is critical for d = {}; no expansion is available there", self.t, self.d)))
            }
            r => Ok(r),
        }
    }
}

pub fn critical_t(d: u32) -> f64 {
    1.0 / f64::from(d).sqrt()
}

pub fn regime(p: &LemniscateParams, tol: f64) -> Regime {
    let tc = p.critical_t();
    if p.t > tc + tol {
        Regime::MultiComponent
    } else if p.t < tc - tol {
        Regime::ConformalSingularity
    } else {
        Regime::Critical
    }
}

/// `V(z)`, or `V(z) - (2c/n) log|z|` when `n` is given.
pub fn potential_value(p: &LemniscateParams, n: Option<usize>, z: Complex64) -> Result<f64> {
    let zd = z.powu(p.d);
    let v = zd.norm_sqr() - 2.0 * p.t * zd.re;
    match n {
        None => Ok(v),
        Some(_) if p.c == 0.0 => Ok(v),
        Some(n) => {
            if z == Complex64::new(0.0, 0.0) {
                return Err(Error::SingularInput("potential with a point charge at z = 0".into()));
            }
            Ok(v - 2.0 * p.c / n as f64 * z.norm().ln())
        }
    }
}

pub fn droplet_contains(p: &LemniscateParams, z: Complex64) -> bool {
    let w = z.powu(p.d);
    (w.re - p.t).powi(2) + w.im.powi(2) <= 1.0 / f64::from(p.d)
}

/// Boundary residual `(Re z^d - t)² + (Im z^d)² - 1/d`.
pub fn boundary_residual(p: &LemniscateParams, z: Complex64) -> f64 {
    let w = z.powu(p.d);
    (w.re - p.t).powi(2) + w.im.powi(2) - 1.0 / f64::from(p.d)
}

/// Boundary points: all `d` roots of `z^d = t + e^{iθ}/√d` for `samples`
/// uniform `θ`. Points are grouped by branch, each branch continuous in `θ`.
pub fn droplet_boundary(p: &LemniscateParams, samples: usize) -> Vec<Complex64> {
    let samples = samples.max(8);
    let d = p.d as usize;
    let df = f64::from(p.d);
    let r = p.radius();
    let mut out = Vec::with_capacity(d * samples);
    for k in 0..d {
        let mut prev_arg: Option<f64> = None;
        let mut unwrapped = 0.0;
        for i in 0..samples {
            let theta = 2.0 * PI * i as f64 / samples as f64;
            let w = Complex64::new(p.t + r * theta.cos(), r * theta.sin());
            let a = w.arg();
            unwrapped = match prev_arg {
                None => a,
                Some(pa) => {
                    let mut da = a - pa;
                    while da > PI {
                        da -= 2.0 * PI;
                    }
                    while da < -PI {
                        da += 2.0 * PI;
                    }
                    unwrapped + da
                }
            };
            prev_arg = Some(a);
            let phase = (unwrapped + 2.0 * PI * k as f64) / df;
            out.push(Complex64::from_polar(w.norm().powf(1.0 / df), phase));
        }
    }
    out
}

/// Number of loops obtained by chaining boundary points whose distance is
/// at most ten times the largest spacing between consecutive samples.
pub fn boundary_components(p: &LemniscateParams, samples: usize) -> usize {
    let pts = droplet_boundary(p, samples);
    let per = pts.len() / p.d as usize;
    let spacing = pts.chunks(per).flat_map(|b| b.windows(2).map(|w| (w[1] - w[0]).norm())).fold(0.0, f64::max);
    let tol = 10.0 * spacing;
    let mut parent: Vec<usize> = (0..pts.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if (pts[i] - pts[j]).norm() <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    (0..pts.len()).filter(|&i| find(&mut parent, i) == i).count()
}

/// Density of `σ_V` with respect to `d²z`: `d²|z|^{2d-2}/π` on the droplet.
pub fn equilibrium_density(p: &LemniscateParams, z: Complex64) -> f64 {
    if !droplet_contains(p, z) {
        return 0.0;
    }
    let df = f64::from(p.d);
    if p.d == 1 {
        return 1.0 / PI;
    }
    df * df * z.norm_sqr().powi(p.d as i32 - 1) / PI
}

pub fn euler_characteristic(p: &LemniscateParams) -> Result<u32> {
    match p.require_noncritical()? {
        Regime::MultiComponent => Ok(p.d),
        _ => Ok(1),
    }
}

/// `∫ log|z - w| d²w/π` over `|w - p| < R`.
pub fn disk_log_integral(z: Complex64, centre: Complex64, r: f64) -> f64 {
    let s = (z - centre).norm();
    if s > r {
        r * r * s.ln()
    } else {
        r * r * r.ln() - r * r / 2.0 + s * s / 2.0
    }
}

/// Logarithmic potential `∫ log(1/|z - ζ|) dσ_V(ζ)`.
pub fn log_potential(p: &LemniscateParams, z: Complex64) -> f64 {
    let df = f64::from(p.d);
    // σ_Q has density d/π on the disk, so U_Q(w) = -d ∫ log|w - ω| d²ω/π.
    let uq = -df * disk_log_integral(z.powu(p.d), Complex64::new(p.t, 0.0), p.radius());
    uq / df
}

/// Energy, Robin constant and entropy of `σ_V`.
pub fn equilibrium_energy(p: &LemniscateParams, method: Method) -> Result<EnergyReport> {
    let df = f64::from(p.d);
    let entropy = entropy_integral(p, method)?;
    match method {
        Method::ClosedForm => {
            let energy = 3.0 / (4.0 * df) + df.ln() / (2.0 * df) - p.t * p.t;
            let robin = (0.5 + 0.5 * df.ln()) / df - p.t * p.t / 2.0;
            Ok(EnergyReport { energy, robin_constant: robin, entropy, method })
        }
        Method::Quadrature => {
            let (mean_u, mean_v, robin) = droplet_averages(p);
            let energy = mean_u + mean_v;
            Ok(EnergyReport { energy, robin_constant: robin, entropy, method })
        }
    }
}

/// `(∫U_V dσ_V, ∫V dσ_V, average of U_V + V/2 over σ_V)` by a polar grid on
/// the `w` disk, evaluating `V` and `U_V` at every preimage root.
fn droplet_averages(p: &LemniscateParams) -> (f64, f64, f64) {
    let gl = GaussLegendre::new(RADIAL_NODES);
    let df = f64::from(p.d);
    let r = p.radius();
    let centre = Complex64::new(p.t, 0.0);
    let mut acc = [0.0f64; 3];
    let roots: Vec<Complex64> = (0..p.d).map(|k| Complex64::from_polar(1.0, 2.0 * PI * f64::from(k) / df)).collect();
    for (i, slot) in acc.iter_mut().enumerate() {
        *slot = periodic(ANGULAR_NODES, |phi| {
            gl.integrate(0.0, r, |s| {
                let w = centre + Complex64::from_polar(s, phi);
                let z0 = if w.norm() == 0.0 { w } else { w.powf(1.0 / df) };
                let mut f = 0.0;
                for rot in &roots {
                    let z = z0 * rot;
                    let v = potential_value(p, None, z).unwrap_or(0.0);
                    let u = log_potential(p, z);
                    f += match i {
                        0 => u,
                        1 => v,
                        _ => u + v / 2.0,
                    };
                }
                f / df * s
            })
        }) * df
            / PI;
    }
    (acc[0], acc[1], acc[2])
}

/// `∫ log(ΔV) dσ_V` with `ΔV = ∂∂̄V = d²|z|^{2d-2}`.
pub fn entropy_integral(p: &LemniscateParams, method: Method) -> Result<f64> {
    let regime = p.require_noncritical()?;
    let df = f64::from(p.d);
    if p.d == 1 {
        return Ok(0.0);
    }
    match method {
        Method::ClosedForm => Ok(match regime {
            Regime::MultiComponent => 2.0 * df.ln() + 2.0 * (df - 1.0) / df * p.t.ln(),
            _ => (df - 1.0) / df * (df * p.t * p.t - 1.0) + (1.0 + df) / df * df.ln(),
        }),
        Method::Quadrature => {
            // 2 log d + 2(d-1) ∫_{|w-t|<R} log|w| d²w/π
            let r = p.radius();
            let j = if p.t > r {
                let gl = GaussLegendre::new(RADIAL_NODES);
                periodic(ANGULAR_NODES, |phi| {
                    gl.integrate(0.0, r, |s| Complex64::new(p.t + s * phi.cos(), s * phi.sin()).norm().ln() * s)
                })
            } else {
                // polar about the origin, radial part exact
                periodic(8 * ANGULAR_NODES, |phi| {
                    let rho = p.t * phi.cos() + (r * r - (p.t * phi.sin()).powi(2)).sqrt();
                    rho * rho / 2.0 * rho.ln() - rho * rho / 4.0
                })
            } / PI;
            Ok(2.0 * df.ln() + 2.0 * (df - 1.0) * j)
        }
    }
}

/// `(1/12) ∫ |∇φ|² d²z/π` over the droplet minus `|z| ≤ cutoff·n^{-1/(2d)}`,
/// `φ = ½ log ΔV`. For `t > t_c` the origin is outside the droplet and the
/// plain integral is returned.
pub fn regularized_conformal_integral(p: &LemniscateParams, n: usize, cutoff: f64) -> Result<f64> {
    let regime = p.require_noncritical()?;
    if n < 2 || !(cutoff > 0.0) {
        return Err(Error::Domain("need n ≥ 2 and a positive cutoff".into()));
    }
    let df = f64::from(p.d);
    let k = (df - 1.0).powi(2) / 12.0;
    if p.d == 1 {
        return Ok(0.0);
    }
    let r = p.radius();
    match regime {
        Regime::MultiComponent => {
            // |∇φ|² = (d-1)²/|z|²; over S_V this is (1/d) ∫_disk |w|^{-2} d²w.
            let gl = GaussLegendre::new(RADIAL_NODES);
            let v = periodic(ANGULAR_NODES, |phi| {
                gl.integrate(0.0, r, |s| s / Complex64::new(p.t + s * phi.cos(), s * phi.sin()).norm_sqr())
            });
            Ok(k * v / (df * PI))
        }
        _ => {
            let ln_eps = cutoff.ln() - (n as f64).ln() / (2.0 * df);
            let v = periodic(4096, |theta| {
                let phi = df * theta;
                let rho = p.t * phi.cos() + (r * r - (p.t * phi.sin()).powi(2)).sqrt();
                (rho.ln() / df - ln_eps).max(0.0)
            });
            Ok(k * v / PI)
        }
    }
}

/// Least-squares slope of the regularised conformal integral against `log n`.
pub fn conformal_log_coefficient(p: &LemniscateParams, n_grid: &[usize], cutoff: f64) -> Result<f64> {
    let pts: Vec<(f64, f64)> =
        n_grid.iter().map(|&n| Ok(((n as f64).ln(), regularized_conformal_integral(p, n, cutoff)?))).collect::<Result<_>>()?;
    Ok(crate::fit::linear_fit(&pts).slope)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn params(d: u32, t: f64, c: f64) -> LemniscateParams {
        LemniscateParams::new(d, t, c).unwrap()
    }

    #[test]
    fn potential_examples() {
        assert_eq!(potential_value(&params(1, 0.0, 0.0), None, Complex64::new(2.0, 0.0)).unwrap(), 4.0);
        assert_eq!(potential_value(&params(2, 1.0, 0.0), None, Complex64::new(1.0, 0.0)).unwrap(), -1.0);
        let p = params(2, 0.3, 0.5);
        assert!(potential_value(&p, Some(10), Complex64::new(0.0, 0.0)).is_err());
        let z = Complex64::new(0.4, 0.1);
        let with = potential_value(&p, Some(10), z).unwrap();
        let without = potential_value(&p, None, z).unwrap();
        assert_relative_eq!(with - without, -0.1 * z.norm().ln(), epsilon = 1e-15);
    }

    #[test]
    fn critical_values() {
        assert_eq!(critical_t(4), 0.5);
        assert_eq!(critical_t(1), 1.0);
        assert_relative_eq!(critical_t(2), std::f64::consts::FRAC_1_SQRT_2);
        assert_eq!(regime(&params(2, 0.75, 0.0), 0.0), Regime::MultiComponent);
        assert_eq!(regime(&params(3, 0.55, 0.0), 0.0), Regime::ConformalSingularity);
        assert_eq!(regime(&params(1, 1.0, 0.0), 1e-12), Regime::Critical);
    }

    #[test]
    fn droplet_membership() {
        assert!(droplet_contains(&params(1, 0.0, 0.0), Complex64::new(0.5, 0.0)));
        assert!(!droplet_contains(&params(2, 0.75, 0.0), Complex64::new(0.0, 0.0)));
        assert!(droplet_contains(&params(2, 0.65, 0.0), Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn boundary_points_lie_on_the_boundary() {
        for p in [params(1, 0.0, 0.0), params(2, 0.75, 0.0), params(3, 0.4, 0.0), params(4, 0.9, 0.0)] {
            for z in droplet_boundary(&p, 200) {
                assert!(boundary_residual(&p, z).abs() < 1e-12);
            }
        }
        let unit = droplet_boundary(&params(1, 0.0, 0.0), 8);
        assert!(unit.iter().all(|z| (z.norm() - 1.0).abs() < 1e-15));
    }

    #[test]
    fn component_count_matches_euler_characteristic() {
        for (d, t) in [(2, 0.75), (2, 0.65), (3, 0.6), (3, 0.55), (1, 0.3), (4, 0.7), (4, 0.3)] {
            let p = params(d, t, 0.0);
            assert_eq!(boundary_components(&p, 400) as u32, euler_characteristic(&p).unwrap(), "d={d} t={t}");
        }
        assert!(euler_characteristic(&params(1, 1.0, 0.0)).is_err());
    }

    #[test]
    fn density_examples() {
        assert_relative_eq!(equilibrium_density(&params(1, 0.0, 0.0), Complex64::new(0.3, 0.0)), 1.0 / PI);
        assert_eq!(equilibrium_density(&params(2, 0.65, 0.0), Complex64::new(0.0, 0.0)), 0.0);
    }

    /// Mass of σ_V by a z-plane polar grid about the origin that evaluates
    /// `equilibrium_density` directly.
    fn mass_in_z_plane(p: &LemniscateParams) -> f64 {
        let df = f64::from(p.d);
        let r = p.radius();
        let gl = GaussLegendre::new(64);
        let radial = |theta: f64, lo: f64, hi: f64| {
            gl.integrate(lo, hi, |rr| {
                // nudge inward so the boundary node is classified as inside
                let z = Complex64::from_polar(rr, theta);
                equilibrium_density(p, z * (1.0 - 1e-14)) * rr
            })
        };
        if p.t < r {
            periodic(512, |theta| {
                let phi = df * theta;
                let rho = p.t * phi.cos() + (r * r - (p.t * phi.sin()).powi(2)).sqrt();
                radial(theta, 0.0, rho.powf(1.0 / df))
            })
        } else {
            // each component spans dθ = arcsin((R/t) sin ψ), ψ ∈ [-π/2, π/2]
            let q = r / p.t;
            let gl_psi = GaussLegendre::new(96);
            (0..p.d)
                .map(|k| {
                    gl_psi.integrate(-PI / 2.0, PI / 2.0, |psi| {
                        let phi = (q * psi.sin()).asin();
                        let jac = q * psi.cos() / (1.0 - (q * psi.sin()).powi(2)).sqrt() / df;
                        let root = (r * r - (p.t * phi.sin()).powi(2)).max(0.0).sqrt();
                        let lo = (p.t * phi.cos() - root).powf(1.0 / df);
                        let hi = (p.t * phi.cos() + root).powf(1.0 / df);
                        let theta = phi / df + 2.0 * PI * f64::from(k) / df;
                        radial(theta, lo * (1.0 + 1e-14), hi) * jac
                    })
                })
                .sum()
        }
    }

    #[test]
    fn equilibrium_measure_has_unit_mass() {
        for (d, t) in [(1, 0.0), (1, 0.5), (2, 0.3), (2, 0.65), (2, 1.0), (3, 0.5), (3, 0.8), (4, 0.2)] {
            let m = mass_in_z_plane(&params(d, t, 0.0));
            assert!((m - 1.0).abs() < 1e-8, "d={d} t={t}: {m}");
        }
    }

    #[test]
    fn energy_examples_and_quadrature_agreement() {
        let e = equilibrium_energy(&params(1, 0.0, 0.0), Method::ClosedForm).unwrap();
        assert_relative_eq!(e.energy, 0.75);
        let e = equilibrium_energy(&params(2, 0.0, 0.0), Method::ClosedForm).unwrap();
        assert_relative_eq!(e.energy, 3.0 / 8.0 + 2f64.ln() / 4.0);
        for (d, t) in [(2, 1.0), (1, 0.4), (3, 0.5), (3, 0.8), (4, 0.3)] {
            let p = params(d, t, 0.0);
            let a = equilibrium_energy(&p, Method::ClosedForm).unwrap();
            let b = equilibrium_energy(&p, Method::Quadrature).unwrap();
            assert!((a.energy - b.energy).abs() < 1e-8, "d={d} t={t}");
            assert!((a.robin_constant - b.robin_constant).abs() < 1e-8);
        }
    }

    #[test]
    fn energy_equals_robin_plus_half_mean_potential() {
        for (d, t) in [(2, 1.0), (3, 0.5)] {
            let p = params(d, t, 0.0);
            let (_, mean_v, _) = droplet_averages(&p);
            let q = equilibrium_energy(&p, Method::Quadrature).unwrap();
            assert!((q.energy - q.robin_constant - mean_v / 2.0).abs() < 1e-10);
        }
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy_integral(&params(1, 0.3, 0.0), Method::ClosedForm).unwrap(), 0.0);
        assert_relative_eq!(entropy_integral(&params(2, 1.0, 0.0), Method::ClosedForm).unwrap(), 2.0 * 2f64.ln());
        for (d, t) in [(3, 0.5), (2, 1.0), (2, 0.3), (4, 0.8), (3, 0.0)] {
            let p = params(d, t, 0.0);
            let a = entropy_integral(&p, Method::ClosedForm).unwrap();
            let b = entropy_integral(&p, Method::Quadrature).unwrap();
            assert!((a - b).abs() < 1e-6, "d={d} t={t}: {a} vs {b}");
        }
    }

    #[test]
    fn variational_conditions() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for p in [params(2, 1.0, 0.0), params(3, 0.5, 0.0)] {
            let f = equilibrium_energy(&p, Method::ClosedForm).unwrap().robin_constant;
            let (mut inside, mut outside) = (0, 0);
            while inside < 20 || outside < 20 {
                let z = Complex64::new(rng.gen_range(-1.6..1.6), rng.gen_range(-1.6..1.6));
                let g = log_potential(&p, z) + potential_value(&p, None, z).unwrap() / 2.0;
                if droplet_contains(&p, z) {
                    inside += 1;
                    assert!((g - f).abs() < 1e-12);
                } else {
                    outside += 1;
                    assert!(g >= f - 1e-12);
                }
            }
        }
    }

    #[test]
    fn conformal_integral_properties() {
        assert_eq!(regularized_conformal_integral(&params(1, 0.3, 0.0), 50, 1.0).unwrap(), 0.0);
        let p = params(2, 0.3, 0.0);
        let grid = [100, 200, 400, 800, 1600, 3200];
        let slope = conformal_log_coefficient(&p, &grid, 0.5).unwrap();
        assert!((slope / (1.0 / 24.0) - 1.0).abs() < 0.05, "{slope}");
        let shift: Vec<f64> = grid
            .iter()
            .map(|&n| regularized_conformal_integral(&p, n, 0.5).unwrap() - regularized_conformal_integral(&p, n, 0.25).unwrap())
            .collect();
        assert!(shift.windows(2).all(|w| (w[0] - w[1]).abs() < 1e-12));
        assert!(regularized_conformal_integral(&params(2, 1.0, 0.0), 50, 1.0).unwrap() > 0.0);
    }

    proptest! {
        #[test]
        fn discrete_rotational_symmetry(re in -1.5f64..1.5, im in -1.5f64..1.5, t in 0.0f64..1.2) {
            let p = params(3, t, 0.0);
            let z = Complex64::new(re, im);
            let rz = z * Complex64::from_polar(1.0, 2.0 * PI / 3.0);
            let v1 = potential_value(&p, None, z).unwrap();
            let v2 = potential_value(&p, None, rz).unwrap();
            prop_assert!((v1 - v2).abs() <= 1e-14 * (1.0 + v1.abs()));
            let d1 = equilibrium_density(&p, z);
            let d2 = equilibrium_density(&p, rz);
            // membership may flip only within rounding of the boundary
            if boundary_residual(&p, z).abs() > 1e-12 {
                prop_assert!((d1 - d2).abs() <= 1e-14 * (1.0 + d1.abs()));
            }
        }
    }
}
