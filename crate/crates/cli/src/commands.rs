use serde::Serialize;
use serde_json::{json, Value};

use lemniscate_core::asympt::{coefficients, conjectured_log_coefficient, functionals, sum_rule};
use lemniscate_core::exact::{
    log_z_gram, log_z_lemniscate, log_z_lemniscate_parts, log_z_radial, map_parameters, ortho_norms, GRAM_DEGREE_CAP,
};
use lemniscate_core::harness::{
    empirical_vs_equilibrium, extract_oscillation, run_convergence, sample_equilibrium, sample_gas, Report, SamplerConfig,
};
use lemniscate_core::model::{entropy_integral, equilibrium_energy, Method};
use lemniscate_core::moments::{log_moment_asymptotic_bulk, log_moment_asymptotic_outside, log_moment_exact, MomentQuery};
use lemniscate_core::{BigReal, Error, LemniscateParams, Regime, Result};

use crate::config::Format;
use crate::ModelArgs;

pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

pub struct Output {
    pub json: Value,
    pub table: Table,
    pub default_format: Format,
    pub warning: Option<String>,
    /// False when a verification failed.
    pub ok: bool,
}

impl Output {
    fn new<T: Serialize>(
        kind: &'static str,
        bits: u32,
        seed: Option<u64>,
        payload: T,
        table: Table,
        default_format: Format,
    ) -> Result<Self> {
        let json = serde_json::to_value(Report::new(kind, bits, seed, payload)).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(Self { json, table, default_format, warning: None, ok: true })
    }
}

fn params(m: &ModelArgs) -> Result<LemniscateParams> {
    LemniscateParams::new(m.d, m.t, m.c)
}

pub fn coeffs(model: &ModelArgs, n: usize, bits: u32) -> Result<Output> {
    let p = params(model)?;
    let k = coefficients(&p, n, bits)?;
    let f = if p.c == 0.0 { Some(functionals(&p, n, bits)?) } else { None };
    let mut rows: Vec<Vec<String>> =
        ["C1", "C2", "C3", "C4", "C5"].iter().zip(k.as_array()).map(|(name, v)| vec![name.to_string(), v.to_decimal()]).collect();
    rows.push(vec!["C5_oscillatory".into(), k.c5_oscillatory.to_decimal()]);
    if let Some(f) = &f {
        rows.push(vec!["F".into(), f.f.to_string()]);
        rows.push(vec!["G_n".into(), f.g_n.to_string()]);
        rows.push(vec!["H_n".into(), f.h_n.to_string()]);
        rows.push(vec!["chi".into(), f.chi.to_string()]);
    }
    let payload = json!({ "params": p, "n": n, "coefficients": k, "functionals": f });
    Output::new("coeffs", bits, None, payload, Table { headers: vec!["name", "value"], rows }, Format::Json)
}

pub fn exact(model: &ModelArgs, ns: &[usize], norms: bool, bits: u32) -> Result<Output> {
    let p = params(model)?;
    if norms {
        let &n = ns.first().ok_or_else(|| Error::Domain("no n given".into()))?;
        let r = map_parameters(n, &p, bits)?;
        let mut rows = Vec::new();
        let mut tables = Vec::new();
        for l in 0..p.d as usize {
            let top = if l < r.m { r.n_scale } else { r.n_scale - 1 };
            let t = ortho_norms(r.n_scale, &r.half_gamma(l), &r.a, top, bits)?;
            let logs = t.log_norms();
            for (j, v) in logs.iter().enumerate() {
                rows.push(vec![l.to_string(), j.to_string(), v.to_decimal()]);
            }
            tables.push(json!({ "l": l, "c": r.half_gamma(l), "log_norms": logs }));
        }
        let payload = json!({ "params": p, "n": n, "reduced": r, "tables": tables });
        return Output::new("norms", bits, None, payload, Table { headers: vec!["l", "j", "log_h"], rows }, Format::Csv);
    }
    let mut rows = Vec::new();
    let mut parts = Vec::new();
    for &n in ns {
        let x = log_z_lemniscate_parts(n, &p, bits)?;
        rows.push(vec![n.to_string(), x.total().to_decimal(), x.a1.to_decimal(), x.a2.to_decimal(), x.a3.to_decimal()]);
        parts.push(json!({ "n": n, "log_z": x.total(), "parts": x }));
    }
    let payload = json!({ "params": p, "values": parts });
    Output::new("exact", bits, None, payload, Table { headers: vec!["n", "log_z", "a1", "a2", "a3"], rows }, Format::Json)
}

#[derive(Serialize)]
struct MomentRow {
    n: usize,
    a: f64,
    gamma: f64,
    exact: BigReal,
    asymptotic: BigReal,
    residual: f64,
}

pub fn moments(a: f64, gamma: f64, ns: &[usize], corrections: usize, bits: u32) -> Result<Output> {
    let mut out = Vec::new();
    for &n in ns {
        let exact = log_moment_exact(&MomentQuery::new(n, a, gamma)?, bits)?;
        let asymptotic = if a < 1.0 {
            log_moment_asymptotic_bulk(n, a, gamma, corrections, bits)?
        } else {
            log_moment_asymptotic_outside(n, a, gamma, bits)?
        };
        let residual = (&exact - &asymptotic).to_f64();
        out.push(MomentRow { n, a, gamma, exact, asymptotic, residual });
    }
    let rows = out
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.a.to_string(),
                r.gamma.to_string(),
                r.exact.to_decimal(),
                r.asymptotic.to_decimal(),
                format!("{:e}", r.residual),
            ]
        })
        .collect();
    let table = Table { headers: vec!["N", "a", "gamma", "exact", "asymptotic", "residual"], rows };
    Output::new("moments", bits, None, json!({ "corrections": corrections, "rows": out }), table, Format::Csv)
}

fn geometric(lo: usize, hi: usize, points: usize) -> Vec<usize> {
    let points = points.max(2);
    let mut g: Vec<usize> = (0..points)
        .map(|k| (lo as f64 * (hi as f64 / lo as f64).powf(k as f64 / (points - 1) as f64)).round() as usize)
        .collect();
    g.dedup();
    g
}

pub fn converge(model: &ModelArgs, n_min: usize, n_max: usize, points: usize, bits: u32) -> Result<Output> {
    if n_min == 0 || n_max < n_min {
        return Err(Error::Domain("need 0 < n-min ≤ n-max".into()));
    }
    let p = params(model)?;
    let r = run_convergence(&p, &geometric(n_min, n_max, points), bits)?;
    let rows = r
        .rows
        .iter()
        .map(|row| vec![row.n.to_string(), row.exact.to_decimal(), row.asymptotic.to_decimal(), format!("{:e}", row.remainder)])
        .collect();
    let table = Table { headers: vec!["n", "exact", "asymptotic", "remainder"], rows };
    Output::new("convergence", bits, None, r, table, Format::Json)
}

pub fn oscillation(model: &ModelArgs, n_min: usize, n_max: usize, bits: u32) -> Result<Output> {
    if n_max < n_min {
        return Err(Error::Domain("need n-min ≤ n-max".into()));
    }
    let p = params(model)?;
    let r = extract_oscillation(&p, &(n_min..=n_max).collect::<Vec<_>>(), bits)?;
    let rows = r
        .classes
        .iter()
        .map(|c| {
            vec![c.m.to_string(), c.ns.len().to_string(), c.mean.to_string(), c.constant.to_string(), c.predicted.to_string()]
        })
        .collect();
    let table = Table { headers: vec!["m", "count", "mean_residual", "constant", "predicted"], rows };
    Output::new("oscillation", bits, None, r, table, Format::Json)
}

#[allow(clippy::too_many_arguments)]
pub fn sample(
    model: &ModelArgs,
    n: usize,
    sweeps: usize,
    step: f64,
    equilibrium: bool,
    bins: usize,
    seed: u64,
    bits: u32,
) -> Result<Output> {
    let p = params(model)?;
    let (points, cloud) = if equilibrium {
        (sample_equilibrium(&p, n, seed), None)
    } else {
        let c = sample_gas(&p, n, &SamplerConfig::new(sweeps, step, seed))?;
        (c.points.clone(), Some(c))
    };
    let stats = empirical_vs_equilibrium(&points, &p, bins)?;
    let rows = points.iter().map(|z| vec![z.re.to_string(), z.im.to_string()]).collect();
    let warning = cloud.as_ref().and_then(|c| c.warning.clone());
    let payload = json!({ "params": p, "n": n, "direct": equilibrium, "chain": cloud, "points": points, "statistics": stats });
    let mut out = Output::new("sample", bits, Some(seed), payload, Table { headers: vec!["re", "im"], rows }, Format::Csv)?;
    out.warning = warning;
    Ok(out)
}

#[derive(Serialize)]
struct Check {
    identity: &'static str,
    lhs: f64,
    rhs: f64,
    abs_diff: f64,
    tolerance: f64,
    pass: bool,
}

fn check(identity: &'static str, lhs: f64, rhs: f64, tolerance: f64) -> Check {
    let abs_diff = (lhs - rhs).abs();
    Check { identity, lhs, rhs, abs_diff, tolerance, pass: abs_diff < tolerance }
}

pub fn verify_identities(model: &ModelArgs, bits: u32) -> Result<Output> {
    let p = params(model)?;
    let regime = p.regime();
    if regime == Regime::Critical {
        return Err(Error::Regime("identities are stated away from t = 1/√d".into()));
    }
    let d = p.d as usize;
    let n = 4 * d + 1;
    let k = coefficients(&p, n, bits)?;
    let mut checks = vec![check("C2 = 1/2", k.c2.to_f64(), 0.5, 1e-15)];
    if p.c == 0.0 {
        let energy = equilibrium_energy(&p, Method::Quadrature)?.energy;
        checks.push(check("C1 = -energy", k.c1.to_f64(), -energy, 1e-8));
        let entropy = entropy_integral(&p, Method::Quadrature)?;
        let ln2pi = (2.0 * std::f64::consts::PI).ln();
        checks.push(check("C3 = log(2π)/2 - 1 - entropy/2", k.c3.to_f64(), ln2pi / 2.0 - 1.0 - entropy / 2.0, 1e-8));
        let chi = if regime == Regime::MultiComponent { p.d } else { 1 };
        let want =
            if regime == Regime::MultiComponent { (6.0 - f64::from(chi)) / 12.0 } else { conjectured_log_coefficient(1, p.d) };
        checks.push(check("C4 from topology", k.c4.to_f64(), want, 1e-14));
    }
    for m in 0..d {
        let s = sum_rule(&p, m, bits)?;
        checks.push(check("A1 + A2 + A3 reproduce C1..C5", s.max_abs_difference, 0.0, 1e-10));
    }
    let gram_n = GRAM_DEGREE_CAP.min(3 * d);
    let g = log_z_gram(gram_n, &p, bits)?.log_z.to_f64();
    checks.push(check("decomposition = Gram determinant", log_z_lemniscate(gram_n, &p, bits)?.to_f64(), g, 1e-10));
    let radial = LemniscateParams::new(p.d, 0.0, p.c)?;
    checks.push(check(
        "t = 0 decomposition = Barnes G form",
        log_z_lemniscate(n, &radial, bits)?.to_f64(),
        log_z_radial(n, p.d, p.c, bits)?.to_f64(),
        1e-10,
    ));
    let ok = checks.iter().all(|c| c.pass);
    let rows = checks
        .iter()
        .map(|c| {
            vec![
                c.identity.to_string(),
                format!("{:e}", c.lhs),
                format!("{:e}", c.rhs),
                format!("{:e}", c.abs_diff),
                c.pass.to_string(),
            ]
        })
        .collect();
    let table = Table { headers: vec!["identity", "lhs", "rhs", "abs_diff", "pass"], rows };
    let mut out = Output::new(
        "verify-identities",
        bits,
        None,
        json!({ "params": p, "checks": checks, "all_pass": ok }),
        table,
        Format::Json,
    )?;
    out.ok = ok;
    Ok(out)
}
