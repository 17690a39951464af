use proptest::prelude::*;

use lemniscate_core::asympt::{coefficients, conjectured_log_coefficient};
use lemniscate_core::exact::{lemniscate_moment, log_z_lemniscate, map_parameters, ortho_norms};
use lemniscate_core::harness::{extract_oscillation, sample_gas, Report, SamplerConfig};
use lemniscate_core::model::euler_characteristic;
use lemniscate_core::moments::{
    log_moment_asymptotic_bulk, log_moment_asymptotic_outside, log_moment_exact, log_moment_unified_bulk, MomentQuery,
};
use lemniscate_core::{BigReal, LemniscateParams, LogValue, Regime};

const BITS: u32 = 192;

fn noncritical(d: u32, t: f64, c: f64) -> Option<LemniscateParams> {
    let p = LemniscateParams::new(d, t, c).ok()?;
    ((t - p.critical_t()).abs() > 0.05).then_some(p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parameter_map(d in 1u32..6, n in 1usize..200, t in 0.0f64..2.0, c in -0.95f64..3.0) {
        let p = LemniscateParams::new(d, t, c).unwrap();
        prop_assume!(n >= d as usize);
        let r = map_parameters(n, &p, BITS).unwrap();
        prop_assert_eq!(r.n_scale * d as usize + r.m, n);
        prop_assert!(r.m < d as usize);
        let a = (n as f64 / r.n_scale as f64).sqrt() * t;
        prop_assert!((r.a.to_f64() - a).abs() <= 1e-14 * a.max(1.0));
        for g in &r.gammas {
            prop_assert!(*g > -2.0);
        }
    }

    #[test]
    fn second_coefficient_is_one_half(d in 1u32..6, t in 0.0f64..2.0, c in -0.9f64..2.0, n in 6usize..60) {
        let p = noncritical(d, t, c);
        prop_assume!(p.is_some());
        let k = coefficients(&p.unwrap(), n, BITS).unwrap();
        prop_assert_eq!(k.c2.to_f64(), 0.5);
    }

    #[test]
    fn log_coefficient_matches_topology(d in 1u32..6, t in 0.0f64..2.0, n in 6usize..60) {
        let p = noncritical(d, t, 0.0);
        prop_assume!(p.is_some());
        let p = p.unwrap();
        let k = coefficients(&p, n, BITS).unwrap();
        let want = match k.regime {
            Regime::MultiComponent => (6.0 - f64::from(euler_characteristic(&p).unwrap())) / 12.0,
            _ => conjectured_log_coefficient(1, d),
        };
        prop_assert!((k.c4.to_f64() - want).abs() < 1e-14);
        if k.regime == Regime::MultiComponent && n % d as usize == 0 {
            prop_assert!(k.c5_oscillatory.is_zero());
        }
    }

    #[test]
    fn moments_vanish_at_zero_exponent(n in 1usize..40, a in 0.0f64..0.95) {
        let q = MomentQuery::new(n, a, 0.0).unwrap();
        prop_assert!(log_moment_exact(&q, BITS).unwrap().is_zero());
        prop_assert!(log_moment_asymptotic_bulk(n, a, 0.0, 4, BITS).unwrap().is_zero());
        prop_assert!(log_moment_unified_bulk(n, a, 0.0, BITS).unwrap().is_zero());
        prop_assert!(log_moment_asymptotic_outside(n, 1.0 + a + 0.05, 0.0, BITS).unwrap().is_zero());
    }

    #[test]
    fn moments_grow_with_a(n in 2usize..20, gamma in 0.1f64..3.0, a in 0.0f64..2.0) {
        let lo = log_moment_exact(&MomentQuery::new(n, a, gamma).unwrap(), BITS).unwrap();
        let hi = log_moment_exact(&MomentQuery::new(n, a + 0.1, gamma).unwrap(), BITS).unwrap();
        prop_assert!(hi >= lo);
    }

    #[test]
    fn band_structure(d in 2u32..5, t in 0.1f64..1.5, c in -0.5f64..1.5, j in 0usize..10, k in 0usize..10) {
        let p = LemniscateParams::new(d, t, c).unwrap();
        let m = lemniscate_moment(10, &p, j, k, BITS);
        if j % d as usize != k % d as usize {
            prop_assert!(m.abs() < BigReal::from_f64(2.0, BITS).powi(-(BITS as i32) / 2));
        } else {
            prop_assert!(m.signum() > 0);
        }
    }

    #[test]
    fn norms_are_positive(n in 1usize..30, c in -0.9f64..3.0, a in 0.0f64..2.5) {
        let t = ortho_norms(n, &BigReal::from_f64(c, BITS), &BigReal::from_f64(a, BITS), n, BITS).unwrap();
        for h in &t.norms {
            prop_assert!(h.signum() > 0);
        }
    }

    #[test]
    fn log_values_multiply(x in -1e6f64..1e6, y in -1e6f64..1e6) {
        let (bx, by) = (BigReal::from_f64(x, BITS), BigReal::from_f64(y, BITS));
        let prod = &LogValue::from_big(&bx) * &LogValue::from_big(&by);
        let want = &bx * &by;
        prop_assert_eq!(prod.sign, want.signum());
        if !want.is_zero() {
            prop_assert!((prod.to_big() - &want).abs() <= want.abs() * 1e-40);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn sampler_output_shape(seed in any::<u64>(), n in 2usize..40) {
        let p = LemniscateParams::new(2, 0.75, 0.0).unwrap();
        let cloud = sample_gas(&p, n, &SamplerConfig::new(40, 0.1, seed)).unwrap();
        prop_assert_eq!(cloud.points.len(), n);
        prop_assert!(cloud.acceptance_rate > 0.0 && cloud.acceptance_rate < 1.0);
    }
}

#[test]
fn oscillation_classes_survive_a_shift_by_d() {
    let p = LemniscateParams::new(3, 0.8, 0.0).unwrap();
    let a = extract_oscillation(&p, &(60..=90).collect::<Vec<_>>(), BITS).unwrap();
    let b = extract_oscillation(&p, &(63..=93).collect::<Vec<_>>(), BITS).unwrap();
    for (x, y) in a.classes.iter().zip(&b.classes) {
        assert_eq!(x.m, y.m);
        assert!((x.constant - y.constant).abs() < 2e-3, "class {}: {} vs {}", x.m, x.constant, y.constant);
    }
}

#[test]
fn reports_are_byte_identical() {
    let p = LemniscateParams::new(3, 0.9, 0.2).unwrap();
    let run = || {
        let cloud = sample_gas(&p, 24, &SamplerConfig::new(30, 0.1, 99)).unwrap();
        let exact = log_z_lemniscate(17, &p, BITS).unwrap();
        serde_json::to_string(&Report::new("check", BITS, Some(99), (cloud, exact))).unwrap()
    };
    assert_eq!(run(), run());
}
