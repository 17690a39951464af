//! Parameter sets shared by the benchmarks.

use lemniscate_core::LemniscateParams;

/// One multi-component and one conformal parameter set for each of `d = 2, 3`.
pub fn representative_params() -> Vec<(&'static str, LemniscateParams)> {
    [("d2_t1.0", 2, 1.0, 0.0), ("d2_t0.5_c0.3", 2, 0.5, 0.3), ("d3_t0.8", 3, 0.8, 0.0), ("d3_t0.5_c0.4", 3, 0.5, 0.4)]
        .into_iter()
        .map(|(name, d, t, c)| (name, LemniscateParams::new(d, t, c).expect("valid parameters")))
        .collect()
}
