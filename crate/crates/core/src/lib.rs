//! Partition functions of lemniscate Coulomb gases.
//!
//! The crate computes `log Z_n` for the two-dimensional β = 2 Coulomb gas
//! in the potential `|z|^{2d} - t(z^d + z̄^d) - (2c/n) log|z|` exactly (at
//! any requested binary precision) and compares it with the closed-form
//! large-n expansion, including the oscillatory constant term of the
//! multi-component regime. The `d = 1` case doubles as a calculator for
//! moments of characteristic polynomials of the complex Ginibre ensemble.
//!
//! Module map:
//!
//! * [`specfun`]: `ln Γ`, `ln G`, Bernoulli numbers, ζ'(-1), incomplete gamma.
//! * [`model`]: potentials, droplet geometry, equilibrium energy and entropy.
//! * [`exact`]: exact `log Z_n` by closed forms and orthogonal-norm tables.
//! * [`moments`]: `E|det(G_N - a)|^γ`, exact and asymptotic.
//! * [`asympt`]: the expansion coefficients and their building blocks.
//! * [`harness`]: convergence studies, oscillation extraction, Monte Carlo.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Index loops mirror the matrix formulas.
#![allow(clippy::needless_range_loop)]

pub mod asympt;
pub mod bigreal;
pub mod error;
pub mod exact;
pub mod fit;
pub mod harness;
pub mod model;
pub mod moments;
pub mod quad;
pub mod specfun;

// Declared only to link against the system GMP/MPFR; nothing is called directly.
use gmp_mpfr_sys as _;

pub use bigreal::{BigReal, LogValue, DEFAULT_BITS, MIN_BITS};
pub use error::{Error, Result};
pub use model::{LemniscateParams, Regime};
