//! Numerical toolkit for Schwarzian-derivative inclusion criteria on the
//! unit disk.
//!
//! The crate computes Schwarzian derivatives of analytic functions given as
//! truncated power series, solves the associated second-order equation
//! `y'' + (S(f,.)/2) y = 0` through its fundamental solutions, evaluates the
//! transcendental sufficiency criteria coupling `|a_2|` and `sup |S|` for
//! univalence, strong starlikeness, convexity, Bazilevic and related classes,
//! solves for maximal admissible Schwarzian bounds, and empirically tests the
//! geometric conclusions on sampled disks.
//!
//! Modules:
//! - [`series`]: truncated complex power-series arithmetic.
//! - [`schwarzian`]: Schwarzian derivative and sup estimation.
//! - [`ode`]: fundamental solutions, reconstruction, Gronwall bounds.
//! - [`criteria`]: the criterion predicates and threshold solving.
//! - [`verifier`]: disk-grid conclusion checks and the seeded generator.
//! - [`cli`]: the batch command-line surface.

// Validation guards are written as negations (`!(x > 0.0)`) so that NaN
// inputs fail them too; the positively phrased comparison would let NaN pass.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod criteria;
pub mod error;
pub mod fixtures;
pub mod ode;
pub mod schwarzian;
pub mod series;
pub mod verifier;

pub use error::{Error, Result};
pub use num_complex::Complex64;
