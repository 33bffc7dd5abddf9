//! Error type shared by all modules.

use num_complex::Complex64;
use thiserror::Error;

/// Errors surfaced by series arithmetic, solvers and verifiers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Series division where the divisor's constant term is below the floor.
    #[error("near-zero constant term in series division: |b0| = {magnitude:.3e} < {floor:.3e}")]
    NearZeroConstantTerm { magnitude: f64, floor: f64 },

    /// A pointwise denominator vanished away from a removable singularity.
    #[error("near-zero denominator at z = {z}: |w| = {magnitude:.3e}")]
    NearZeroDenominator { z: Complex64, magnitude: f64 },

    /// A scalar argument was outside its admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    /// Picard iteration failed to reach the fixed-point tolerance.
    #[error("Picard iteration did not converge: sup-norm change {change:.3e} after {iters} rounds")]
    NonConvergence { change: f64, iters: usize },

    /// The integral-inequality hypothesis of the Gronwall lemma failed at a node,
    /// so the lemma is inapplicable (not falsified).
    #[error("Gronwall hypothesis violated at node {index} (t = {t}): g = {g:.6e} > k + integral = {bound:.6e}")]
    HypothesisViolated { index: usize, t: f64, g: f64, bound: f64 },

    /// The budgeted random-function generator ran out of attempts.
    #[error("random function generation failed after {attempts} attempts: {reason}")]
    GenerationFailed { attempts: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
