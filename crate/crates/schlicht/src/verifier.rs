//! Empirical verification of the geometric conclusions (argument bounds,
//! positive real part, univalence) on sampled disks, plus a seeded generator
//! of test functions with a prescribed Schwarzian budget.
//!
//! Conclusions hold on the open unit disk; grid passing is necessary-but-
//! sampled evidence at the configured radius, not a certificate.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::criteria::{convexity_order, CriterionKind, CriterionParams};
use crate::error::{Error, Result};
use crate::schwarzian::{sup_schwarzian, DEFAULT_GRID_N, DEFAULT_RADIUS_CAP};
use crate::series::{PowerSeries, DEFAULT_ORDER};

/// Inside this radius the removable singularities are evaluated through
/// their series; the order-64 tails there are below 1e-20.
pub const NEAR_ORIGIN_RADIUS: f64 = 0.05;

/// Pointwise denominators below this magnitude are an error away from 0.
pub const DENOMINATOR_TOL: f64 = 1e-12;

/// Pairs with `|f(z1) - f(z2)| <= COLLISION_TOL * |z1 - z2|` count as collisions.
pub const COLLISION_TOL: f64 = 1e-9;

/// One displayed target expression per variant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExprKind {
    /// `f'(z) - beta`
    FPrimeMinusBeta,
    /// `(z/f)^(1-alpha) f'(z)`
    BazilevicExpr,
    /// `f'(z) + alpha z f''(z)`
    RAlphaExpr,
    /// `(zf'/f)^alpha (1 + zf''/f')^beta`
    NonlinearExpr,
    /// `zf'/f + beta z^2 f''/f`
    ComboExpr,
    /// `(1-gamma) f/z + gamma f'`
    PGammaExpr,
    /// `zf'/f`
    ZfPrimeOverF,
    /// `1 + zf''/f'`
    OnePlusZfppOverFp,
    /// `f/z`
    FOverZ,
}

impl ExprKind {
    pub fn describe(self) -> &'static str {
        match self {
            ExprKind::FPrimeMinusBeta => "f'(z) - beta",
            ExprKind::BazilevicExpr => "(z/f)^(1-alpha) f'(z)",
            ExprKind::RAlphaExpr => "f'(z) + alpha z f''(z)",
            ExprKind::NonlinearExpr => "(zf'/f)^alpha (1 + zf''/f')^beta",
            ExprKind::ComboExpr => "zf'/f + beta z^2 f''/f",
            ExprKind::PGammaExpr => "(1-gamma) f/z + gamma f'(z)",
            ExprKind::ZfPrimeOverF => "zf'(z)/f(z)",
            ExprKind::OnePlusZfppOverFp => "1 + zf''(z)/f'(z)",
            ExprKind::FOverZ => "f(z)/z",
        }
    }
}

/// Radial-angular disk sample.
#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    pub radius: f64,
    pub radial_steps: usize,
    pub angular_steps: usize,
}

impl GridSpec {
    pub fn new(radius: f64, radial_steps: usize, angular_steps: usize) -> Result<Self> {
        if !(radius > 0.0 && radius < 1.0) {
            return Err(Error::Domain(format!("grid radius {radius} outside (0, 1)")));
        }
        if radial_steps < 8 || angular_steps < 8 {
            return Err(Error::Domain(format!(
                "grid steps must be >= 8 (got {radial_steps} x {angular_steps})"
            )));
        }
        Ok(GridSpec { radius, radial_steps, angular_steps })
    }

    /// The origin followed by `radial_steps` rings of `angular_steps` points,
    /// in deterministic (ring, angle) order.
    pub fn points(&self) -> Vec<Complex64> {
        let mut pts = Vec::with_capacity(self.radial_steps * self.angular_steps + 1);
        pts.push(Complex64::new(0.0, 0.0));
        for i in 1..=self.radial_steps {
            let r = self.radius * i as f64 / self.radial_steps as f64;
            for j in 0..self.angular_steps {
                let theta = std::f64::consts::TAU * j as f64 / self.angular_steps as f64;
                pts.push(Complex64::from_polar(r, theta));
            }
        }
        pts
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { radius: 0.99, radial_steps: 24, angular_steps: 96 }
    }
}

/// Extremum of a pointwise quantity over a disk sample.
#[derive(Clone, Debug)]
pub struct GridReport {
    pub quantity: String,
    pub extremum: f64,
    /// Location of the extremum (first witness point for the pairwise check).
    pub arg_extremum: Complex64,
    pub passed: bool,
    pub threshold: f64,
    /// Second witness point, set only by the pairwise univalence check.
    pub partner: Option<Complex64>,
}

fn principal_pow(w: Complex64, p: f64, z: Complex64) -> Result<Complex64> {
    if p == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if w.norm() < DENOMINATOR_TOL {
        if p > 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        return Err(Error::NearZeroDenominator { z, magnitude: w.norm() });
    }
    Ok(w.powf(p))
}

/// Evaluate a target expression at `z` with principal-branch powers.
///
/// The removable singularities `z/f`, `f/z`, `zf'/f`, `z^2 f''/f` are
/// evaluated through their series inside [`NEAR_ORIGIN_RADIUS`].
pub fn eval_expr(
    f: &PowerSeries,
    kind: ExprKind,
    params: &CriterionParams,
    z: Complex64,
) -> Result<Complex64> {
    let fp = f.derive();
    let near = z.norm() < NEAR_ORIGIN_RADIUS;
    let one = Complex64::new(1.0, 0.0);

    // f with the z factor removed; constant term f'(0) = 1 for normalized f
    let reduced = || f.shift_down();

    let f_at = || -> Result<Complex64> {
        let w = f.eval(z);
        if w.norm() < DENOMINATOR_TOL {
            return Err(Error::NearZeroDenominator { z, magnitude: w.norm() });
        }
        Ok(w)
    };
    let fp_at = || -> Result<Complex64> {
        let w = fp.eval(z);
        if w.norm() < DENOMINATOR_TOL {
            return Err(Error::NearZeroDenominator { z, magnitude: w.norm() });
        }
        Ok(w)
    };

    let f_over_z = || -> Result<Complex64> {
        if near {
            Ok(reduced()?.eval(z))
        } else {
            Ok(f.eval(z) / z)
        }
    };
    let z_over_f = || -> Result<Complex64> {
        if near {
            Ok(PowerSeries::one(f.order()).div(&reduced()?)?.eval(z))
        } else {
            Ok(z / f_at()?)
        }
    };
    let zfp_over_f = || -> Result<Complex64> {
        if near {
            Ok(fp.div(&reduced()?)?.eval(z))
        } else {
            Ok(z * fp.eval(z) / f_at()?)
        }
    };
    let z2fpp_over_f = || -> Result<Complex64> {
        let fpp = fp.derive();
        if near {
            Ok(fpp.shift_up().div(&reduced()?)?.eval(z))
        } else {
            Ok(z * z * fpp.eval(z) / f_at()?)
        }
    };

    match kind {
        ExprKind::FPrimeMinusBeta => Ok(fp.eval(z) - Complex64::new(params.beta, 0.0)),
        ExprKind::RAlphaExpr => {
            let fpp = fp.derive();
            Ok(fp.eval(z) + Complex64::new(params.alpha, 0.0) * z * fpp.eval(z))
        }
        ExprKind::OnePlusZfppOverFp => {
            let fpp = fp.derive();
            Ok(one + z * fpp.eval(z) / fp_at()?)
        }
        ExprKind::ZfPrimeOverF => zfp_over_f(),
        ExprKind::FOverZ => f_over_z(),
        ExprKind::BazilevicExpr => {
            let base = z_over_f()?;
            Ok(principal_pow(base, 1.0 - params.alpha, z)? * fp.eval(z))
        }
        ExprKind::NonlinearExpr => {
            let st = zfp_over_f()?;
            let fpp = fp.derive();
            let cv = one + z * fpp.eval(z) / fp_at()?;
            Ok(principal_pow(st, params.alpha, z)? * principal_pow(cv, params.beta, z)?)
        }
        ExprKind::ComboExpr => {
            Ok(zfp_over_f()? + Complex64::new(params.beta, 0.0) * z2fpp_over_f()?)
        }
        ExprKind::PGammaExpr => {
            Ok(Complex64::new(1.0 - params.gamma, 0.0) * f_over_z()?
                + Complex64::new(params.gamma, 0.0) * fp.eval(z))
        }
    }
}

/// The principal-argument bound each conclusion asserts for its expression.
fn arg_threshold(kind: ExprKind, p: &CriterionParams) -> f64 {
    use std::f64::consts::FRAC_PI_2;
    match kind {
        ExprKind::FPrimeMinusBeta => p.alpha * FRAC_PI_2,
        ExprKind::BazilevicExpr => p.beta * FRAC_PI_2,
        ExprKind::ZfPrimeOverF | ExprKind::FOverZ => p.alpha * FRAC_PI_2,
        ExprKind::PGammaExpr
        | ExprKind::NonlinearExpr
        | ExprKind::ComboExpr
        | ExprKind::RAlphaExpr
        | ExprKind::OnePlusZfppOverFp => FRAC_PI_2,
    }
}

/// Max of `|Arg(expr)|` over the grid; passes when it stays within the
/// conclusion's bound plus 1e-9.
pub fn max_abs_arg(
    f: &PowerSeries,
    kind: ExprKind,
    params: &CriterionParams,
    grid: &GridSpec,
) -> Result<GridReport> {
    let threshold = arg_threshold(kind, params);
    let mut extremum = -1.0f64;
    let mut at = Complex64::new(0.0, 0.0);
    for z in grid.points() {
        let w = eval_expr(f, kind, params, z)?;
        let a = w.arg().abs();
        if a > extremum {
            extremum = a;
            at = z;
        }
    }
    Ok(GridReport {
        quantity: format!("max |arg({})|", kind.describe()),
        extremum,
        arg_extremum: at,
        passed: extremum <= threshold + 1e-9,
        threshold,
        partner: None,
    })
}

/// Min of `Re(expr)` over the grid; passes when it stays above `-1e-9`.
pub fn min_real(
    f: &PowerSeries,
    kind: ExprKind,
    params: &CriterionParams,
    grid: &GridSpec,
) -> Result<GridReport> {
    let mut extremum = f64::INFINITY;
    let mut at = Complex64::new(0.0, 0.0);
    for z in grid.points() {
        let w = eval_expr(f, kind, params, z)?;
        if w.re < extremum {
            extremum = w.re;
            at = z;
        }
    }
    Ok(GridReport {
        quantity: format!("min Re({})", kind.describe()),
        extremum,
        arg_extremum: at,
        passed: extremum > -1e-9,
        threshold: 0.0,
        partner: None,
    })
}

/// Compass search minimizing `|f(z1)-f(z2)| / |z1-z2|` over pairs in the disk,
/// rejecting moves that shrink the separation below `min_sep`.
fn polish_pair(
    f: &PowerSeries,
    start1: Complex64,
    start2: Complex64,
    radius: f64,
    min_sep: f64,
) -> (Complex64, Complex64, f64) {
    let ratio = |z1: Complex64, z2: Complex64| -> f64 {
        if z1.norm() > radius || z2.norm() > radius {
            return f64::INFINITY;
        }
        let dz = (z1 - z2).norm();
        if dz < min_sep {
            return f64::INFINITY;
        }
        (f.eval(z1) - f.eval(z2)).norm() / dz
    };
    let mut z1 = start1;
    let mut z2 = start2;
    let mut cur = ratio(z1, z2);
    let mut step = radius * 0.05;
    let mut evals = 0usize;
    while step > 1e-13 && evals < 40_000 {
        let moves = [
            (Complex64::new(step, 0.0), Complex64::new(0.0, 0.0)),
            (Complex64::new(-step, 0.0), Complex64::new(0.0, 0.0)),
            (Complex64::new(0.0, step), Complex64::new(0.0, 0.0)),
            (Complex64::new(0.0, -step), Complex64::new(0.0, 0.0)),
            (Complex64::new(0.0, 0.0), Complex64::new(step, 0.0)),
            (Complex64::new(0.0, 0.0), Complex64::new(-step, 0.0)),
            (Complex64::new(0.0, 0.0), Complex64::new(0.0, step)),
            (Complex64::new(0.0, 0.0), Complex64::new(0.0, -step)),
        ];
        let mut best = cur;
        let mut best_move = None;
        for (d1, d2) in moves {
            let v = ratio(z1 + d1, z2 + d2);
            evals += 1;
            if v < best {
                best = v;
                best_move = Some((d1, d2));
            }
        }
        match best_move {
            Some((d1, d2)) => {
                z1 += d1;
                z2 += d2;
                cur = best;
            }
            None => step *= 0.5,
        }
    }
    (z1, z2, cur)
}

/// Pairwise injectivity check on a radial-angular sample of about `n` points,
/// with a deterministic local refinement of the worst pairs. A collision is
/// `|f(z1) - f(z2)| <= COLLISION_TOL * |z1 - z2|`; the refinement polishes
/// both the globally worst pair and the worst well-separated pair so genuine
/// collisions between distant points are found and reported as a witness.
pub fn univalence_grid_check(f: &PowerSeries, radius: f64, n: usize) -> Result<GridReport> {
    if n > 4096 {
        return Err(Error::Domain(format!("univalence sample size {n} above 4096")));
    }
    if n < 64 {
        return Err(Error::Domain(format!("univalence sample size {n} below 64")));
    }
    if !(radius > 0.0 && radius < 1.0) {
        return Err(Error::Domain(format!("univalence radius {radius} outside (0, 1)")));
    }

    let radial = ((n as f64 / 4.0).sqrt().floor() as usize).max(1);
    let angular = (n / radial).max(4);
    let mut pts = Vec::with_capacity(radial * angular + 1);
    pts.push(Complex64::new(0.0, 0.0));
    for i in 1..=radial {
        let r = radius * i as f64 / radial as f64;
        for j in 0..angular {
            let theta = std::f64::consts::TAU * j as f64 / angular as f64;
            pts.push(Complex64::from_polar(r, theta));
        }
    }
    let vals: Vec<Complex64> = pts.iter().map(|&z| f.eval(z)).collect();

    const WIDE_SEP: f64 = 0.15;
    let mut best = (f64::INFINITY, 0usize, 0usize);
    let mut best_wide: Option<(f64, usize, usize)> = None;
    for a in 0..pts.len() {
        for b in (a + 1)..pts.len() {
            let dz = (pts[a] - pts[b]).norm();
            if dz < 1e-9 {
                continue;
            }
            let r = (vals[a] - vals[b]).norm() / dz;
            if r < best.0 {
                best = (r, a, b);
            }
            if dz >= WIDE_SEP && best_wide.map(|(w, _, _)| r < w).unwrap_or(true) {
                best_wide = Some((r, a, b));
            }
        }
    }

    let refined_any = polish_pair(f, pts[best.1], pts[best.2], radius, 1e-3);
    let refined_wide = best_wide.map(|(_, a, b)| polish_pair(f, pts[a], pts[b], radius, 0.9 * WIDE_SEP));

    let is_collision = |r: &(Complex64, Complex64, f64)| r.2 <= COLLISION_TOL;
    // Prefer the well-separated witness when both refinements collide.
    let witness = match (&refined_wide, &refined_any) {
        (Some(w), _) if is_collision(w) => *w,
        (_, a) if is_collision(a) => *a,
        (Some(w), a) => {
            if w.2 < a.2 {
                *w
            } else {
                *a
            }
        }
        (None, a) => *a,
    };
    let extremum = witness.2;

    Ok(GridReport {
        quantity: "min |f(z1)-f(z2)| / |z1-z2| over sampled and refined pairs".to_string(),
        extremum,
        arg_extremum: witness.0,
        passed: extremum > COLLISION_TOL,
        threshold: COLLISION_TOL,
        partner: Some(witness.1),
    })
}

/// The conclusion checks a criterion's theorem asserts, ready to run after the
/// criterion itself was satisfied. The convexity conclusion additionally
/// respects the order delivered by the criterion.
pub fn verify_conclusion(
    f: &PowerSeries,
    kind: CriterionKind,
    params: &CriterionParams,
    grid: &GridSpec,
    univalence_points: usize,
) -> Result<Vec<GridReport>> {
    match kind {
        CriterionKind::NehariUnivalence => {
            Ok(vec![univalence_grid_check(f, grid.radius, univalence_points)?])
        }
        CriterionKind::ChiangSst => Ok(vec![
            max_abs_arg(f, ExprKind::ZfPrimeOverF, params, grid)?,
            max_abs_arg(f, ExprKind::FOverZ, params, grid)?,
        ]),
        CriterionKind::ChiangConvexity => {
            let mut report = min_real(f, ExprKind::OnePlusZfppOverFp, params, grid)?;
            if let Some(ord) = convexity_order(params.eta, params.delta) {
                if !ord.boundary_unit {
                    report.threshold = ord.order;
                    report.passed = report.extremum > ord.order - 1e-9;
                    report.quantity =
                        format!("min Re(1 + zf''(z)/f'(z)) against convexity order {:.6}", ord.order);
                }
            }
            Ok(vec![report])
        }
        CriterionKind::ArgFPrimeBeta => {
            Ok(vec![max_abs_arg(f, ExprKind::FPrimeMinusBeta, params, grid)?])
        }
        CriterionKind::UnivalenceBeta0 => {
            let beta0 = CriterionParams { beta: 0.0, ..*params };
            Ok(vec![
                max_abs_arg(f, ExprKind::FPrimeMinusBeta, &beta0, grid)?,
                univalence_grid_check(f, grid.radius, univalence_points)?,
            ])
        }
        CriterionKind::Bazilevic => Ok(vec![max_abs_arg(f, ExprKind::BazilevicExpr, params, grid)?]),
        CriterionKind::RAlpha => Ok(vec![min_real(f, ExprKind::RAlphaExpr, params, grid)?]),
        CriterionKind::NonlinearStCv => {
            Ok(vec![min_real(f, ExprKind::NonlinearExpr, params, grid)?])
        }
        CriterionKind::StConvCombo => Ok(vec![min_real(f, ExprKind::ComboExpr, params, grid)?]),
        CriterionKind::PGamma => Ok(vec![max_abs_arg(f, ExprKind::PGammaExpr, params, grid)?]),
    }
}

/// Deterministic seeded function with `sup |S| <= two_delta_target` (within 1%
/// when the budget binds) and `|a_2| <= eta_max`, built by dilating a random
/// polynomial `z + sum c_k z^k`, `|c_k| <= 0.5/k^2`.
pub fn random_budgeted_function(
    seed: u64,
    n_coeffs: usize,
    two_delta_target: f64,
    eta_max: f64,
) -> Result<PowerSeries> {
    if !(two_delta_target >= 0.0) {
        return Err(Error::Domain(format!("two_delta_target = {two_delta_target} must be >= 0")));
    }
    if !(2..=DEFAULT_ORDER).contains(&n_coeffs) {
        return Err(Error::Domain(format!("n_coeffs = {n_coeffs} outside [2, {DEFAULT_ORDER}]")));
    }
    if !(eta_max >= 0.0) {
        return Err(Error::Domain(format!("eta_max = {eta_max} must be >= 0")));
    }
    if two_delta_target == 0.0 {
        // only the identity meets a zero Schwarzian budget among generated forms
        return Ok(PowerSeries::identity(DEFAULT_ORDER));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); DEFAULT_ORDER + 1];
    coeffs[1] = Complex64::new(1.0, 0.0);
    for (k, c) in coeffs.iter_mut().enumerate().take(n_coeffs + 1).skip(2) {
        let mag = rng.gen::<f64>() * 0.5 / (k * k) as f64;
        let phase = rng.gen::<f64>() * std::f64::consts::TAU;
        *c = Complex64::from_polar(mag, phase);
    }
    let h = PowerSeries::new(coeffs);

    let sup_at = |t: f64| -> Result<f64> {
        Ok(sup_schwarzian(&h.dilate(t)?, DEFAULT_RADIUS_CAP, DEFAULT_GRID_N)?.two_delta)
    };

    let c2 = h.coeff(2).norm();
    let t_eta = if c2 <= eta_max { 1.0 } else { eta_max / c2 };
    if t_eta <= 0.0 {
        return Err(Error::GenerationFailed {
            attempts: 0,
            reason: format!("eta_max = {eta_max} unreachable with |c_2| = {c2}"),
        });
    }

    if sup_at(t_eta)? <= two_delta_target {
        return h.dilate(t_eta);
    }

    // sup is increasing in t; shrink t until the budget is met within 1%
    let mut lo = 0.0f64;
    let mut hi = t_eta;
    for _attempt in 0..64 {
        let mid = 0.5 * (lo + hi);
        let s = sup_at(mid)?;
        if s > two_delta_target {
            hi = mid;
        } else {
            lo = mid;
            if s >= 0.99 * two_delta_target {
                return h.dilate(mid);
            }
        }
    }
    Err(Error::GenerationFailed {
        attempts: 64,
        reason: format!("could not land sup|S| within 1% of {two_delta_target}"),
    })
}
