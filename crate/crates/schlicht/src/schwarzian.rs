//! Schwarzian derivative of an analytic function, as a series and pointwise,
//! and estimation of `sup |S(f, z)|` over the disk.
//!
//! The supremum is estimated on the circle `|z| = radius_cap` (the maximum
//! modulus principle puts the maximum of the analytic Schwarzian on the
//! boundary of the sampled disk) and is therefore a lower bound for the
//! supremum over the open unit disk. For functions whose Schwarzian is
//! continuous up to the boundary the gap is below reporting tolerance; when
//! the series has not visibly converged at the sampling radius the estimate
//! carries [`SupEstimate::truncation_warning`].

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::PowerSeries;

/// Default number of boundary samples for the sup search.
pub const DEFAULT_GRID_N: usize = 1024;

/// Default sampling radius for the sup search.
pub const DEFAULT_RADIUS_CAP: f64 = 0.999;

const GOLDEN_TOL: f64 = 1e-10;
const GOLDEN_MAX_ITER: usize = 200;

/// Boundary estimate of `sup |S(f, z)| = 2 delta`.
#[derive(Clone, Debug)]
pub struct SupEstimate {
    /// Estimated `sup |S|`; the criteria consume `delta = two_delta / 2`.
    pub two_delta: f64,
    /// Location of the observed maximum, `|argmax| <= radius_cap`.
    pub argmax: Complex64,
    /// Radius of the sampled circle.
    pub radius_cap: f64,
    /// Number of coarse boundary samples before refinement.
    pub grid_points: usize,
    /// Set when the tail coefficients of the Schwarzian series are not
    /// negligible at the sampling radius: the estimate is then only a lower
    /// bound and |S| may keep growing toward the boundary.
    pub truncation_warning: bool,
}

/// Schwarzian derivative `S(f, .) = (f''/f')' - (f''/f')^2 / 2` as a series.
///
/// Requires `f'(0)` away from zero (normalized input guarantees `f'(0) = 1`);
/// the constant-term check of the series division enforces this.
pub fn schwarzian_series(f: &PowerSeries) -> Result<PowerSeries> {
    let fp = f.derive();
    let fpp = fp.derive();
    let g = fpp.div(&fp)?;
    let g2 = g.mul(&g);
    Ok(g.derive().sub(&g2.scale(Complex64::new(0.5, 0.0))))
}

/// Pointwise Schwarzian via the evaluated series.
///
/// Fails with [`Error::NearZeroDenominator`] when `|f'(z)| < 1e-12`.
pub fn schwarzian_at(f: &PowerSeries, z: Complex64) -> Result<Complex64> {
    let fp = f.derive();
    let fp_z = fp.eval(z);
    if fp_z.norm() < 1e-12 {
        return Err(Error::NearZeroDenominator { z, magnitude: fp_z.norm() });
    }
    let s = schwarzian_series(f)?;
    Ok(s.eval(z))
}

/// Golden-section maximization of `g` on `[a, b]`.
fn golden_max(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INVPHI * (b - a);
    let mut d = a + INVPHI * (b - a);
    let mut gc = g(c);
    let mut gd = g(d);
    let mut iter = 0;
    while (b - a) > GOLDEN_TOL && iter < GOLDEN_MAX_ITER {
        if gc > gd {
            b = d;
            d = c;
            gd = gc;
            c = b - INVPHI * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + INVPHI * (b - a);
            gd = g(d);
        }
        iter += 1;
    }
    let x = 0.5 * (a + b);
    (x, g(x))
}

/// Maximum of `|S(f, .)|` over the circle `|z| = radius_cap`, from `grid_n`
/// coarse angular samples refined by golden-section search around the best
/// angle. Ties on the coarse grid resolve to the smallest angle.
pub fn sup_schwarzian(f: &PowerSeries, radius_cap: f64, grid_n: usize) -> Result<SupEstimate> {
    if !(radius_cap > 0.0 && radius_cap < 1.0) {
        return Err(Error::Domain(format!("radius_cap = {radius_cap} outside (0, 1)")));
    }
    if grid_n < 16 {
        return Err(Error::Domain(format!("grid_n = {grid_n} below minimum 16")));
    }
    let s = schwarzian_series(f)?;

    let value_at_angle = |theta: f64| {
        let z = Complex64::from_polar(radius_cap, theta);
        s.eval(z).norm()
    };

    let step = std::f64::consts::TAU / grid_n as f64;
    let mut best_j = 0usize;
    let mut best_val = value_at_angle(0.0);
    for j in 1..grid_n {
        let v = value_at_angle(j as f64 * step);
        if v > best_val {
            best_val = v;
            best_j = j;
        }
    }

    // Refine in the bracket around the best coarse angle.
    let center = best_j as f64 * step;
    let (theta_ref, val_ref) = golden_max(value_at_angle, center - step, center + step);
    let (theta_star, _) = if val_ref > best_val { (theta_ref, val_ref) } else { (center, best_val) };

    let argmax = Complex64::from_polar(radius_cap, theta_star);
    let two_delta = s.eval(argmax).norm();

    // Tail check: the last 8 retained coefficients must be negligible at the
    // sampling radius, otherwise the truncated series has not converged there.
    let order = s.order();
    let tail_from = order.saturating_sub(7);
    let truncation_warning = (tail_from..=order)
        .any(|k| s.coeff(k).norm() * radius_cap.powi(k as i32) >= 1e-10);

    Ok(SupEstimate {
        two_delta,
        argmax,
        radius_cap,
        grid_points: grid_n,
        truncation_warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{koebe, moebius, nehari, quadratic};
    use crate::series::DEFAULT_ORDER;
    use proptest::prelude::*;

    const PI: f64 = std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn moebius_schwarzian_vanishes() {
        let f = moebius(c(0.3, 0.0), DEFAULT_ORDER);
        let s = schwarzian_series(&f).unwrap();
        assert!(s.max_abs_coeff() < 1e-12, "max coeff {}", s.max_abs_coeff());
    }

    #[test]
    fn nehari_schwarzian_is_constant_pi2_over_2() {
        let f = nehari(DEFAULT_ORDER);
        let s = schwarzian_series(&f).unwrap();
        assert!((s.coeff(0) - c(PI * PI / 2.0, 0.0)).norm() < 1e-10);
        for k in 1..=s.order() {
            assert!(s.coeff(k).norm() < 1e-10, "coeff {k} = {}", s.coeff(k));
        }
    }

    #[test]
    fn quadratic_schwarzian_matches_closed_form() {
        // S(z + a2 z^2) = -6 a2^2 / (1 + 2 a2 z)^2
        //              = -6 a2^2 * sum (k+1) (-2 a2)^k z^k
        let a2 = 0.1;
        let f = quadratic(c(a2, 0.0), DEFAULT_ORDER);
        let s = schwarzian_series(&f).unwrap();
        assert!((s.coeff(0) - c(-0.06, 0.0)).norm() < 1e-14);
        for k in 0..=10 {
            let expect = -6.0 * a2 * a2 * (k as f64 + 1.0) * (-2.0 * a2).powi(k);
            assert!(
                (s.coeff(k as usize) - c(expect, 0.0)).norm() < 1e-13,
                "k={k}: {} vs {expect}",
                s.coeff(k as usize)
            );
        }
    }

    #[test]
    fn pointwise_values_on_fixtures() {
        let g = moebius(c(0.3, 0.0), DEFAULT_ORDER);
        assert!(schwarzian_at(&g, c(0.5, 0.0)).unwrap().norm() < 1e-12);

        let f = nehari(DEFAULT_ORDER);
        let v = schwarzian_at(&f, c(0.3, 0.4)).unwrap();
        assert!((v - c(PI * PI / 2.0, 0.0)).norm() < 1e-9, "got {v}");

        let q = quadratic(c(0.1, 0.0), DEFAULT_ORDER);
        let w = schwarzian_at(&q, c(0.0, 0.0)).unwrap();
        assert!((w - c(-0.06, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn pointwise_rejects_vanishing_f_prime() {
        // f = z + z^2 has f'(-1/2) = 0
        let f = quadratic(c(1.0, 0.0), DEFAULT_ORDER);
        match schwarzian_at(&f, c(-0.5, 0.0)) {
            Err(Error::NearZeroDenominator { .. }) => {}
            other => panic!("expected NearZeroDenominator, got {other:?}"),
        }
    }

    #[test]
    fn sup_on_moebius_is_zero() {
        let f = moebius(c(0.3, 0.0), DEFAULT_ORDER);
        let est = sup_schwarzian(&f, 0.999, DEFAULT_GRID_N).unwrap();
        assert!(est.two_delta <= 1e-12, "got {}", est.two_delta);
        assert!(!est.truncation_warning);
    }

    #[test]
    fn sup_on_nehari_is_pi2_over_2() {
        let f = nehari(DEFAULT_ORDER);
        let est = sup_schwarzian(&f, 0.999, DEFAULT_GRID_N).unwrap();
        assert!((est.two_delta - PI * PI / 2.0).abs() < 1e-9, "got {}", est.two_delta);
        assert!(!est.truncation_warning);
        assert!((est.argmax.norm() - 0.999).abs() < 1e-12);
    }

    #[test]
    fn sup_on_quadratic_matches_closed_form() {
        // |S| = 0.06 / |1 + 0.2 z|^2 maximized at z = -0.999:
        // 0.06 / (1 - 0.2 * 0.999)^2
        let f = quadratic(c(0.1, 0.0), DEFAULT_ORDER);
        let est = sup_schwarzian(&f, 0.999, DEFAULT_GRID_N).unwrap();
        let expect = 0.06 / (1.0 - 0.2 * 0.999) / (1.0 - 0.2 * 0.999);
        assert!((est.two_delta - expect).abs() < 1e-6, "got {} want {expect}", est.two_delta);
    }

    #[test]
    fn sup_estimate_is_consistent_with_argmax() {
        let f = quadratic(c(0.1, 0.0), DEFAULT_ORDER);
        let est = sup_schwarzian(&f, 0.999, DEFAULT_GRID_N).unwrap();
        let at_argmax = schwarzian_at(&f, est.argmax).unwrap().norm();
        assert!((est.two_delta - at_argmax).abs() < 1e-12);
    }

    #[test]
    fn sup_is_monotone_in_radius_on_fixtures() {
        for f in [nehari(DEFAULT_ORDER), quadratic(c(0.1, 0.0), DEFAULT_ORDER), koebe(DEFAULT_ORDER)] {
            let mut prev = 0.0;
            for r in [0.3, 0.5, 0.7, 0.9] {
                let est = sup_schwarzian(&f, r, 256).unwrap();
                assert!(est.two_delta >= prev - 1e-12, "radius {r}");
                prev = est.two_delta;
            }
        }
    }

    #[test]
    fn koebe_triggers_truncation_warning_near_boundary() {
        // S(koebe) = -6/(1-z^2)^2 blows up toward the boundary, so the
        // truncated series cannot have converged at 0.999.
        let f = koebe(DEFAULT_ORDER);
        let est = sup_schwarzian(&f, 0.999, DEFAULT_GRID_N).unwrap();
        assert!(est.truncation_warning);
        // Well inside the disk the series converges and the flag clears.
        let est_in = sup_schwarzian(&f, 0.5, 256).unwrap();
        assert!(!est_in.truncation_warning);
        // Against the closed form at r = 0.5: max |6/(1-z^2)^2| at z = +-0.5i
        // is 6/(1-0.25)^2... no: |1-z^2| minimized at z^2 = r^2, i.e. 6/(1-r^2)^2
        let expect = 6.0 / (1.0 - 0.25) / (1.0 - 0.25);
        assert!((est_in.two_delta - expect).abs() < 1e-9, "got {}", est_in.two_delta);
    }

    #[test]
    fn sup_rejects_bad_arguments() {
        let f = nehari(8);
        assert!(matches!(sup_schwarzian(&f, 1.0, 64), Err(Error::Domain(_))));
        assert!(matches!(sup_schwarzian(&f, 0.9, 8), Err(Error::Domain(_))));
    }

    // -- property tests ------------------------------------------------------

    /// Normalized series with gently decaying random coefficients.
    fn small_normalized(order: usize) -> impl Strategy<Value = PowerSeries> {
        proptest::collection::vec((0.0f64..1.0, 0.0f64..std::f64::consts::TAU), order - 1)
            .prop_map(move |raw| {
                let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
                coeffs[1] = Complex64::new(1.0, 0.0);
                for (i, &(mag, phase)) in raw.iter().enumerate() {
                    let k = i + 2;
                    coeffs[k] = Complex64::from_polar(mag * 0.1 / (k * k) as f64, phase);
                }
                PowerSeries::new(coeffs)
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn moebius_invariance(
            f in small_normalized(32),
            da in -0.2f64..0.2, b in -0.2f64..0.2, cc in -0.2f64..0.2, dd in -0.2f64..0.2,
        ) {
            // g = (a f + b) / (c f + d) with a, d near 1 and b, c small, so the
            // quotient series is well conditioned and ad - bc stays away from 0.
            let a = 1.0 + da;
            let d = 1.0 + dd;
            prop_assume!((a * d - b * cc).abs() > 0.5);
            let num = f.scale(c(a, 0.0)).add(&PowerSeries::constant(c(b, 0.0), f.order()));
            let den = f.scale(c(cc, 0.0)).add(&PowerSeries::constant(c(d, 0.0), f.order()));
            let g = num.div(&den).unwrap();
            let sf = schwarzian_series(&f).unwrap();
            let sg = schwarzian_series(&g).unwrap();
            let n = sf.order().min(sg.order());
            for k in 0..=n {
                prop_assert!((sf.coeff(k) - sg.coeff(k)).norm() <= 1e-8,
                    "coeff {k}: {} vs {}", sf.coeff(k), sg.coeff(k));
            }
        }

        #[test]
        fn moebius_maps_have_zero_schwarzian(
            da in -0.2f64..0.2, b in -0.5f64..0.5, cc in -0.3f64..0.3, dd in -0.2f64..0.2,
        ) {
            // (a z + b) / (c z + d) with d away from 0 and |c/d| <= ~0.4
            let a = 1.0 + da;
            let d = 1.0 + dd;
            prop_assume!((a * d - b * cc).abs() > 0.3);
            let order = 48;
            let num = PowerSeries::identity(order).scale(c(a, 0.0))
                .add(&PowerSeries::constant(c(b, 0.0), order));
            let den = PowerSeries::identity(order).scale(c(cc, 0.0))
                .add(&PowerSeries::constant(c(d, 0.0), order));
            let g = num.div(&den).unwrap();
            let s = schwarzian_series(&g).unwrap();
            prop_assert!(s.max_abs_coeff() <= 1e-10, "max {}", s.max_abs_coeff());
        }

        #[test]
        fn dilation_law(
            f in small_normalized(32),
            t in 0.05f64..=1.0,
            zr in -0.63f64..0.63, zi in -0.63f64..0.63,
        ) {
            // S(f(t.)/t)(z) = t^2 S(f)(t z)
            let z = c(zr, zi);
            prop_assume!(z.norm() <= 0.9);
            let dilated = f.dilate(t).unwrap();
            let lhs = schwarzian_at(&dilated, z).unwrap();
            let rhs = schwarzian_at(&f, z * t).unwrap() * c(t * t, 0.0);
            prop_assert!((lhs - rhs).norm() <= 1e-10, "{lhs} vs {rhs}");
        }
    }
}
