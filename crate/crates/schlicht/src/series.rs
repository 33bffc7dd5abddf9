//! Truncated complex power series centered at the origin.
//!
//! A [`PowerSeries`] stores the coefficients `c_0..c_N` of a Taylor expansion
//! at 0. All binary operations truncate to the shorter operand, so the result
//! of any chain of +, -, *, / carries exactly the coefficients that are
//! determined by the retained coefficients of the inputs. The default working
//! order used throughout the crate is [`DEFAULT_ORDER`].

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default truncation order: 64 terms keep tail error far below 1e-12 at
/// |z| <= 0.999 for the entire/Moebius fixtures used by the toolkit.
pub const DEFAULT_ORDER: usize = 64;

/// Divisor constant terms below this magnitude are rejected.
pub const DIVISION_FLOOR: f64 = 1e-14;

/// Truncated Taylor expansion at 0 with complex coefficients.
///
/// Invariants: at least one coefficient; every coefficient finite.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    /// Build a series from dense coefficients `c_0..c_N`.
    ///
    /// Panics if `coeffs` is empty or contains a non-finite entry.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "power series needs at least one coefficient");
        for (k, c) in coeffs.iter().enumerate() {
            assert!(
                c.re.is_finite() && c.im.is_finite(),
                "non-finite coefficient at index {k}: {c}"
            );
        }
        PowerSeries { coeffs }
    }

    /// The zero series of the given order.
    pub fn zero(order: usize) -> Self {
        PowerSeries { coeffs: vec![Complex64::new(0.0, 0.0); order + 1] }
    }

    /// The constant series `1`.
    pub fn one(order: usize) -> Self {
        Self::constant(Complex64::new(1.0, 0.0), order)
    }

    /// A constant series.
    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        assert!(c.re.is_finite() && c.im.is_finite(), "non-finite constant");
        s
    }

    /// The identity series `z`.
    pub fn identity(order: usize) -> Self {
        assert!(order >= 1, "identity needs order >= 1");
        let mut s = Self::zero(order);
        s.coeffs[1] = Complex64::new(1.0, 0.0);
        s
    }

    /// Truncation order `N` (the series holds `N + 1` coefficients).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient `c_k`, zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    /// Largest coefficient magnitude.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Whether the series represents a normalized function (c_0 = 0, c_1 = 1).
    pub fn is_normalized(&self, tol: f64) -> bool {
        self.order() >= 1
            && self.coeff(0).norm() <= tol
            && (self.coeff(1) - Complex64::new(1.0, 0.0)).norm() <= tol
    }

    /// Copy truncated (or zero-extended) to the given order.
    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Complex64::new(0.0, 0.0));
        PowerSeries { coeffs }
    }

    /// Coefficientwise sum, truncated to the shorter operand.
    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeffs[k] + rhs.coeffs[k]).collect();
        PowerSeries { coeffs }
    }

    /// Coefficientwise difference, truncated to the shorter operand.
    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeffs[k] - rhs.coeffs[k]).collect();
        PowerSeries { coeffs }
    }

    /// Cauchy product, truncated to the shorter operand.
    pub fn mul(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..=k {
                acc += self.coeffs[j] * rhs.coeffs[k - j];
            }
            *c = acc;
        }
        PowerSeries { coeffs }
    }

    /// Series quotient `q` with `q * rhs = self` to the truncation order.
    ///
    /// Fails with [`Error::NearZeroConstantTerm`] when `|rhs_0| < DIVISION_FLOOR`.
    pub fn div(&self, rhs: &Self) -> Result<Self> {
        let b0 = rhs.coeffs[0];
        if b0.norm() < DIVISION_FLOOR {
            return Err(Error::NearZeroConstantTerm { magnitude: b0.norm(), floor: DIVISION_FLOOR });
        }
        let n = self.coeffs.len().min(rhs.coeffs.len());
        let mut q = vec![Complex64::new(0.0, 0.0); n];
        for k in 0..n {
            let mut acc = self.coeffs[k];
            for j in 1..=k {
                acc -= rhs.coeffs[j] * q[k - j];
            }
            q[k] = acc / b0;
        }
        Ok(PowerSeries { coeffs: q })
    }

    /// Formal derivative; the order drops by one.
    pub fn derive(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero(0);
        }
        let coeffs = (1..self.coeffs.len())
            .map(|k| self.coeffs[k] * k as f64)
            .collect();
        PowerSeries { coeffs }
    }

    /// Horner evaluation at `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// The dilation `h(z) -> h(t z) / t`, i.e. `c_k -> c_k * t^(k-1)`.
    ///
    /// Requires `t` in (0, 1].
    pub fn dilate(&self, t: f64) -> Result<Self> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(Error::Domain(format!("dilation parameter t = {t} outside (0, 1]")));
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        let mut pow = 1.0 / t; // t^(k-1) starting at k = 0
        for &c in &self.coeffs {
            coeffs.push(c * pow);
            pow *= t;
        }
        Ok(PowerSeries { coeffs })
    }

    /// Multiply by the scalar `c`.
    pub fn scale(&self, c: Complex64) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|&a| a * c).collect() }
    }

    /// Divide by `z`: requires `|c_0|` negligible; the order drops by one.
    pub fn shift_down(&self) -> Result<Self> {
        if self.coeffs[0].norm() > 1e-12 {
            return Err(Error::Domain(format!(
                "cannot divide by z: constant term has magnitude {:.3e}",
                self.coeffs[0].norm()
            )));
        }
        if self.coeffs.len() == 1 {
            return Ok(Self::zero(0));
        }
        Ok(PowerSeries { coeffs: self.coeffs[1..].to_vec() })
    }

    /// Multiply by `z`; the order grows by one.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend_from_slice(&self.coeffs);
        PowerSeries { coeffs }
    }
}

impl std::ops::Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        PowerSeries::add(self, rhs)
    }
}

impl std::ops::Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        PowerSeries::sub(self, rhs)
    }
}

impl std::ops::Mul for &PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        PowerSeries::mul(self, rhs)
    }
}
