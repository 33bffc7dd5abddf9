//! Built-in test functions with known Schwarzian behavior.

use num_complex::Complex64;

use crate::series::PowerSeries;

/// `(exp(i pi z) - 1) / (i pi)`: normalized, with constant Schwarzian pi^2/2.
pub fn nehari(order: usize) -> PowerSeries {
    let ipi = Complex64::new(0.0, std::f64::consts::PI);
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
    if order >= 1 {
        coeffs[1] = Complex64::new(1.0, 0.0);
        for k in 1..order {
            coeffs[k + 1] = coeffs[k] * ipi / (k as f64 + 1.0);
        }
    }
    PowerSeries::new(coeffs)
}

/// `z / (1 + c z)`: a Moebius transformation, so its Schwarzian vanishes.
/// Second coefficient is `-c`.
pub fn moebius(c: Complex64, order: usize) -> PowerSeries {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
    if order >= 1 {
        coeffs[1] = Complex64::new(1.0, 0.0);
        for k in 1..order {
            coeffs[k + 1] = coeffs[k] * (-c);
        }
    }
    PowerSeries::new(coeffs)
}

/// `z / (1 - z)^2 = sum k z^k`: the classical extremal univalent function.
pub fn koebe(order: usize) -> PowerSeries {
    let coeffs = (0..=order).map(|k| Complex64::new(k as f64, 0.0)).collect();
    PowerSeries::new(coeffs)
}

/// `z + a2 z^2` padded to the given order.
pub fn quadratic(a2: Complex64, order: usize) -> PowerSeries {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
    coeffs[1] = Complex64::new(1.0, 0.0);
    coeffs[2] = a2;
    PowerSeries::new(coeffs)
}
