//! Error function, complementary error function and the Gaussian Q-function,
//! plus Craig's finite-range integral forms of Q(x) and Q²(x).
//!
//! The closed-form evaluators use the rational kernels in [`kernel`]; the Craig
//! forms go through adaptive quadrature and exist so the fading-average
//! derivations can be checked term by term.
//!
//! Note on the derivative of erf: d/dx erf(x) = (2/√π)·e^(−x²) is positive.
//! Some printed derivations carry a spurious minus sign; the tests pin the
//! positive form with finite differences.

mod kernel;

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{domain, Result};
use crate::quadrature::{integrate, QuadratureSpec};

/// 1/√π
pub const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_286_948_079_451_560_772_585_844_050_629_329;

fn finite(x: f64, op: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        domain(format!("{op} requires a finite argument, got {x}"))
    }
}

/// Complementary error function, (2/√π)∫ₓ^∞ e^(−t²) dt.
pub fn erfc(x: f64) -> Result<f64> {
    finite(x, "erfc")?;
    Ok(kernel::erfc(x))
}

/// Error function, 1 − erfc(x).
pub fn erf(x: f64) -> Result<f64> {
    finite(x, "erf")?;
    Ok(kernel::erf(x))
}

/// Gaussian tail probability Q(x) = ½·erfc(x/√2).
pub fn q_func(x: f64) -> Result<f64> {
    finite(x, "q_func")?;
    Ok(q_unchecked(x))
}

/// Antiderivative of erfc with zero integration constant:
/// ∫erfc(x)dx = x·erfc(x) − e^(−x²)/√π.
pub fn erfc_antiderivative(x: f64) -> Result<f64> {
    finite(x, "erfc_antiderivative")?;
    Ok(x * kernel::erfc(x) - FRAC_1_SQRT_PI * (-x * x).exp())
}

/// Derivative of erf, (2/√π)·e^(−x²).
pub fn erf_derivative(x: f64) -> Result<f64> {
    finite(x, "erf_derivative")?;
    Ok(2.0 * FRAC_1_SQRT_PI * (-x * x).exp())
}

/// Derivative of erfc(√x) with respect to x, −e^(−x)/√(πx), for x > 0.
///
/// This is the chain-rule form used when averaging ½erfc(√γ) over an
/// exponential SNR density by parts.
pub fn erfc_sqrt_derivative(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("erfc_sqrt_derivative requires finite x > 0, got {x}"));
    }
    Ok(-FRAC_1_SQRT_PI * (-x).exp() / x.sqrt())
}

/// Q(x) via Craig's form (1/π)∫₀^{π/2} exp(−x²/(2sin²θ)) dθ, x ≥ 0.
pub fn q_craig(x: f64, spec: &QuadratureSpec) -> Result<f64> {
    craig_integral(x, FRAC_PI_2, spec, "q_craig")
}

/// Q²(x) via (1/π)∫₀^{π/4} exp(−x²/(2sin²θ)) dθ, x ≥ 0.
pub fn q_squared_craig(x: f64, spec: &QuadratureSpec) -> Result<f64> {
    craig_integral(x, FRAC_PI_4, spec, "q_squared_craig")
}

fn craig_integral(x: f64, upper: f64, spec: &QuadratureSpec, op: &str) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return domain(format!("{op} requires finite x >= 0, got {x}"));
    }
    let half_x2 = 0.5 * x * x;
    let integrand = |theta: f64| {
        let s = theta.sin();
        if s == 0.0 {
            // limit θ → 0: exp(−∞) for x > 0, 1 for x = 0
            return if half_x2 == 0.0 { 1.0 } else { 0.0 };
        }
        (-half_x2 / (s * s)).exp()
    };
    // Integrating 1/π·f keeps the relative tolerance meaningful on the result.
    let est = integrate(|t| integrand(t) / PI, 0.0, upper, spec)?;
    Ok(est.value)
}

pub(crate) fn erfc_unchecked(x: f64) -> f64 {
    kernel::erfc(x)
}

pub(crate) fn q_unchecked(x: f64) -> f64 {
    0.5 * kernel::erfc(x * FRAC_1_SQRT_2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    // Independent reference for erfc: e^(−x²)·(2/√π)∫₀^L e^(−2xs − s²) ds by
    // composite Simpson on a fine grid, with x² exact for the chosen grid.
    fn erfc_simpson(x: f64) -> f64 {
        assert!(x >= 0.0);
        let upper = 7.0f64.min(40.0 / (2.0 * x).max(1e-3));
        let n = 200_000;
        let h = upper / n as f64;
        let g = |s: f64| (-2.0 * x * s - s * s).exp();
        // compensated summation keeps rounding well below the 1e-14 target
        let (mut acc, mut carry) = (g(0.0) + g(upper), 0.0);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            let y = w * g(i as f64 * h) - carry;
            let t = acc + y;
            carry = (t - acc) - y;
            acc = t;
        }
        (-x * x).exp() * 2.0 * FRAC_1_SQRT_PI * acc * h / 3.0
    }

    #[test]
    fn erfc_zero_is_one() {
        assert_eq!(erfc(0.0).unwrap(), 1.0);
        assert_eq!(erf(0.0).unwrap(), 0.0);
    }

    #[test]
    fn erfc_frozen_values() {
        // mpmath quadrature, 40 digits
        let erfc1 = 0.157_299_207_050_285_130_658_779_364_917_390_740_7;
        assert!((erfc(1.0).unwrap() / erfc1 - 1.0).abs() < 1e-14);
        let erf1 = 0.842_700_792_949_714_869_341_220_635_082_609_259_3;
        assert!((erf(1.0).unwrap() - erf1).abs() < 1e-15);
        let q3 = 0.001_349_898_031_630_094_526_651_814_767_594_977;
        assert!((q_func(3.0).unwrap() / q3 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn erfc_matches_simpson_oracle() {
        // x = k/8 keeps x² exact so the oracle's prefactor adds no error
        for k in 0..=80 {
            let x = k as f64 / 8.0;
            let reference = erfc_simpson(x);
            let got = erfc(x).unwrap();
            let rel = (got / reference - 1.0).abs();
            assert!(rel <= 1e-14, "x={x}: {got:e} vs {reference:e}, rel {rel:e}");
        }
    }

    #[test]
    fn erfc_deep_tail_is_nonnegative_and_tiny() {
        let v = erfc(30.0).unwrap();
        assert!((0.0..1e-300).contains(&v));
        assert_eq!(erfc(-30.0).unwrap(), 2.0);
    }

    #[test]
    fn erf_is_odd() {
        assert_eq!(erf(-0.7).unwrap(), -erf(0.7).unwrap());
        assert!((erfc(-0.7).unwrap() - (2.0 - erfc(0.7).unwrap())).abs() < 1e-16);
    }

    #[test]
    fn non_finite_inputs_rejected() {
        for x in [f64::NAN, f64::INFINITY, f64::NEG_INFINITY] {
            assert!(matches!(erfc(x), Err(Error::Domain(_))));
            assert!(matches!(erf(x), Err(Error::Domain(_))));
            assert!(matches!(q_func(x), Err(Error::Domain(_))));
            assert!(matches!(erfc_antiderivative(x), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn erf_plus_erfc_grid() {
        for i in -600..=600 {
            let x = i as f64 * 0.01;
            let s = erf(x).unwrap() + erfc(x).unwrap();
            assert!((s - 1.0).abs() <= 1e-14, "x={x}");
        }
    }

    #[test]
    fn q_matches_erfc_identity() {
        for i in 0..=160 {
            let x = i as f64 * 0.05;
            let direct = 0.5 * erfc(x / 2f64.sqrt()).unwrap();
            assert!((q_func(x).unwrap() - direct).abs() <= 1e-15);
        }
        assert_eq!(q_func(0.0).unwrap(), 0.5);
    }

    #[test]
    fn q_complement() {
        for x in [0.0, 0.3, 1.0, 2.5, 5.0] {
            let s = q_func(x).unwrap() + q_func(-x).unwrap();
            assert!((s - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn erf_derivative_by_finite_differences() {
        let h = 1e-5;
        for x in [0.5, 1.0, 2.0] {
            let fd = (erf(x + h).unwrap() - erf(x - h).unwrap()) / (2.0 * h);
            let d = erf_derivative(x).unwrap();
            assert!(d > 0.0);
            assert!((fd - d).abs() < 1e-6, "x={x}: {fd} vs {d}");
        }
    }

    #[test]
    fn erfc_sqrt_derivative_by_finite_differences() {
        let h: f64 = 1e-6;
        for x in [0.25, 1.0, 3.0] {
            let fd = (erfc((x + h).sqrt()).unwrap() - erfc((x - h).sqrt()).unwrap()) / (2.0 * h);
            assert!((fd - erfc_sqrt_derivative(x).unwrap()).abs() < 1e-7);
        }
        assert!(erfc_sqrt_derivative(0.0).is_err());
    }

    #[test]
    fn erfc_strictly_decreasing() {
        // below about -5.9 erfc rounds to exactly 2
        let mut prev = erfc(-5.01).unwrap();
        for i in -500..=600 {
            let v = erfc(i as f64 * 0.01).unwrap();
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn antiderivative_values() {
        assert!((erfc_antiderivative(0.0).unwrap() + FRAC_1_SQRT_PI).abs() < 1e-16);
        assert!(erfc_antiderivative(20.0).unwrap().abs() < 1e-100);
        // ∫₀¹ erfc(t) dt from mpmath quadrature
        let integral = 0.513_935_041_887_744_065_936_724_691_757_494_6;
        let diff = erfc_antiderivative(1.0).unwrap() - erfc_antiderivative(0.0).unwrap();
        assert!((diff - integral).abs() < 1e-10);
        let quad = integrate(erfc_unchecked, 0.0, 1.0, &QuadratureSpec::default()).unwrap();
        assert!((diff - quad.value).abs() < 1e-10);
    }

    #[test]
    fn craig_forms_at_zero() {
        let spec = QuadratureSpec::default();
        assert!((q_craig(0.0, &spec).unwrap() - 0.5).abs() < 1e-15);
        assert!((q_squared_craig(0.0, &spec).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn craig_forms_match_closed_form() {
        let spec = QuadratureSpec::default();
        for x in [1.0, 2.5] {
            assert!((q_craig(x, &spec).unwrap() - q_func(x).unwrap()).abs() < 1e-10);
        }
        let q1 = q_func(1.0).unwrap();
        assert!((q_squared_craig(1.0, &spec).unwrap() - q1 * q1).abs() < 1e-10);
        let q3 = q_func(3.0).unwrap();
        assert!((q_squared_craig(3.0, &spec).unwrap() - q3 * q3).abs() < 1e-12);
    }

    #[test]
    fn craig_grid() {
        let spec = QuadratureSpec::default();
        for i in 0..=60 {
            let x = i as f64 * 0.1;
            let q = q_func(x).unwrap();
            assert!((q_craig(x, &spec).unwrap() - q).abs() <= 1e-9);
            assert!((q_squared_craig(x, &spec).unwrap() - q * q).abs() <= 1e-9);
        }
    }

    #[test]
    fn craig_rejects_negative() {
        let spec = QuadratureSpec::default();
        assert!(matches!(q_craig(-0.1, &spec), Err(Error::Domain(_))));
        assert!(matches!(q_squared_craig(-1.0, &spec), Err(Error::Domain(_))));
    }

    #[test]
    fn craig_reports_non_convergence() {
        let spec = QuadratureSpec::new(1e-300, 1e-300, 2).unwrap();
        assert!(matches!(q_craig(1.0, &spec), Err(Error::NonConvergence { .. })));
    }
}
