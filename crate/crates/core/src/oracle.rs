//! Numerical cross-checks for the fading-averaged error probabilities.
//!
//! Two independent routes evaluate the same Rayleigh average:
//!
//! * the γ route integrates an AWGN error curve against the exponential SNR
//!   density, after mapping γ = −γ̄·ln(u) onto u ∈ (0, 1];
//! * the θ route swaps the order of integration in the Craig forms, applies
//!   the exponential density's Laplace transform 1/(1 + Sγ̄) analytically,
//!   and integrates the remaining finite θ range.
//!
//! Neither route uses the arctan closed form, so each can judge it.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::channel::SnrPoint;
use crate::error::{domain, Result};
use crate::quadrature::{integrate, QuadratureSpec};
use crate::theory;

/// A conditional error probability as a function of instantaneous SNR γ.
pub struct FadingIntegrand<F> {
    f: F,
}

impl<F: Fn(f64) -> f64> FadingIntegrand<F> {
    pub fn new(f: F) -> Self {
        Self { f }
    }

    pub fn eval(&self, gamma: f64) -> f64 {
        (self.f)(gamma)
    }

    /// Checks f(0) ≤ 1, values in [0, 1] and monotone non-increase on `grid`
    /// (which must be ascending).
    pub fn validate_on(&self, grid: &[f64]) -> Result<()> {
        if self.eval(0.0) > 1.0 {
            return domain("integrand exceeds 1 at zero SNR");
        }
        let mut prev = f64::INFINITY;
        for &g in grid {
            let v = self.eval(g);
            if !(0.0..=1.0).contains(&v) {
                return domain(format!("integrand value {v} at γ={g} is not a probability"));
            }
            if v > prev {
                return domain(format!("integrand increases at γ={g}"));
            }
            prev = v;
        }
        Ok(())
    }
}

fn check_gamma_bar(gamma_bar: f64) -> Result<()> {
    if !(gamma_bar > 0.0) || !gamma_bar.is_finite() {
        return domain(format!("mean SNR must be finite and > 0, got {gamma_bar}"));
    }
    Ok(())
}

/// ∫₀^∞ f(γ)·(1/γ̄)e^(−γ/γ̄) dγ, evaluated as ∫₀¹ f(−γ̄·ln u) du.
pub fn fading_average<F: Fn(f64) -> f64>(f: F, gamma_bar: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_gamma_bar(gamma_bar)?;
    let integrand = |u: f64| {
        if u <= 0.0 {
            return f(f64::INFINITY);
        }
        f(-gamma_bar * u.ln())
    };
    Ok(integrate(integrand, 0.0, 1.0, spec)?.value)
}

/// ∫₀^∞ f(γ)·pdf(γ) dγ for an arbitrary density, using γ = scale·t/(1−t).
///
/// General-purpose harness used to sanity-check [`fading_average`] with
/// densities other than the exponential.
pub fn density_average<F, P>(f: F, pdf: P, scale: f64, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
    P: Fn(f64) -> f64,
{
    if !(scale > 0.0) {
        return domain(format!("scale must be > 0, got {scale}"));
    }
    let integrand = |t: f64| {
        if t >= 1.0 {
            return 0.0;
        }
        let one_minus = 1.0 - t;
        let gamma = scale * t / one_minus;
        let jacobian = scale / (one_minus * one_minus);
        let p = pdf(gamma);
        if p == 0.0 {
            0.0
        } else {
            f(gamma) * p * jacobian
        }
    };
    Ok(integrate(integrand, 0.0, 1.0, spec)?.value)
}

fn qam_coefficient(m: usize) -> Result<f64> {
    if m < 4 || !m.is_power_of_two() || !m.trailing_zeros().is_multiple_of(2) {
        return domain(format!("square M-QAM needs M = 4^n, got {m}"));
    }
    let root_m = (m as f64).sqrt();
    Ok((root_m - 1.0) / root_m)
}

/// The two θ integrals of the Rayleigh M-QAM SER, before any closed-form
/// reduction: P(1) over [0, π/2] and P(2) over [0, π/4].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayleighParts {
    pub part1: f64,
    pub part2: f64,
}

impl RayleighParts {
    pub fn ser(&self) -> f64 {
        self.part1 - self.part2
    }
}

/// θ-route evaluation of both parts. The integrand is the Laplace transform
/// 1/(1 + (3/(M−1))·γ̄/(2sin²θ)), written as 2sin²θ/(2sin²θ + aγ̄) so it is
/// finite (zero) at θ = 0.
pub fn mqam_rayleigh_parts(m: usize, gamma_bar: f64, spec: &QuadratureSpec) -> Result<RayleighParts> {
    let c = qam_coefficient(m)?;
    check_gamma_bar(gamma_bar)?;
    let a_gamma = 3.0 / (m as f64 - 1.0) * gamma_bar;
    let mgf = |theta: f64| {
        let s2 = 2.0 * theta.sin().powi(2);
        s2 / (s2 + a_gamma)
    };
    let i1 = integrate(mgf, 0.0, FRAC_PI_2, spec)?.value;
    let i2 = integrate(mgf, 0.0, FRAC_PI_4, spec)?.value;
    Ok(RayleighParts {
        part1: 4.0 / PI * c * i1,
        part2: 4.0 / PI * c * c * i2,
    })
}

/// θ-route Rayleigh M-QAM SER at mean symbol SNR γ̄.
pub fn mqam_rayleigh_oracle(m: usize, gamma_bar: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(mqam_rayleigh_parts(m, gamma_bar, spec)?.ser())
}

/// γ-route Rayleigh M-QAM SER: the AWGN SER averaged over the fading density.
pub fn mqam_rayleigh_gamma_route(m: usize, gamma_bar: f64, spec: &QuadratureSpec) -> Result<f64> {
    qam_coefficient(m)?;
    let q = m.trailing_zeros();
    fading_average(
        |gamma| {
            SnrPoint::from_esn0_linear(gamma, q)
                .and_then(|s| theory::mqam_awgn_ser(m, &s))
                .unwrap_or(0.0)
        },
        gamma_bar,
        spec,
    )
}

/// Part one in closed form after the √(b/a) ≈ 1 step:
/// 2c·[1 − √(aγ̄/(2 + aγ̄))], a = 3/(M−1).
pub fn part1_closed_form(m: usize, gamma_bar: f64) -> Result<f64> {
    let c = qam_coefficient(m)?;
    let ag = 3.0 / (m as f64 - 1.0) * gamma_bar;
    Ok(2.0 * c * (1.0 - (ag / (2.0 + ag)).sqrt()))
}

/// Part two in closed form:
/// c²·[1 − √(aγ̄/(2 + aγ̄))·(4/π)·arctan(√((2 + aγ̄)/(aγ̄)))].
pub fn part2_closed_form(m: usize, gamma_bar: f64) -> Result<f64> {
    let c = qam_coefficient(m)?;
    let ag = 3.0 / (m as f64 - 1.0) * gamma_bar;
    let ratio = (ag / (2.0 + ag)).sqrt();
    Ok(c * c * (1.0 - ratio * 4.0 / PI * (1.0 / ratio).atan()))
}
