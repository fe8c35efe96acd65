//! Closed-form symbol and bit error probabilities.
//!
//! SER evaluators read E_s/N₀ from the [`SnrPoint`]; BER evaluators read
//! E_b/N₀ and convert with E_s = log₂(M)·E_b themselves. The M-QAM Rayleigh
//! result takes the mean SNR γ̄ as a *symbol* SNR (E_s/N₀·E[|h|²]), because it
//! is the fading average of the E_s-domain AWGN expression.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::channel::SnrPoint;
use crate::error::{domain, Result};
use crate::specfun::{erfc_unchecked as erfc, q_unchecked as q};

fn check_pam(m: usize) -> Result<()> {
    if m < 4 || !m.is_power_of_two() {
        return domain(format!("M-PAM needs a power of two M >= 4, got {m}"));
    }
    Ok(())
}

fn check_qam(m: usize) -> Result<()> {
    if m < 4 || !m.is_power_of_two() || !m.trailing_zeros().is_multiple_of(2) {
        return domain(format!("square M-QAM needs M = 4^n, got {m}"));
    }
    Ok(())
}

fn log2(m: usize) -> f64 {
    m.trailing_zeros() as f64
}

/// ½·erfc(√(E_b/N₀)).
pub fn bpsk_awgn_ber(snr: &SnrPoint) -> f64 {
    0.5 * erfc(snr.ebn0_linear().sqrt())
}

/// ½·(1 − √(γ̄/(1+γ̄))) with γ̄ = E_b/N₀, the exact Rayleigh average.
pub fn bpsk_rayleigh_ber(snr: &SnrPoint) -> f64 {
    let g = snr.ebn0_linear();
    if g.is_infinite() {
        return 0.0;
    }
    // 1 − √(g/(1+g)) rewritten without cancellation
    let root = (g / (1.0 + g)).sqrt();
    0.5 / ((1.0 + g) * (1.0 + root))
}

/// ((M−1)/M)·erfc(√(3E_s/((M²−1)N₀))). For M = 4 the argument is √(E_s/5N₀).
pub fn mpam_awgn_ser(m: usize, snr: &SnrPoint) -> Result<f64> {
    check_pam(m)?;
    let mf = m as f64;
    let arg = (3.0 * snr.esn0_linear() / (mf * mf - 1.0)).sqrt();
    Ok((mf - 1.0) / mf * erfc(arg))
}

/// Gray-coded M-PAM BER ≈ SER/log₂(M) at E_s = log₂(M)·E_b.
/// For M = 4 this is (3/8)·erfc(√(2E_b/5N₀)).
pub fn mpam_awgn_ber(m: usize, snr: &SnrPoint) -> Result<f64> {
    check_pam(m)?;
    let q = log2(m);
    let es = SnrPoint::from_esn0_linear(q * snr.ebn0_linear(), q as u32)?;
    Ok(mpam_awgn_ser(m, &es)? / q)
}

/// Distance form of the M-PAM BER: (M−1)/(M·log₂M)·erfc(d/(2√2σ)),
/// with `d` the spacing between adjacent levels and σ the noise deviation.
pub fn mpam_awgn_ber_distance(m: usize, distance: f64, sigma: f64) -> Result<f64> {
    check_pam(m)?;
    if !(distance >= 0.0) || !(sigma > 0.0) {
        return domain(format!(
            "need distance >= 0 and sigma > 0, got d={distance}, sigma={sigma}"
        ));
    }
    let mf = m as f64;
    Ok((mf - 1.0) / (mf * log2(m)) * erfc(distance * 0.5 * FRAC_1_SQRT_2 / sigma))
}

/// QPSK SER: erfc(√(E_s/2N₀)) − ¼erfc²(√(E_s/2N₀)); with `exact == false`
/// the squared term is dropped (high-SNR form).
pub fn qpsk_awgn_ser(snr: &SnrPoint, exact: bool) -> f64 {
    let e = erfc((0.5 * snr.esn0_linear()).sqrt());
    if exact {
        e - 0.25 * e * e
    } else {
        e
    }
}

/// Square M-QAM SER in Q-function form:
/// 4c·Q(x) − 4c²·Q²(x), c = (√M−1)/√M, x = √(3E_s/((M−1)N₀)).
pub fn mqam_awgn_ser(m: usize, snr: &SnrPoint) -> Result<f64> {
    check_qam(m)?;
    let root_m = (m as f64).sqrt();
    let c = (root_m - 1.0) / root_m;
    let qx = q((3.0 * snr.esn0_linear() / (m as f64 - 1.0)).sqrt());
    Ok(4.0 * c * qx - 4.0 * c * c * qx * qx)
}

/// The same SER in erfc form:
/// 2(1−1/√M)·erfc(k√(E_s/N₀)) − (1−2/√M+1/M)·erfc²(k√(E_s/N₀)),
/// k = √(3/(2(M−1))).
pub fn mqam_awgn_ser_erfc(m: usize, snr: &SnrPoint) -> Result<f64> {
    check_qam(m)?;
    let mf = m as f64;
    let root_m = mf.sqrt();
    let e = erfc(qam_rail_argument(m, snr));
    Ok(2.0 * (1.0 - 1.0 / root_m) * e - (1.0 - 2.0 / root_m + 1.0 / mf) * e * e)
}

fn qam_rail_argument(m: usize, snr: &SnrPoint) -> f64 {
    (1.5 / (m as f64 - 1.0) * snr.esn0_linear()).sqrt()
}

/// Error probabilities of one corner, side and inside point of square M-QAM.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionErrors {
    pub corner: f64,
    pub side: f64,
    pub inside: f64,
}

/// Per-region conditional error probabilities, from the products of
/// per-rail correct-decision probabilities.
pub fn mqam_region_error_probabilities(m: usize, snr: &SnrPoint) -> Result<RegionErrors> {
    check_qam(m)?;
    let e = erfc(qam_rail_argument(m, snr));
    let outer_ok = 1.0 - 0.5 * e;
    let inner_ok = 1.0 - e;
    Ok(RegionErrors {
        corner: 1.0 - outer_ok * outer_ok,
        side: 1.0 - outer_ok * inner_ok,
        inside: 1.0 - inner_ok * inner_ok,
    })
}

/// SER as the region-count weighted mean of [`mqam_region_error_probabilities`].
pub fn mqam_awgn_ser_by_region(m: usize, snr: &SnrPoint) -> Result<f64> {
    let p = mqam_region_error_probabilities(m, snr)?;
    let r = (m as f64).sqrt();
    let (corner, side, inside) = (4.0, 4.0 * (r - 2.0), (r - 2.0) * (r - 2.0));
    Ok((corner * p.corner + side * p.side + inside * p.inside) / m as f64)
}

/// Gray-coded M-QAM BER ≈ SER/log₂(M) at E_s = log₂(M)·E_b, both terms kept.
pub fn mqam_awgn_ber(m: usize, snr: &SnrPoint) -> Result<f64> {
    check_qam(m)?;
    let q = log2(m);
    let es = SnrPoint::from_esn0_linear(q * snr.ebn0_linear(), q as u32)?;
    Ok(mqam_awgn_ser(m, &es)? / q)
}

/// Leading-term BER: 2(1−1/√M)·erfc(k√(E_s/N₀))/log₂(M).
/// For 16-QAM this is (3/8)·erfc(√(2E_b/5N₀)).
pub fn mqam_awgn_ber_leading(m: usize, snr: &SnrPoint) -> Result<f64> {
    check_qam(m)?;
    let q = log2(m);
    let es = SnrPoint::from_esn0_linear(q * snr.ebn0_linear(), q as u32)?;
    let root_m = (m as f64).sqrt();
    Ok(2.0 * (1.0 - 1.0 / root_m) * erfc(qam_rail_argument(m, &es)) / q)
}

/// M-QAM SER over flat Rayleigh fading at mean symbol SNR γ̄:
///
/// 2c[1 − β] − c²[1 − β·(4/π)·arctan(1/β)],
/// c = (√M−1)/√M, β = √(1.5γ̄/(M−1+1.5γ̄)).
pub fn mqam_rayleigh_ser(m: usize, gamma_bar: f64) -> Result<f64> {
    check_qam(m)?;
    if !(gamma_bar > 0.0) {
        return domain(format!("mean SNR must be > 0, got {gamma_bar}"));
    }
    if gamma_bar.is_infinite() {
        return Ok(0.0);
    }
    let root_m = (m as f64).sqrt();
    let c = (root_m - 1.0) / root_m;
    let a = 1.5 * gamma_bar;
    let denom = m as f64 - 1.0 + a;
    let beta = (a / denom).sqrt();
    // 1 − β = (1 − β²)/(1 + β) avoids cancellation at high SNR
    let one_minus_beta = (m as f64 - 1.0) / denom / (1.0 + beta);
    let arctan_term = 4.0 / PI * (denom / a).sqrt().atan();
    Ok(2.0 * c * one_minus_beta - c * c * (1.0 - beta * arctan_term))
}

/// M-PAM SER over flat Rayleigh fading at mean symbol SNR γ̄:
/// ((M−1)/M)·(1 − √(bγ̄/(1+bγ̄))), b = 3/(M²−1). Exact.
pub fn mpam_rayleigh_ser(m: usize, gamma_bar: f64) -> Result<f64> {
    check_pam(m)?;
    if !(gamma_bar > 0.0) {
        return domain(format!("mean SNR must be > 0, got {gamma_bar}"));
    }
    if gamma_bar.is_infinite() {
        return Ok(0.0);
    }
    let mf = m as f64;
    let bg = 3.0 / (mf * mf - 1.0) * gamma_bar;
    let root = (bg / (1.0 + bg)).sqrt();
    Ok((mf - 1.0) / mf / ((1.0 + bg) * (1.0 + root)))
}

/// Which closed form produced a [`TheoryCurve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FormulaId {
    BpskAwgnBer,
    BpskRayleighBer,
    MpamAwgnSer(usize),
    MpamAwgnBer(usize),
    QpskAwgnSer {
        exact: bool,
    },
    MqamAwgnSer(usize),
    MqamAwgnBer(usize),
    MqamAwgnBerLeading(usize),
    /// γ̄ taken as E_s/N₀ of each point.
    MqamRayleighSer(usize),
    /// γ̄ taken as E_s/N₀ of each point.
    MpamRayleighSer(usize),
}

impl FormulaId {
    pub fn evaluate(&self, snr: &SnrPoint) -> Result<f64> {
        match *self {
            FormulaId::BpskAwgnBer => Ok(bpsk_awgn_ber(snr)),
            FormulaId::BpskRayleighBer => Ok(bpsk_rayleigh_ber(snr)),
            FormulaId::MpamAwgnSer(m) => mpam_awgn_ser(m, snr),
            FormulaId::MpamAwgnBer(m) => mpam_awgn_ber(m, snr),
            FormulaId::QpskAwgnSer { exact } => Ok(qpsk_awgn_ser(snr, exact)),
            FormulaId::MqamAwgnSer(m) => mqam_awgn_ser(m, snr),
            FormulaId::MqamAwgnBer(m) => mqam_awgn_ber(m, snr),
            FormulaId::MqamAwgnBerLeading(m) => mqam_awgn_ber_leading(m, snr),
            FormulaId::MqamRayleighSer(m) => mqam_rayleigh_ser(m, snr.esn0_linear()),
            FormulaId::MpamRayleighSer(m) => mpam_rayleigh_ser(m, snr.esn0_linear()),
        }
    }
}

/// A closed form sampled over an SNR grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryCurve {
    pub formula: FormulaId,
    pub points: Vec<(SnrPoint, f64)>,
}

impl TheoryCurve {
    pub fn evaluate(formula: FormulaId, grid: &[SnrPoint]) -> Result<Self> {
        let points = grid
            .iter()
            .map(|s| Ok((*s, formula.evaluate(s)?)))
            .collect::<Result<_>>()?;
        Ok(Self { formula, points })
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|(_, v)| *v).collect()
    }
}
