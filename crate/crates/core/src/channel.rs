//! AWGN and flat Rayleigh fading channels with perfect-CSI equalization.
//!
//! Symbols are assumed to come from a unit-energy alphabet (E_s = 1), so the
//! noise spectral density is N₀ = 1/(E_s/N₀). Noise has variance N₀/2 per real
//! dimension. Fade coefficients are circular complex Gaussian with variance ½
//! per component, so E[|h|²] = 1 and the mean instantaneous SNR equals E_s/N₀.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::rng::{substream, SimRng};

/// An operating point: E_b/N₀ in dB together with q = log₂(M).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "SnrRepr", try_from = "SnrRepr")]
pub struct SnrPoint {
    ebn0_db: f64,
    bits_per_symbol: u32,
    ebn0_linear: f64,
    esn0_linear: f64,
}

#[derive(Serialize, Deserialize)]
struct SnrRepr {
    ebn0_db: f64,
    esn0_db: f64,
    bits_per_symbol: u32,
}

impl From<SnrPoint> for SnrRepr {
    fn from(s: SnrPoint) -> Self {
        Self {
            ebn0_db: s.ebn0_db,
            esn0_db: s.esn0_db(),
            bits_per_symbol: s.bits_per_symbol,
        }
    }
}

impl TryFrom<SnrRepr> for SnrPoint {
    type Error = Error;

    fn try_from(r: SnrRepr) -> Result<Self> {
        SnrPoint::new(r.ebn0_db, r.bits_per_symbol)
    }
}

impl SnrPoint {
    /// `+∞` dB is accepted as the noiseless sentinel and `−∞` dB as zero SNR.
    pub fn new(ebn0_db: f64, bits_per_symbol: u32) -> Result<Self> {
        if ebn0_db.is_nan() {
            return domain("Eb/N0 must not be NaN");
        }
        let ebn0_linear = 10f64.powf(ebn0_db / 10.0);
        Self::with_linear(
            ebn0_db,
            bits_per_symbol,
            ebn0_linear,
            bits_per_symbol as f64 * ebn0_linear,
        )
    }

    pub fn from_ebn0_linear(ebn0: f64, bits_per_symbol: u32) -> Result<Self> {
        if !(ebn0 >= 0.0) {
            return domain(format!("linear Eb/N0 must be >= 0, got {ebn0}"));
        }
        Self::with_linear(
            10.0 * ebn0.log10(),
            bits_per_symbol,
            ebn0,
            bits_per_symbol as f64 * ebn0,
        )
    }

    pub fn from_esn0_linear(esn0: f64, bits_per_symbol: u32) -> Result<Self> {
        if !(esn0 >= 0.0) {
            return domain(format!("linear Es/N0 must be >= 0, got {esn0}"));
        }
        let ebn0 = esn0 / bits_per_symbol.max(1) as f64;
        Self::with_linear(10.0 * ebn0.log10(), bits_per_symbol, ebn0, esn0)
    }

    pub fn from_esn0_db(esn0_db: f64, bits_per_symbol: u32) -> Result<Self> {
        if esn0_db.is_nan() {
            return domain("Es/N0 must not be NaN");
        }
        Self::from_esn0_linear(10f64.powf(esn0_db / 10.0), bits_per_symbol)
    }

    fn with_linear(ebn0_db: f64, bits_per_symbol: u32, ebn0_linear: f64, esn0_linear: f64) -> Result<Self> {
        if bits_per_symbol < 1 {
            return domain("bits_per_symbol must be at least 1");
        }
        Ok(Self {
            ebn0_db,
            bits_per_symbol,
            ebn0_linear,
            esn0_linear,
        })
    }

    pub fn ebn0_db(&self) -> f64 {
        self.ebn0_db
    }

    pub fn esn0_db(&self) -> f64 {
        10.0 * self.esn0_linear.log10()
    }

    pub fn bits_per_symbol(&self) -> u32 {
        self.bits_per_symbol
    }

    pub fn ebn0_linear(&self) -> f64 {
        self.ebn0_linear
    }

    /// E_s/N₀ = q·E_b/N₀.
    pub fn esn0_linear(&self) -> f64 {
        self.esn0_linear
    }

    /// Noise spectral density for a unit-energy alphabet.
    pub fn n0(&self) -> f64 {
        1.0 / self.esn0_linear
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Awgn,
    Rayleigh,
    /// h ≡ 1, n ≡ 0. Used to check the pipeline end to end.
    Noiseless,
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChannelKind::Awgn => "awgn",
            ChannelKind::Rayleigh => "rayleigh",
            ChannelKind::Noiseless => "noiseless",
        })
    }
}

/// Whether the transmitted alphabet occupies one or two real dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalSpace {
    Real,
    Complex,
}

/// The random quantities applied to one block of symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub noise: Vec<Complex64>,
    pub fade: Option<Vec<Complex64>>,
}

impl ChannelRealization {
    /// Draws noise (and fades for Rayleigh) for `len` symbols.
    ///
    /// Over Rayleigh fading the noise is always circular complex: after the
    /// receiver divides by a complex h, only circular noise leaves N₀/(2|h|²)
    /// in each rail.
    pub fn draw<R: Rng>(kind: ChannelKind, space: SignalSpace, snr: &SnrPoint, len: usize, rng: &mut R) -> Self {
        match kind {
            ChannelKind::Noiseless => Self {
                noise: vec![Complex64::new(0.0, 0.0); len],
                fade: None,
            },
            ChannelKind::Awgn => Self {
                noise: draw_noise(space, snr.n0(), len, rng),
                fade: None,
            },
            ChannelKind::Rayleigh => {
                // one fade then one noise sample per symbol keeps blocks splittable
                let mut fade = Vec::with_capacity(len);
                let mut noise = Vec::with_capacity(len);
                let sigma = (0.5 * snr.n0()).sqrt();
                for _ in 0..len {
                    fade.push(draw_fade(rng));
                    noise.push(complex_gaussian(sigma, rng));
                }
                Self {
                    noise,
                    fade: Some(fade),
                }
            }
        }
    }

    /// y = h·x + n.
    pub fn apply(&self, symbols: &[Complex64]) -> Result<Vec<Complex64>> {
        if symbols.len() != self.noise.len() {
            return domain(format!(
                "realization covers {} symbols, got {}",
                self.noise.len(),
                symbols.len()
            ));
        }
        Ok(match &self.fade {
            None => symbols.iter().zip(&self.noise).map(|(x, n)| x + n).collect(),
            Some(fade) => symbols
                .iter()
                .zip(fade)
                .zip(&self.noise)
                .map(|((x, h), n)| h * x + n)
                .collect(),
        })
    }
}

fn complex_gaussian<R: Rng>(sigma: f64, rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(sigma * re, sigma * im)
}

/// Noise samples with variance N₀/2 per real dimension.
pub fn draw_noise<R: Rng>(space: SignalSpace, n0: f64, len: usize, rng: &mut R) -> Vec<Complex64> {
    let sigma = (0.5 * n0).sqrt();
    match space {
        SignalSpace::Real => (0..len)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                Complex64::new(sigma * re, 0.0)
            })
            .collect(),
        SignalSpace::Complex => (0..len).map(|_| complex_gaussian(sigma, rng)).collect(),
    }
}

/// One flat Rayleigh coefficient, variance ½ per component.
pub fn draw_fade<R: Rng>(rng: &mut R) -> Complex64 {
    complex_gaussian(FRAC_1_SQRT_2, rng)
}

fn seeded(seed: u64) -> SimRng {
    substream(seed, 0, 0)
}

/// Adds white Gaussian noise at the given operating point.
pub fn awgn(symbols: &[Complex64], space: SignalSpace, snr: &SnrPoint, seed: u64) -> Vec<Complex64> {
    let realization = ChannelRealization::draw(ChannelKind::Awgn, space, snr, symbols.len(), &mut seeded(seed));
    realization.apply(symbols).expect("realization sized to the input")
}

/// Applies per-symbol flat Rayleigh fading plus noise; returns the received
/// samples and the fade coefficients.
pub fn rayleigh(symbols: &[Complex64], snr: &SnrPoint, seed: u64) -> (Vec<Complex64>, Vec<Complex64>) {
    let realization = ChannelRealization::draw(
        ChannelKind::Rayleigh,
        SignalSpace::Complex,
        snr,
        symbols.len(),
        &mut seeded(seed),
    );
    let received = realization.apply(symbols).expect("realization sized to the input");
    (received, realization.fade.expect("rayleigh draws fades"))
}

/// Zero-forcing with known fades: ŷ = y/h = x + n/h.
pub fn equalize(received: &[Complex64], fade: &[Complex64]) -> Result<Vec<Complex64>> {
    if received.len() != fade.len() {
        return domain(format!(
            "received stream has {} samples but fade stream has {}",
            received.len(),
            fade.len()
        ));
    }
    received
        .iter()
        .zip(fade)
        .enumerate()
        .map(|(i, (y, h))| {
            if h.norm_sqr() == 0.0 {
                Err(Error::Numeric(format!("zero fade coefficient at symbol {i}")))
            } else {
                Ok(y / h)
            }
        })
        .collect()
}
