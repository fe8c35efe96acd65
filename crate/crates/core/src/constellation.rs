//! BPSK, M-PAM and square M-QAM alphabets with Gray labels.
//!
//! Every alphabet is a product of one or two identical PAM rails with raw
//! levels `±1, ±3, …, ±(L−1)`. Square QAM uses `L = √M` levels on both the
//! in-phase and quadrature rails; the label of a QAM point is the Gray code of
//! its I-rail level (most significant half) followed by the Gray code of its
//! Q-rail level. Points are scaled by `k = 1/√E_raw` so the mean symbol energy
//! is one.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    Bpsk,
    Pam(usize),
    Qam(usize),
}

impl Scheme {
    /// Alphabet size M.
    pub fn order(&self) -> usize {
        match *self {
            Scheme::Bpsk => 2,
            Scheme::Pam(m) | Scheme::Qam(m) => m,
        }
    }

    /// q = log₂(M).
    pub fn bits_per_symbol(&self) -> u32 {
        self.order().trailing_zeros()
    }

    /// True for the one-dimensional alphabets (BPSK and PAM).
    pub fn is_real(&self) -> bool {
        !matches!(self, Scheme::Qam(_))
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::Bpsk => write!(f, "BPSK"),
            Scheme::Pam(m) => write!(f, "{m}-PAM"),
            Scheme::Qam(m) => write!(f, "{m}-QAM"),
        }
    }
}

/// Binary-reflected Gray code.
pub fn gray(n: u32) -> u32 {
    n ^ (n >> 1)
}

/// A normalized symbol alphabet with bit labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    scheme: Scheme,
    points: Vec<Complex64>,
    labels: Vec<u32>,
    label_to_index: Vec<usize>,
    raw_energy: f64,
    scale: f64,
    levels: Vec<f64>,
    thresholds: Vec<f64>,
}

impl Constellation {
    /// Antipodal pair: index 0 is −1 (bit 0), index 1 is +1 (bit 1).
    pub fn bpsk() -> Self {
        Self::from_rails(Scheme::Bpsk, 2, 1.0)
    }

    /// M-PAM with raw levels ±1, ±3, …, ±(M−1) and E_raw = (M²−1)/3.
    pub fn pam(m: usize) -> Result<Self> {
        if m < 4 || !m.is_power_of_two() {
            return domain(format!("M-PAM needs a power of two M >= 4, got {m}"));
        }
        let raw_energy = ((m * m - 1) as f64) / 3.0;
        Ok(Self::from_rails(Scheme::Pam(m), m, raw_energy))
    }

    /// Square M-QAM with E_raw = (2/3)(M−1).
    pub fn qam(m: usize) -> Result<Self> {
        if m < 4 || !m.is_power_of_two() || !m.trailing_zeros().is_multiple_of(2) {
            return domain(format!("square M-QAM needs M = 4^n (even bits per symbol), got {m}"));
        }
        let side = 1usize << (m.trailing_zeros() / 2);
        let raw_energy = 2.0 * ((m - 1) as f64) / 3.0;
        Ok(Self::from_rails(Scheme::Qam(m), side, raw_energy))
    }

    pub fn build(scheme: Scheme) -> Result<Self> {
        match scheme {
            Scheme::Bpsk => Ok(Self::bpsk()),
            Scheme::Pam(m) => Self::pam(m),
            Scheme::Qam(m) => Self::qam(m),
        }
    }

    fn from_rails(scheme: Scheme, side: usize, raw_energy: f64) -> Self {
        let scale = 1.0 / raw_energy.sqrt();
        let levels: Vec<f64> = (0..side)
            .map(|j| (2.0 * j as f64 - (side as f64 - 1.0)) * scale)
            .collect();
        let thresholds = levels.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let rail_bits = side.trailing_zeros();

        let (points, labels): (Vec<Complex64>, Vec<u32>) = if scheme.is_real() {
            (0..side)
                .map(|j| (Complex64::new(levels[j], 0.0), gray(j as u32)))
                .unzip()
        } else {
            (0..side)
                .flat_map(|i| (0..side).map(move |q| (i, q)))
                .map(|(i, q)| {
                    (
                        Complex64::new(levels[i], levels[q]),
                        (gray(i as u32) << rail_bits) | gray(q as u32),
                    )
                })
                .unzip()
        };

        let mut label_to_index = vec![0; points.len()];
        for (index, &label) in labels.iter().enumerate() {
            label_to_index[label as usize] = index;
        }

        Self {
            scheme,
            points,
            labels,
            label_to_index,
            raw_energy,
            scale,
            levels,
            thresholds,
        }
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn order(&self) -> usize {
        self.points.len()
    }

    pub fn bits_per_symbol(&self) -> u32 {
        self.scheme.bits_per_symbol()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn point(&self, index: usize) -> Complex64 {
        self.points[index]
    }

    /// Labels as integers; bit `q−1` is the first transmitted bit.
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> u32 {
        self.labels[index]
    }

    /// Label of point `index` as a string of `0`/`1`, first bit first.
    pub fn label_string(&self, index: usize) -> String {
        let q = self.bits_per_symbol() as usize;
        format!("{:0q$b}", self.labels[index])
    }

    pub fn index_of_label(&self, label: u32) -> usize {
        self.label_to_index[label as usize]
    }

    /// Average energy of the unnormalized alphabet.
    pub fn raw_energy(&self) -> f64 {
        self.raw_energy
    }

    /// Normalization factor k = 1/√E_raw.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Normalized amplitudes of one rail, ascending.
    pub fn rail_levels(&self) -> &[f64] {
        &self.levels
    }

    /// Midpoints between consecutive rail levels.
    pub fn rail_thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    /// Raw (unnormalized) points on the odd-integer grid.
    pub fn raw_points(&self) -> Vec<Complex64> {
        self.points.iter().map(|p| p / self.scale).collect()
    }

    /// Mean |x|² over the alphabet.
    pub fn mean_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.order() as f64
    }

    /// Splits a bit stream into q-bit groups and returns the point indices.
    pub fn bits_to_indices(&self, bits: &[u8]) -> Result<Vec<usize>> {
        let q = self.bits_per_symbol() as usize;
        if !bits.len().is_multiple_of(q) {
            return domain(format!(
                "bit stream length {} is not a multiple of {q} bits per symbol",
                bits.len()
            ));
        }
        bits.chunks_exact(q)
            .map(|group| {
                let mut label = 0u32;
                for &b in group {
                    if b > 1 {
                        return domain(format!("bit values must be 0 or 1, got {b}"));
                    }
                    label = (label << 1) | b as u32;
                }
                Ok(self.index_of_label(label))
            })
            .collect()
    }

    /// Maps consecutive q-bit groups onto constellation points.
    pub fn map_bits(&self, bits: &[u8]) -> Result<Vec<Complex64>> {
        Ok(self
            .bits_to_indices(bits)?
            .into_iter()
            .map(|i| self.points[i])
            .collect())
    }

    /// Inverse of [`bits_to_indices`](Self::bits_to_indices).
    pub fn demap_symbols(&self, indices: &[usize]) -> Vec<u8> {
        let q = self.bits_per_symbol();
        indices
            .iter()
            .flat_map(|&i| {
                let label = self.labels[i];
                (0..q).rev().map(move |k| ((label >> k) & 1) as u8)
            })
            .collect()
    }

    /// Tags every QAM point as corner, side or inside by its grid position.
    pub fn classify_points(&self) -> Result<PointClass> {
        if !matches!(self.scheme, Scheme::Qam(_)) {
            return domain(format!(
                "point classification needs a QAM alphabet, got {}",
                self.scheme
            ));
        }
        let side = self.levels.len();
        let edge = |j: usize| j == 0 || j == side - 1;
        let kinds: Vec<PointKind> = (0..self.order())
            .map(|index| {
                let (i, q) = (index / side, index % side);
                match (edge(i), edge(q)) {
                    (true, true) => PointKind::Corner,
                    (false, false) => PointKind::Inside,
                    _ => PointKind::Side,
                }
            })
            .collect();
        let count = |k: PointKind| kinds.iter().filter(|&&x| x == k).count();
        Ok(PointClass {
            corner: count(PointKind::Corner),
            side: count(PointKind::Side),
            inside: count(PointKind::Inside),
            kinds,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointKind {
    Corner,
    Side,
    Inside,
}

/// Per-point region tags of a square QAM grid and their totals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointClass {
    pub kinds: Vec<PointKind>,
    pub corner: usize,
    pub side: usize,
    pub inside: usize,
}

impl PointClass {
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.corner, self.side, self.inside)
    }
}
