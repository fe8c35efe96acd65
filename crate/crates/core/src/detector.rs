//! Hard-decision maximum-likelihood detection and error counting.
//!
//! On a rectangular grid with equiprobable symbols the nearest point is found
//! rail by rail: slice the real part against the midpoints between levels,
//! slice the imaginary part the same way for QAM, and recombine. A received
//! value exactly on a midpoint goes to the lower level, which makes ties
//! resolve to the smaller symbol index.

use std::ops::{Add, AddAssign};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constellation::Constellation;
use crate::error::{domain, Result};

fn slice(thresholds: &[f64], value: f64) -> usize {
    thresholds.partition_point(|&t| t < value)
}

/// Index of the constellation point nearest to `y`.
pub fn detect_one(c: &Constellation, y: Complex64) -> usize {
    let thresholds = c.rail_thresholds();
    let i = slice(thresholds, y.re);
    if c.scheme().is_real() {
        i
    } else {
        i * c.rail_levels().len() + slice(thresholds, y.im)
    }
}

/// Nearest-neighbour decisions for a received (equalized) stream.
pub fn detect(c: &Constellation, received: &[Complex64]) -> Vec<usize> {
    received.iter().map(|&y| detect_one(c, y)).collect()
}

/// Exhaustive search over all M points; the smallest index wins ties.
pub fn detect_exhaustive(c: &Constellation, y: Complex64) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, p) in c.points().iter().enumerate() {
        let d = (y - p).norm_sqr();
        if d < best_d {
            best = i;
            best_d = d;
        }
    }
    best
}

/// Symbol and bit error tallies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorCount {
    pub symbols: u64,
    pub symbol_errors: u64,
    pub bits: u64,
    pub bit_errors: u64,
}

impl Add for ErrorCount {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            symbols: self.symbols + rhs.symbols,
            symbol_errors: self.symbol_errors + rhs.symbol_errors,
            bits: self.bits + rhs.bits,
            bit_errors: self.bit_errors + rhs.bit_errors,
        }
    }
}

impl AddAssign for ErrorCount {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

/// Compares sent and decided indices; bit errors are label Hamming distances.
pub fn count_errors(c: &Constellation, sent: &[usize], decided: &[usize]) -> Result<ErrorCount> {
    if sent.len() != decided.len() {
        return domain(format!(
            "sent stream has {} symbols but decided stream has {}",
            sent.len(),
            decided.len()
        ));
    }
    let mut count = ErrorCount {
        symbols: sent.len() as u64,
        bits: sent.len() as u64 * c.bits_per_symbol() as u64,
        ..Default::default()
    };
    for (&s, &d) in sent.iter().zip(decided) {
        if s != d {
            count.symbol_errors += 1;
            count.bit_errors += (c.label(s) ^ c.label(d)).count_ones() as u64;
        }
    }
    Ok(count)
}
