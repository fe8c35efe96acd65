//! Batched, seeded Monte Carlo estimation of SER and BER.
//!
//! A run draws uniform bits, maps them, passes them through the channel,
//! equalizes (Rayleigh), detects and counts errors, one batch at a time.
//! Batch `b` of grid point `p` always uses RNG substream `(seed, p, b)`, and
//! batches are merged strictly in index order with the stopping test applied
//! after each one. Batches may be computed in parallel, but the result is the
//! same for every worker count.

use std::time::Instant;

use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{equalize, ChannelKind, ChannelRealization, SignalSpace, SnrPoint};
use crate::constellation::{Constellation, Scheme};
use crate::detector::{count_errors, detect, ErrorCount};
use crate::error::{domain, Result};
use crate::rng::{substream, SimRng};

/// z for a two-sided 95% normal interval.
pub const Z95: f64 = 1.96;

/// When a run stops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StoppingRule {
    pub min_symbol_errors: u64,
    pub max_symbols: u64,
    pub batch_size: u64,
}

impl Default for StoppingRule {
    fn default() -> Self {
        Self {
            min_symbol_errors: 100,
            max_symbols: 100_000_000,
            batch_size: 100_000,
        }
    }
}

impl StoppingRule {
    pub fn new(min_symbol_errors: u64, max_symbols: u64, batch_size: u64) -> Result<Self> {
        let rule = Self {
            min_symbol_errors,
            max_symbols,
            batch_size,
        };
        rule.validate()?;
        Ok(rule)
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_symbol_errors < 1 {
            return domain("min_symbol_errors must be at least 1");
        }
        if self.batch_size < 1 || self.batch_size > self.max_symbols {
            return domain(format!(
                "batch_size must lie in [1, max_symbols={}], got {}",
                self.max_symbols, self.batch_size
            ));
        }
        Ok(())
    }
}

/// Outcome of one Monte Carlo run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonteCarloResult {
    pub scheme: Scheme,
    pub channel: ChannelKind,
    pub snr: SnrPoint,
    pub counts: ErrorCount,
    pub ser_hat: f64,
    pub ber_hat: f64,
    /// Wald 95% half-widths.
    pub ci95_ser: f64,
    pub ci95_ber: f64,
    pub seed: u64,
    /// Set when the symbol budget ran out before `min_symbol_errors`.
    pub low_confidence: bool,
    /// Wall-clock seconds; not serialized so results compare byte for byte.
    #[serde(skip)]
    pub elapsed: f64,
}

/// 1.96·√(p(1−p)/n), capped so the interval stays inside [0, 1] on the wide side.
pub fn wald_half_width(p: f64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let h = Z95 * (p * (1.0 - p) / n as f64).sqrt();
    h.min(p.max(1.0 - p))
}

impl MonteCarloResult {
    fn from_counts(
        c: &Constellation,
        channel: ChannelKind,
        snr: SnrPoint,
        counts: ErrorCount,
        rule: &StoppingRule,
        seed: u64,
        elapsed: f64,
    ) -> Self {
        let ratio = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let ser_hat = ratio(counts.symbol_errors, counts.symbols);
        let ber_hat = ratio(counts.bit_errors, counts.bits);
        Self {
            scheme: c.scheme(),
            channel,
            snr,
            counts,
            ser_hat,
            ber_hat,
            ci95_ser: wald_half_width(ser_hat, counts.symbols),
            ci95_ber: wald_half_width(ber_hat, counts.bits),
            seed,
            low_confidence: counts.symbol_errors < rule.min_symbol_errors,
            elapsed,
        }
    }

    /// SER interval clamped to [0, 1].
    pub fn ser_interval(&self) -> (f64, f64) {
        (
            (self.ser_hat - self.ci95_ser).max(0.0),
            (self.ser_hat + self.ci95_ser).min(1.0),
        )
    }

    pub fn ber_interval(&self) -> (f64, f64) {
        (
            (self.ber_hat - self.ci95_ber).max(0.0),
            (self.ber_hat + self.ci95_ber).min(1.0),
        )
    }
}

fn random_bits(rng: &mut SimRng, n: usize) -> Vec<u8> {
    let mut bits = Vec::with_capacity(n);
    while bits.len() < n {
        let word = rng.next_u64();
        let take = (n - bits.len()).min(64);
        bits.extend((0..take).map(|k| ((word >> k) & 1) as u8));
    }
    bits
}

/// One batch through the full chain: bits → map → channel → equalize → detect → count.
pub fn simulate_batch(
    c: &Constellation,
    channel: ChannelKind,
    snr: &SnrPoint,
    len: usize,
    rng: &mut SimRng,
) -> Result<ErrorCount> {
    let bits = random_bits(rng, len * c.bits_per_symbol() as usize);
    let sent = c.bits_to_indices(&bits)?;
    let symbols: Vec<_> = sent.iter().map(|&i| c.point(i)).collect();
    let space = if c.scheme().is_real() {
        SignalSpace::Real
    } else {
        SignalSpace::Complex
    };
    let realization = ChannelRealization::draw(channel, space, snr, len, rng);
    let mut received = realization.apply(&symbols)?;
    if let Some(fade) = &realization.fade {
        received = equalize(&received, fade)?;
    }
    let decided = detect(c, &received);
    count_errors(c, &sent, &decided)
}

/// Runs grid point `point` until the stopping rule fires.
///
/// `workers` bounds how many batches are computed concurrently; `None` uses
/// the global rayon pool. The result does not depend on it.
pub fn run_point(
    c: &Constellation,
    channel: ChannelKind,
    snr: SnrPoint,
    rule: &StoppingRule,
    seed: u64,
    point: u64,
    workers: Option<usize>,
) -> Result<MonteCarloResult> {
    rule.validate()?;
    let started = Instant::now();
    let wave = workers.unwrap_or_else(rayon::current_num_threads).max(1);
    let mut total = ErrorCount::default();
    let mut next_batch = 0u64;

    'outer: while total.symbols < rule.max_symbols && total.symbol_errors < rule.min_symbol_errors {
        let start_symbols = total.symbols;
        let lens: Vec<(u64, usize)> = (0..wave as u64)
            .map(|k| {
                let offset = start_symbols + k * rule.batch_size;
                let len = rule.batch_size.min(rule.max_symbols.saturating_sub(offset));
                (next_batch + k, len as usize)
            })
            .filter(|&(_, len)| len > 0)
            .collect();

        let simulate = |&(batch, len): &(u64, usize)| {
            let mut rng = substream(seed, point, batch);
            simulate_batch(c, channel, &snr, len, &mut rng)
        };
        let counts: Vec<Result<ErrorCount>> = if wave == 1 {
            lens.iter().map(simulate).collect()
        } else {
            lens.par_iter().map(simulate).collect()
        };

        for count in counts {
            total += count?;
            next_batch += 1;
            if total.symbol_errors >= rule.min_symbol_errors || total.symbols >= rule.max_symbols {
                break 'outer;
            }
        }
    }

    Ok(MonteCarloResult::from_counts(
        c,
        channel,
        snr,
        total,
        rule,
        seed,
        started.elapsed().as_secs_f64(),
    ))
}

/// Single-point run; equivalent to the first point of [`sweep`].
pub fn run(
    c: &Constellation,
    channel: ChannelKind,
    snr: SnrPoint,
    rule: &StoppingRule,
    seed: u64,
) -> Result<MonteCarloResult> {
    run_point(c, channel, snr, rule, seed, 0, None)
}

/// One run per grid point, point `i` on substream `(seed, i)`.
pub fn sweep(
    c: &Constellation,
    channel: ChannelKind,
    grid: &[SnrPoint],
    rule: &StoppingRule,
    seed: u64,
    workers: Option<usize>,
) -> Result<Vec<MonteCarloResult>> {
    if grid.is_empty() {
        return domain("SNR grid must not be empty");
    }
    grid.iter()
        .enumerate()
        .map(|(i, snr)| run_point(c, channel, *snr, rule, seed, i as u64, workers))
        .collect()
}
