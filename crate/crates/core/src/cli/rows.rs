//! Per-source evaluation of a sweep.
//!
//! SER is a function of E_s/N₀ and BER of E_b/N₀. For Gray-coded PAM and QAM
//! (beyond QPSK) both the closed forms and the oracles report BER as SER/q;
//! BPSK and QPSK BER are exact.

use crate::channel::SnrPoint;
use crate::constellation::Constellation;
use crate::error::Result;
use crate::montecarlo::{self, MonteCarloResult};
use crate::oracle::{fading_average, mqam_rayleigh_oracle};
use crate::quadrature::QuadratureSpec;
use crate::specfun::{erfc_unchecked as erfc, q_craig, q_squared_craig};
use crate::theory;

use super::{Channel, CliError, Modulation, Row, Source, SweepConfig};

/// (SER, BER) from the closed forms.
pub(crate) fn theory_point(modulation: Modulation, channel: Channel, snr: &SnrPoint) -> Result<(f64, f64)> {
    let q = snr.bits_per_symbol() as f64;
    let es = snr.esn0_linear();
    match (modulation, channel) {
        (Modulation::Bpsk, Channel::Awgn) => {
            let p = theory::bpsk_awgn_ber(snr);
            Ok((p, p))
        }
        (Modulation::Bpsk, Channel::Rayleigh) => {
            let p = theory::bpsk_rayleigh_ber(snr);
            Ok((p, p))
        }
        (Modulation::Pam4, Channel::Awgn) => Ok((theory::mpam_awgn_ser(4, snr)?, theory::mpam_awgn_ber(4, snr)?)),
        (Modulation::Pam4, Channel::Rayleigh) => {
            let ser = theory::mpam_rayleigh_ser(4, es)?;
            Ok((ser, ser / q))
        }
        (Modulation::Qpsk, Channel::Awgn) => {
            let bit = SnrPoint::from_ebn0_linear(snr.ebn0_linear(), 1)?;
            Ok((theory::qpsk_awgn_ser(snr, true), theory::bpsk_awgn_ber(&bit)))
        }
        (Modulation::Qpsk, Channel::Rayleigh) => {
            let bit = SnrPoint::from_ebn0_linear(snr.ebn0_linear(), 1)?;
            Ok((theory::mqam_rayleigh_ser(4, es)?, theory::bpsk_rayleigh_ber(&bit)))
        }
        (Modulation::Qam16 | Modulation::Qam64, Channel::Awgn) => {
            let m = modulation.scheme().order();
            Ok((theory::mqam_awgn_ser(m, snr)?, theory::mqam_awgn_ber(m, snr)?))
        }
        (Modulation::Qam16 | Modulation::Qam64, Channel::Rayleigh) => {
            let ser = theory::mqam_rayleigh_ser(modulation.scheme().order(), es)?;
            Ok((ser, ser / q))
        }
    }
}

/// Conditional AWGN (SER, BER) at symbol SNR `g`, through erfc.
fn conditional(modulation: Modulation, g: f64) -> (f64, f64) {
    match modulation {
        Modulation::Bpsk => {
            let p = 0.5 * erfc(g.sqrt());
            (p, p)
        }
        Modulation::Pam4 => {
            let ser = 0.75 * erfc((g / 5.0).sqrt());
            (ser, ser / 2.0)
        }
        Modulation::Qpsk => {
            let e = erfc((0.5 * g).sqrt());
            (e - 0.25 * e * e, 0.5 * e)
        }
        Modulation::Qam16 | Modulation::Qam64 => {
            let m = modulation.scheme().order() as f64;
            let c = 1.0 - 1.0 / m.sqrt();
            let e = erfc((1.5 * g / (m - 1.0)).sqrt());
            let ser = 2.0 * c * e - c * c * e * e;
            (ser, ser / m.log2())
        }
    }
}

/// (SER, BER) by quadrature. AWGN goes through the Craig forms; Rayleigh
/// averages the conditional error rate over the exponential SNR density.
pub(crate) fn oracle_point(
    modulation: Modulation,
    channel: Channel,
    snr: &SnrPoint,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    let es = snr.esn0_linear();
    match channel {
        Channel::Awgn => match modulation {
            Modulation::Bpsk => {
                let p = q_craig((2.0 * es).sqrt(), spec)?;
                Ok((p, p))
            }
            Modulation::Pam4 => {
                let ser = 1.5 * q_craig((0.4 * es).sqrt(), spec)?;
                Ok((ser, ser / 2.0))
            }
            Modulation::Qpsk | Modulation::Qam16 | Modulation::Qam64 => {
                let m = modulation.scheme().order() as f64;
                let c = 1.0 - 1.0 / m.sqrt();
                let x = (3.0 * es / (m - 1.0)).sqrt();
                let (qx, q2x) = (q_craig(x, spec)?, q_squared_craig(x, spec)?);
                let ser = 4.0 * c * qx - 4.0 * c * c * q2x;
                let ber = if modulation == Modulation::Qpsk {
                    qx
                } else {
                    ser / m.log2()
                };
                Ok((ser, ber))
            }
        },
        Channel::Rayleigh => match modulation {
            Modulation::Bpsk | Modulation::Pam4 => {
                let ser = fading_average(|g| conditional(modulation, g).0, es, spec)?;
                let ber = fading_average(|g| conditional(modulation, g).1, es, spec)?;
                Ok((ser, ber))
            }
            Modulation::Qpsk | Modulation::Qam16 | Modulation::Qam64 => {
                let m = modulation.scheme().order();
                let ser = mqam_rayleigh_oracle(m, es, spec)?;
                let ber = fading_average(|g| conditional(modulation, g).1, es, spec)?;
                Ok((ser, ber))
            }
        },
    }
}

fn analytic_row(cfg: &SweepConfig, source: Source, snr: &SnrPoint, (ser, ber): (f64, f64)) -> Row {
    Row {
        modulation: cfg.modulation.name().to_string(),
        channel: cfg.channel.kind().to_string(),
        source: source.name().to_string(),
        ebn0_db: snr.ebn0_db(),
        esn0_db: snr.esn0_db(),
        ser,
        ber,
        ci95_ser: None,
        ci95_ber: None,
        symbols: None,
        errors: None,
        seed: cfg.seed,
    }
}

fn sim_row(cfg: &SweepConfig, r: &MonteCarloResult) -> Row {
    Row {
        modulation: cfg.modulation.name().to_string(),
        channel: cfg.channel.kind().to_string(),
        source: Source::Sim.name().to_string(),
        ebn0_db: r.snr.ebn0_db(),
        esn0_db: r.snr.esn0_db(),
        ser: r.ser_hat,
        ber: r.ber_hat,
        ci95_ser: Some(r.ci95_ser),
        ci95_ber: Some(r.ci95_ber),
        symbols: Some(r.counts.symbols),
        errors: Some(r.counts.symbol_errors),
        seed: r.seed,
    }
}

/// Rows ordered by grid point, then by the configured source order.
pub fn evaluate_rows(cfg: &SweepConfig) -> std::result::Result<Vec<Row>, CliError> {
    let scheme = cfg.modulation.scheme();
    let q = scheme.bits_per_symbol();
    let grid = cfg
        .ebn0_db
        .points()
        .into_iter()
        .map(|db| SnrPoint::new(db, q))
        .collect::<Result<Vec<_>>>()?;
    let spec = QuadratureSpec::default();

    let mut columns: Vec<Vec<Row>> = Vec::with_capacity(cfg.sources.len());
    for &source in &cfg.sources {
        let column = match source {
            Source::Theory => grid
                .iter()
                .map(|s| {
                    Ok(analytic_row(
                        cfg,
                        source,
                        s,
                        theory_point(cfg.modulation, cfg.channel, s)?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?,
            Source::Oracle => grid
                .iter()
                .map(|s| {
                    Ok(analytic_row(
                        cfg,
                        source,
                        s,
                        oracle_point(cfg.modulation, cfg.channel, s, &spec)?,
                    ))
                })
                .collect::<Result<Vec<_>>>()?,
            Source::Sim => {
                let c = Constellation::build(scheme)?;
                montecarlo::sweep(&c, cfg.channel.kind(), &grid, &cfg.rule, cfg.seed, cfg.workers)?
                    .iter()
                    .map(|r| sim_row(cfg, r))
                    .collect()
            }
        };
        columns.push(column);
    }

    Ok((0..grid.len())
        .flat_map(|i| columns.iter().map(move |col| col[i].clone()))
        .collect())
}
