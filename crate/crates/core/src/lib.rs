//! Error-rate laboratory for BPSK, M-PAM and square M-QAM.
//!
//! Closed-form theory, quadrature oracles and a seeded Monte Carlo simulator
//! share one constellation, channel and detector model so their curves can be
//! compared point by point.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Reference constants keep all their published digits.
#![allow(clippy::excessive_precision)]

pub mod channel;
pub mod cli;
pub mod constellation;
pub mod detector;
pub mod error;
pub mod montecarlo;
pub mod oracle;
pub mod quadrature;
pub mod rng;
pub mod specfun;
pub mod theory;

pub use channel::{ChannelKind, SnrPoint};
pub use constellation::{Constellation, Scheme};
pub use detector::ErrorCount;
pub use error::{Error, Result};
pub use montecarlo::{MonteCarloResult, StoppingRule};
pub use quadrature::QuadratureSpec;
