//! Link-level Monte Carlo simulator for the massive MU-MIMO downlink with
//! TDD uplink training, MRT/ZF precoding, and downlink beamforming
//! training.
//!
//! The base station estimates the channel from uplink pilots, precodes
//! data and a short downlink pilot block, and each user MMSE-estimates its
//! effective scalar gains from the precoded pilots. The crate provides the
//! closed-form moment oracle for those gains, per-realization rate terms,
//! Monte Carlo rate expectations, closed-form baselines, and a harness
//! that reproduces the reference spectral-efficiency curves as CSV.

pub mod channel;
pub mod dl_training;
pub mod error;
pub mod harness;
pub mod matrix;
pub mod moments;
pub mod params;
pub mod precoding;
pub mod rates;
pub mod rng;
pub mod stats;

pub use error::{Result, SimError};
pub use matrix::ComplexMatrix;
pub use params::{PrecoderKind, SystemParams};
pub use rates::{RateMode, RateResult, SpectralEfficiency};
pub use rng::RngStream;
