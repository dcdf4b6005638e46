//! Per-realization rate terms, Monte Carlo expectations, and spectral
//! efficiency assembly.
//!
//! The trained-receiver rate keeps the realized gain estimates inside the
//! log and the closed-form error variance in the denominator; the
//! expectation over channel, estimate, and pilot noise is taken outside by
//! Monte Carlo.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{draw_channel, uplink_estimate};
use crate::dl_training::{effective_gains, estimate_gains, synth_received_stat};
use crate::error::{Result, SimError};
use crate::moments::moments_for;
use crate::params::{PrecoderKind, SystemParams};
use crate::precoding::build_precoder;
use crate::rng::RngStream;
use crate::stats::neumaier_sum;

/// What the receiver knows when decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RateMode {
    BftMrt,
    BftZf,
    GenieMrt,
    GenieZf,
}

impl RateMode {
    pub fn precoder(&self) -> PrecoderKind {
        match self {
            RateMode::BftMrt | RateMode::GenieMrt => PrecoderKind::Mrt,
            RateMode::BftZf | RateMode::GenieZf => PrecoderKind::Zf,
        }
    }

    pub fn is_genie(&self) -> bool {
        matches!(self, RateMode::GenieMrt | RateMode::GenieZf)
    }

    pub fn label(&self) -> &'static str {
        match self {
            RateMode::BftMrt => "bft_mrt",
            RateMode::BftZf => "bft_zf",
            RateMode::GenieMrt => "genie_mrt",
            RateMode::GenieZf => "genie_zf",
        }
    }
}

/// Monte Carlo rate estimate per user, bits per channel use.
#[derive(Debug, Clone)]
pub struct RateResult {
    pub per_user_rate: Vec<f64>,
    pub standard_error: Vec<f64>,
    /// Mean and standard error of the per-trial sum rate.
    pub sum_rate: f64,
    pub sum_rate_se: f64,
    pub n_trials: usize,
    pub mode: RateMode,
}

/// Spectral efficiency: prelog-weighted sum rate.
#[derive(Debug, Clone, Copy)]
pub struct SpectralEfficiency {
    pub value: f64,
    pub std_error: f64,
    pub prelog: f64,
}

/// Trained-receiver rate term for user k:
/// log2(1 + p_d |a_hat_kk|^2 / (p_d eps_var_sum + p_d sum_{i!=k} |a_hat_ki|^2 + 1)).
///
/// `eps_var_sum` is K times the per-element error variance of the active
/// precoder's downlink estimator.
pub fn rate_term_bft(
    a_hat: &[Complex64],
    eps_var_sum: f64,
    k: usize,
    params: &SystemParams,
) -> Result<f64> {
    if k >= a_hat.len() {
        return Err(SimError::InvalidParams(format!(
            "user index {k} out of range for {} gains",
            a_hat.len()
        )));
    }
    let p_d = params.p_d;
    let interference: f64 = a_hat
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != k)
        .map(|(_, a)| a.norm_sqr())
        .sum();
    let sinr = p_d * a_hat[k].norm_sqr() / (p_d * eps_var_sum + p_d * interference + 1.0);
    Ok((1.0 + sinr).log2())
}

/// Genie rate term: the user knows its gains exactly.
pub fn rate_term_genie(a_true: &[Complex64], k: usize, params: &SystemParams) -> f64 {
    let p_d = params.p_d;
    let interference: f64 = a_true
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != k)
        .map(|(_, a)| a.norm_sqr())
        .sum();
    let sinr = p_d * a_true[k].norm_sqr() / (p_d * interference + 1.0);
    (1.0 + sinr).log2()
}

/// One trial of the full pipeline: channel draw, uplink estimate, precoder,
/// pilot synthesis, gain estimation, rate terms for every user.
fn run_trial(mode: RateMode, params: &SystemParams, stream: RngStream) -> Result<Vec<f64>> {
    let mut rng = stream.rng();
    let kind = mode.precoder();
    let h = draw_channel(&mut rng, params)?;
    let pair = uplink_estimate(&mut rng, &h, params)?;
    let w = build_precoder(kind, &pair.h_hat, params)?;

    if mode.is_genie() {
        let a = effective_gains(&h, &w.w)?;
        Ok((0..params.k)
            .map(|k| rate_term_genie(a.row(k), k, params))
            .collect())
    } else {
        let y = synth_received_stat(&mut rng, &h, &w.w, params)?;
        let eps_var_sum = params.k as f64 * moments_for(kind, params)?.eps_var;
        (0..params.k)
            .map(|k| {
                let a_hat = estimate_gains(kind, y.row(k), k, params)?;
                rate_term_bft(&a_hat, eps_var_sum, k, params)
            })
            .collect()
    }
}

/// Monte Carlo expectation of the per-user rate.
///
/// Trial t uses stream (master_seed, t); trials run in parallel but
/// accumulate in trial order, so the result is identical for any thread
/// count.
pub fn monte_carlo_rate(
    mode: RateMode,
    params: &SystemParams,
    n_trials: usize,
    master_seed: u64,
) -> Result<RateResult> {
    params.validate()?;
    if mode.precoder() == PrecoderKind::Zf {
        params.require_zf()?;
    }
    if n_trials < 100 {
        return Err(SimError::InvalidParams(format!(
            "n_trials must be >= 100, got {n_trials}"
        )));
    }

    let samples: Vec<Vec<f64>> = (0..n_trials)
        .into_par_iter()
        .map(|t| run_trial(mode, params, RngStream::new(master_seed, t as u64)))
        .collect::<Result<_>>()?;

    let k = params.k;
    let nf = n_trials as f64;
    let mut per_user_rate = Vec::with_capacity(k);
    let mut standard_error = Vec::with_capacity(k);
    for u in 0..k {
        let mean = neumaier_sum(samples.iter().map(|s| s[u])) / nf;
        let var = neumaier_sum(samples.iter().map(|s| (s[u] - mean).powi(2))) / (nf - 1.0);
        per_user_rate.push(mean);
        standard_error.push((var / nf).sqrt());
    }
    let sums: Vec<f64> = samples
        .iter()
        .map(|s| neumaier_sum(s.iter().copied()))
        .collect();
    let sum_rate = neumaier_sum(sums.iter().copied()) / nf;
    let sum_var = neumaier_sum(sums.iter().map(|s| (s - sum_rate).powi(2))) / (nf - 1.0);

    Ok(RateResult {
        per_user_rate,
        standard_error,
        sum_rate,
        sum_rate_se: (sum_var / nf).sqrt(),
        n_trials,
        mode,
    })
}

/// Spectral efficiency of a trained (or genie) run:
/// ((T - tau_u - tau_d)/T) * sum_k R_k.
pub fn se_bft(result: &RateResult, params: &SystemParams) -> Result<SpectralEfficiency> {
    if params.t <= params.tau_u + params.tau_d {
        return Err(SimError::InvalidParams(format!(
            "T ({}) must exceed tau_u + tau_d ({})",
            params.t,
            params.tau_u + params.tau_d
        )));
    }
    let prelog = params.prelog_bft();
    Ok(SpectralEfficiency {
        value: prelog * result.sum_rate,
        std_error: prelog * result.sum_rate_se,
        prelog,
    })
}

/// Closed-form spectral efficiency without beamforming training, where the
/// receiver decodes with the mean gain:
/// MRT: ((T - tau_u)/T) K log2(1 + (M/K) tau_u p_u p_d / ((p_d + 1)(tau_u p_u + 1)))
/// ZF:  ((T - tau_u)/T) K log2(1 + ((M-K)/K) tau_u p_u p_d / (tau_u p_u + p_d + 1)).
pub fn se_baseline(kind: PrecoderKind, params: &SystemParams) -> Result<SpectralEfficiency> {
    params.validate()?;
    let tp = params.tau_u_p_u();
    let p_d = params.p_d;
    let k = params.k as f64;
    let prelog = params.prelog_baseline();
    let sinr = match kind {
        PrecoderKind::Mrt => params.m as f64 / k * tp * p_d / ((p_d + 1.0) * (tp + 1.0)),
        PrecoderKind::Zf => {
            params.require_zf()?;
            (params.m - params.k) as f64 / k * tp * p_d / (tp + p_d + 1.0)
        }
    };
    Ok(SpectralEfficiency {
        value: prelog * k * (1.0 + sinr).log2(),
        std_error: 0.0,
        prelog,
    })
}
