//! True channel generation and uplink MMSE estimation.
//!
//! The estimate is always materialized from the estimator equation itself
//! (scale the true channel, add scaled fresh noise), not sampled from the
//! estimate's marginal distribution.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Result, SimError};
use crate::matrix::ComplexMatrix;
use crate::params::SystemParams;
use crate::rng::draw_cn_matrix;
use crate::stats::{empirical_cross_correlation, CrossCorrelation};

/// True channel together with its uplink MMSE estimate.
#[derive(Debug, Clone)]
pub struct ChannelPair {
    /// True M x K channel.
    pub h: ComplexMatrix,
    /// MMSE estimate of the channel.
    pub h_hat: ComplexMatrix,
    /// Per-entry variance of the estimate: tau_u p_u / (tau_u p_u + 1).
    pub est_var: f64,
    /// Per-entry variance of the error: 1 / (tau_u p_u + 1).
    pub err_var: f64,
}

impl ChannelPair {
    /// Estimation error E = H - H_hat.
    pub fn error(&self) -> ComplexMatrix {
        self.h.sub(&self.h_hat).expect("shapes match by construction")
    }
}

/// Per-entry variance of the uplink channel estimate.
pub fn estimate_variance(params: &SystemParams) -> f64 {
    let tp = params.tau_u_p_u();
    tp / (tp + 1.0)
}

/// Per-entry variance of the uplink estimation error.
pub fn error_variance(params: &SystemParams) -> f64 {
    1.0 / (params.tau_u_p_u() + 1.0)
}

/// Draw the M x K true channel, i.i.d. CN(0,1) entries.
pub fn draw_channel<R: Rng>(rng: &mut R, params: &SystemParams) -> Result<ComplexMatrix> {
    params.validate()?;
    draw_cn_matrix(rng, params.m, params.k, 1.0)
}

/// Form the uplink MMSE estimate of a given true channel:
/// H_hat = (tp/(tp+1)) H + (sqrt(tp)/(tp+1)) N_u, tp = tau_u p_u.
pub fn uplink_estimate<R: Rng>(
    rng: &mut R,
    h: &ComplexMatrix,
    params: &SystemParams,
) -> Result<ChannelPair> {
    let tp = params.tau_u_p_u();
    let n_u = draw_cn_matrix(rng, h.rows(), h.cols(), 1.0)?;
    let h_hat = h
        .scale_re(tp / (tp + 1.0))
        .add(&n_u.scale_re(tp.sqrt() / (tp + 1.0)))?;
    Ok(ChannelPair {
        h: h.clone(),
        h_hat,
        est_var: estimate_variance(params),
        err_var: error_variance(params),
    })
}

/// Empirical cross-correlation between paired estimate and error entries.
/// MMSE estimation makes the analytic value zero; the validation suite
/// checks a 3-SE band around it.
pub fn check_estimate_independence(
    pairs: &[(Complex64, Complex64)],
) -> Result<CrossCorrelation> {
    if pairs.len() < 10_000 {
        return Err(SimError::TooFewSamples {
            need: 10_000,
            got: pairs.len(),
        });
    }
    empirical_cross_correlation(pairs)
}
