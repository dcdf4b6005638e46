//! Closed-form moments of the effective gains a_ki = h_k^T w_i.
//!
//! These are the priors the users apply during downlink gain estimation and
//! the oracle the Monte Carlo validation compares against. Intermediate
//! quantities of the derivations are exposed so each step can be checked
//! independently, not just the end results.

use crate::error::Result;
use crate::params::{PrecoderKind, SystemParams};
use crate::precoding::{alpha_mrt, alpha_zf};

/// First and second moments of the effective gains, plus the downlink
/// estimation error variance, for one precoder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainMoments {
    /// E{a_kk}, real and positive.
    pub mean_diag: f64,
    /// E{a_ki} for i != k; zero for both precoders.
    pub mean_offdiag: f64,
    /// Var(a_ki), identical for all (k, i) within a precoder.
    pub var: f64,
    /// E{|eps_ki|^2} of the per-element downlink MMSE estimate.
    pub eps_var: f64,
}

/// MRT moments: mean_diag = sqrt(tau_u p_u M / (K (tau_u p_u + 1))),
/// var = 1/K, eps_var = 1/(tau_d p_d + K).
pub fn moments_mrt(params: &SystemParams) -> GainMoments {
    let tp = params.tau_u_p_u();
    let k = params.k as f64;
    GainMoments {
        mean_diag: (tp * params.m as f64 / (k * (tp + 1.0))).sqrt(),
        mean_offdiag: 0.0,
        var: 1.0 / k,
        eps_var: 1.0 / (params.tau_d_p_d() + k),
    }
}

/// ZF moments: mean_diag = alpha_ZF, var = 1/(K (tau_u p_u + 1)),
/// eps_var = 1/(tau_d p_d + K (tau_u p_u + 1)).
pub fn moments_zf(params: &SystemParams) -> Result<GainMoments> {
    let alpha = alpha_zf(params)?;
    let tp = params.tau_u_p_u();
    let k = params.k as f64;
    Ok(GainMoments {
        mean_diag: alpha,
        mean_offdiag: 0.0,
        var: 1.0 / (k * (tp + 1.0)),
        eps_var: 1.0 / (params.tau_d_p_d() + k * (tp + 1.0)),
    })
}

pub fn moments_for(kind: PrecoderKind, params: &SystemParams) -> Result<GainMoments> {
    match kind {
        PrecoderKind::Mrt => Ok(moments_mrt(params)),
        PrecoderKind::Zf => moments_zf(params),
    }
}

/// E{|a_kk|^2} for MRT from the fourth-moment route:
/// alpha^2 (tp/(tp+1))^2 M (M+1) + alpha^2 (tp/(tp+1)^2) M.
///
/// Subtracting |E{a_kk}|^2 must reproduce Var(a_kk) = 1/K; the validation
/// suite checks the two routes against each other.
pub fn mrt_diag_second_moment(params: &SystemParams) -> f64 {
    let tp = params.tau_u_p_u();
    let m = params.m as f64;
    let a2 = alpha_mrt(params).powi(2);
    a2 * (tp / (tp + 1.0)).powi(2) * m * (m + 1.0) + a2 * tp / (tp + 1.0).powi(2) * m
}

/// E{tr[(H_hat^T conj(H_hat))^{-1}]} for the ZF Gram matrix:
/// K / ((M - K) est_var), est_var = tau_u p_u / (tau_u p_u + 1).
pub fn expected_trace_gram_inverse(params: &SystemParams) -> Result<f64> {
    params.require_zf()?;
    let tp = params.tau_u_p_u();
    let est_var = tp / (tp + 1.0);
    Ok(params.k as f64 / ((params.m - params.k) as f64 * est_var))
}
