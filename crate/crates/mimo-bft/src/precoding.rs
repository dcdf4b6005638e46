//! MRT and ZF precoders with expectation-based power normalization.
//!
//! The normalization constants come from E{tr(W W^H)} = 1 taken over the
//! channel estimate's distribution, so the power constraint holds in
//! expectation, not per realization.

use crate::error::Result;
use crate::matrix::ComplexMatrix;
use crate::params::{PrecoderKind, SystemParams};

/// Precoding matrix with the constant used to build it.
#[derive(Debug, Clone)]
pub struct PrecodingMatrix {
    pub w: ComplexMatrix,
    pub alpha: f64,
    pub kind: PrecoderKind,
}

/// alpha_MRT = sqrt((tau_u p_u + 1) / (M K tau_u p_u)).
pub fn alpha_mrt(params: &SystemParams) -> f64 {
    let tp = params.tau_u_p_u();
    ((tp + 1.0) / (params.m as f64 * params.k as f64 * tp)).sqrt()
}

/// alpha_ZF = sqrt((M - K) tau_u p_u / (K (tau_u p_u + 1))).
pub fn alpha_zf(params: &SystemParams) -> Result<f64> {
    params.require_zf()?;
    let tp = params.tau_u_p_u();
    Ok(((params.m - params.k) as f64 * tp / (params.k as f64 * (tp + 1.0))).sqrt())
}

/// Build W from the channel estimate.
///
/// MRT: W = alpha_MRT conj(H_hat).
/// ZF:  W = alpha_ZF conj(H_hat) (H_hat^T conj(H_hat))^{-1}.
pub fn build_precoder(
    kind: PrecoderKind,
    h_hat: &ComplexMatrix,
    params: &SystemParams,
) -> Result<PrecodingMatrix> {
    match kind {
        PrecoderKind::Mrt => {
            let alpha = alpha_mrt(params);
            Ok(PrecodingMatrix {
                w: h_hat.conj().scale_re(alpha),
                alpha,
                kind,
            })
        }
        PrecoderKind::Zf => {
            let alpha = alpha_zf(params)?;
            let h_conj = h_hat.conj();
            let gram = h_hat.transpose().matmul(&h_conj)?;
            let w = h_conj.matmul(&gram.invert()?)?.scale_re(alpha);
            Ok(PrecodingMatrix { w, alpha, kind })
        }
    }
}
