//! Downlink beamforming training: precoded pilots and per-element MMSE
//! estimation of the effective gains a_ki = h_k^T w_i.
//!
//! The production path synthesizes the post-projection sufficient statistic
//! directly (projecting the received pilot block onto the pilot rows leaves
//! white noise, so nothing is lost). The explicit pilot-matrix path exists
//! for the validation suite only.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Result, SimError};
use crate::matrix::ComplexMatrix;
use crate::moments::{moments_mrt, moments_zf, GainMoments};
use crate::params::{PrecoderKind, SystemParams};
use crate::rng::draw_cn_matrix;

/// Row-orthonormal K x tau_d pilot matrix, identity embedding.
#[derive(Debug, Clone)]
pub struct PilotMatrix {
    pub phi: ComplexMatrix,
    /// Amplitude sqrt(tau_d p_d) applied to the pilots.
    pub scale: f64,
}

/// Build Phi with row k equal to the k-th standard basis row of length
/// tau_d, so Phi Phi^H = I_K exactly.
pub fn build_phi(k: usize, tau_d: usize, params: &SystemParams) -> Result<PilotMatrix> {
    if tau_d < k {
        return Err(SimError::InvalidParams(format!(
            "tau_d ({tau_d}) must be >= K ({k})"
        )));
    }
    let mut phi = ComplexMatrix::zeros(k, tau_d);
    for i in 0..k {
        phi.set(i, i, Complex64::new(1.0, 0.0));
    }
    Ok(PilotMatrix {
        phi,
        scale: params.tau_d_p_d().sqrt(),
    })
}

/// True effective gain matrix A = H^T W (K x K); A[k][i] = a_ki.
pub fn effective_gains(h: &ComplexMatrix, w: &ComplexMatrix) -> Result<ComplexMatrix> {
    h.transpose().matmul(w)
}

/// Received pilot statistic with caller-supplied noise (test hook):
/// Y_tilde^T = sqrt(tau_d p_d) H^T W + N_tilde^T.
pub fn synth_received_stat_with_noise(
    h: &ComplexMatrix,
    w: &ComplexMatrix,
    noise: &ComplexMatrix,
    params: &SystemParams,
) -> Result<ComplexMatrix> {
    effective_gains(h, w)?
        .scale_re(params.tau_d_p_d().sqrt())
        .add(noise)
}

/// Received pilot statistic with fresh CN(0,1) noise. Row k is user k's
/// length-K observation.
pub fn synth_received_stat<R: Rng>(
    rng: &mut R,
    h: &ComplexMatrix,
    w: &ComplexMatrix,
    params: &SystemParams,
) -> Result<ComplexMatrix> {
    let k = w.cols();
    let noise = draw_cn_matrix(rng, h.cols(), k, 1.0)?;
    synth_received_stat_with_noise(h, w, &noise, params)
}

/// Generic per-element MMSE estimate from prior mean and variance:
/// a_hat = mean + (sqrt(tau_d p_d) var / (tau_d p_d var + 1)) (y - sqrt(tau_d p_d) mean).
pub fn mmse_gain_generic(
    y: Complex64,
    mean: Complex64,
    var: f64,
    params: &SystemParams,
) -> Result<Complex64> {
    if var <= 0.0 {
        return Err(SimError::NonPositiveVariance(var));
    }
    let tdpd = params.tau_d_p_d();
    let c = tdpd.sqrt();
    let gain = c * var / (tdpd * var + 1.0);
    Ok(mean + gain * (y - c * mean))
}

/// MRT closed form:
/// a_hat_ki = (sqrt(tau_d p_d)/(tau_d p_d + K)) y
///          + (K/(tau_d p_d + K)) sqrt(tau_u p_u M / (K (tau_u p_u + 1))) delta_ki.
pub fn mmse_gain_mrt(y: Complex64, diagonal: bool, params: &SystemParams) -> Complex64 {
    let tdpd = params.tau_d_p_d();
    let k = params.k as f64;
    let denom = tdpd + k;
    let mut est = tdpd.sqrt() / denom * y;
    if diagonal {
        est += k / denom * moments_mrt(params).mean_diag;
    }
    est
}

/// ZF closed form:
/// a_hat_ki = (sqrt(tau_d p_d)/(tau_d p_d + K(tau_u p_u + 1))) y
///          + (sqrt(K (M-K) tau_u p_u (tau_u p_u + 1))/(tau_d p_d + K(tau_u p_u + 1))) delta_ki.
pub fn mmse_gain_zf(y: Complex64, diagonal: bool, params: &SystemParams) -> Result<Complex64> {
    params.require_zf()?;
    let tdpd = params.tau_d_p_d();
    let tp = params.tau_u_p_u();
    let k = params.k as f64;
    let denom = tdpd + k * (tp + 1.0);
    let mut est = tdpd.sqrt() / denom * y;
    if diagonal {
        est += (k * (params.m - params.k) as f64 * tp * (tp + 1.0)).sqrt() / denom;
    }
    Ok(est)
}

/// Estimate all K gains of user k from its observation row.
pub fn estimate_gains(
    kind: PrecoderKind,
    y_row: &[Complex64],
    user: usize,
    params: &SystemParams,
) -> Result<Vec<Complex64>> {
    y_row
        .iter()
        .enumerate()
        .map(|(i, &y)| match kind {
            PrecoderKind::Mrt => Ok(mmse_gain_mrt(y, i == user, params)),
            PrecoderKind::Zf => mmse_gain_zf(y, i == user, params),
        })
        .collect()
}

/// Prior moments of a_ki for the generic estimator, as user k applies them.
pub fn prior_for(kind: PrecoderKind, params: &SystemParams) -> Result<GainMoments> {
    match kind {
        PrecoderKind::Mrt => Ok(moments_mrt(params)),
        PrecoderKind::Zf => moments_zf(params),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{draw_channel, uplink_estimate};
    use crate::precoding::build_precoder;
    use crate::rng::{draw_cn_matrix, RngStream};
    use crate::stats::empirical_complex_moments;

    fn params() -> SystemParams {
        SystemParams {
            m: 50,
            k: 5,
            t: 200,
            tau_u: 5,
            tau_d: 5,
            p_u: 1.0,
            p_d: 100.0,
        }
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn phi_is_identity_embedding() {
        let p = params();
        let pm = build_phi(2, 3, &p).unwrap();
        assert_eq!(pm.phi.get(0, 0), c(1.0, 0.0));
        assert_eq!(pm.phi.get(1, 1), c(1.0, 0.0));
        assert_eq!(pm.phi.get(0, 2), c(0.0, 0.0));
        let gram = pm.phi.matmul(&pm.phi.conj_transpose()).unwrap();
        assert_eq!(gram, ComplexMatrix::identity(2));

        let single = build_phi(1, 1, &p).unwrap();
        assert_eq!(single.phi.get(0, 0), c(1.0, 0.0));

        assert!(build_phi(3, 2, &p).is_err());
    }

    #[test]
    fn noiseless_statistic_is_scaled_gain() {
        let p = params();
        let mut rng = RngStream::new(31, 0).rng();
        let h = draw_channel(&mut rng, &p).unwrap();
        let cp = uplink_estimate(&mut rng, &h, &p).unwrap();
        let w = build_precoder(PrecoderKind::Mrt, &cp.h_hat, &p).unwrap();
        let zero = ComplexMatrix::zeros(p.k, p.k);
        let y = synth_received_stat_with_noise(&h, &w.w, &zero, &p).unwrap();
        let a = effective_gains(&h, &w.w).unwrap().scale_re(p.tau_d_p_d().sqrt());
        assert!(y.sub(&a).unwrap().frob_norm_sq() < 1e-24);
    }

    #[test]
    fn full_pilot_path_matches_direct_statistic() {
        // explicit pilot-matrix path, projected back, with the same noise
        let p = params();
        let mut rng = RngStream::new(32, 0).rng();
        let h = draw_channel(&mut rng, &p).unwrap();
        let cp = uplink_estimate(&mut rng, &h, &p).unwrap();
        let w = build_precoder(PrecoderKind::Zf, &cp.h_hat, &p).unwrap();
        let pilot = build_phi(p.k, p.tau_d, &p).unwrap();
        let n_full = draw_cn_matrix(&mut rng, p.k, p.tau_d, 1.0).unwrap();

        // Y_p^T = scale H^T W Phi + N_p^T, then project by Phi^H
        let y_full = effective_gains(&h, &w.w)
            .unwrap()
            .scale_re(pilot.scale)
            .matmul(&pilot.phi)
            .unwrap()
            .add(&n_full)
            .unwrap();
        let projected = y_full.matmul(&pilot.phi.conj_transpose()).unwrap();

        let n_proj = n_full.matmul(&pilot.phi.conj_transpose()).unwrap();
        let direct = synth_received_stat_with_noise(&h, &w.w, &n_proj, &p).unwrap();
        let max_dev = projected
            .sub(&direct)
            .unwrap()
            .entries()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(max_dev < 1e-12);
    }

    #[test]
    fn pilot_noise_is_unit_variance() {
        let p = params();
        let mut residuals = Vec::new();
        for s in 0..4000u64 {
            let mut rng = RngStream::new(33, s).rng();
            let h = draw_channel(&mut rng, &p).unwrap();
            let cp = uplink_estimate(&mut rng, &h, &p).unwrap();
            let w = build_precoder(PrecoderKind::Mrt, &cp.h_hat, &p).unwrap();
            let y = synth_received_stat(&mut rng, &h, &w.w, &p).unwrap();
            let a = effective_gains(&h, &w.w).unwrap().scale_re(p.tau_d_p_d().sqrt());
            residuals.extend_from_slice(y.sub(&a).unwrap().entries());
        }
        let m = empirical_complex_moments(&residuals).unwrap();
        assert!((m.var - 1.0).abs() < 3.0 * m.se_var, "noise var {}", m.var);
    }

    #[test]
    fn generic_prior_mean_fixed_point() {
        let p = params();
        let mean = c(1.3, -0.4);
        let y = p.tau_d_p_d().sqrt() * mean;
        let est = mmse_gain_generic(y, mean, 0.7, &p).unwrap();
        assert!((est - mean).norm() < 1e-12);
    }

    #[test]
    fn generic_no_prior_limit() {
        let p = params();
        let y = c(2.0, 1.0);
        let est = mmse_gain_generic(y, c(0.0, 0.0), 1e12, &p).unwrap();
        let expected = y / p.tau_d_p_d().sqrt();
        assert!((est - expected).norm() / expected.norm() < 1e-6);
    }

    #[test]
    fn generic_rejects_bad_variance() {
        let p = params();
        assert!(mmse_gain_generic(c(1.0, 0.0), c(0.0, 0.0), 0.0, &p).is_err());
    }

    #[test]
    fn mrt_offdiag_matches_generic() {
        let p = params();
        let y = c(0.7, -1.1);
        let closed = mmse_gain_mrt(y, false, &p);
        let expected = p.tau_d_p_d().sqrt() / (p.tau_d_p_d() + p.k as f64) * y;
        assert!((closed - expected).norm() < 1e-12);
        let generic = mmse_gain_generic(y, c(0.0, 0.0), 1.0 / p.k as f64, &p).unwrap();
        assert!((closed - generic).norm() < 1e-12);
    }

    #[test]
    fn mrt_diag_reference_value() {
        // y = 0, delta = 1: (K/(tau_d p_d + K)) * prior mean = (5/505)*2.88675
        let p = params();
        let est = mmse_gain_mrt(c(0.0, 0.0), true, &p);
        assert!((est.re - 0.028581696494536).abs() < 1e-6, "got {}", est.re);
        assert!(est.im.abs() < 1e-15);
        assert_eq!(mmse_gain_mrt(c(0.0, 0.0), false, &p), c(0.0, 0.0));
    }

    #[test]
    fn zf_diag_reference_value() {
        // y = 0, delta = 1: sqrt(6750)/530
        let p = params();
        let est = mmse_gain_zf(c(0.0, 0.0), true, &p).unwrap();
        assert!((est.re - 6750f64.sqrt() / 530.0).abs() < 1e-12);
        assert_eq!(mmse_gain_zf(c(0.0, 0.0), false, &p).unwrap(), c(0.0, 0.0));
        let mut bad = params();
        bad.m = 5;
        assert!(mmse_gain_zf(c(1.0, 0.0), true, &bad).is_err());
    }

    #[test]
    fn closed_forms_match_generic_with_oracle_moments() {
        let p = params();
        let mut rng = RngStream::new(34, 0).rng();
        for _ in 0..1000 {
            let y = crate::rng::draw_cn(&mut rng, 4.0);
            for diagonal in [false, true] {
                let mrt_prior = moments_mrt(&p);
                let mean = if diagonal { c(mrt_prior.mean_diag, 0.0) } else { c(0.0, 0.0) };
                let generic = mmse_gain_generic(y, mean, mrt_prior.var, &p).unwrap();
                let closed = mmse_gain_mrt(y, diagonal, &p);
                assert!((closed - generic).norm() <= 1e-12 * generic.norm().max(1.0));

                let zf_prior = moments_zf(&p).unwrap();
                let mean = if diagonal { c(zf_prior.mean_diag, 0.0) } else { c(0.0, 0.0) };
                let generic = mmse_gain_generic(y, mean, zf_prior.var, &p).unwrap();
                let closed = mmse_gain_zf(y, diagonal, &p).unwrap();
                assert!((closed - generic).norm() <= 1e-12 * generic.norm().max(1.0));
            }
        }
    }

    #[test]
    fn high_power_estimates_converge_to_truth() {
        let mut p = params();
        p.p_d = 1e6;
        let mut sq_err = Vec::new();
        for s in 0..2000u64 {
            let mut rng = RngStream::new(35, s).rng();
            let h = draw_channel(&mut rng, &p).unwrap();
            let cp = uplink_estimate(&mut rng, &h, &p).unwrap();
            let w = build_precoder(PrecoderKind::Mrt, &cp.h_hat, &p).unwrap();
            let a = effective_gains(&h, &w.w).unwrap();
            let y = synth_received_stat(&mut rng, &h, &w.w, &p).unwrap();
            let est = estimate_gains(PrecoderKind::Mrt, y.row(0), 0, &p).unwrap();
            sq_err.push((est[0] - a.get(0, 0)).norm_sqr());
        }
        let mse = crate::stats::neumaier_sum(sq_err.iter().copied()) / sq_err.len() as f64;
        assert!(mse < 1e-4, "mse {mse}");
    }
}
