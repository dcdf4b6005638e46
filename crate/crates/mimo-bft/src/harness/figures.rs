//! Canned experiments reproducing the reference spectral-efficiency curves.

use crate::error::{Result, SimError};
use crate::params::SystemParams;

use super::config::{CurveMode, CurvePoint, ExperimentConfig, SweepAxis};
use super::sweep::run_sweep;

/// Optional deviations from a figure's default grid.
#[derive(Debug, Clone, Default)]
pub struct FigureOverrides {
    pub snr_db: Option<Vec<f64>>,
    pub t_values: Option<Vec<f64>>,
    pub m_values: Option<Vec<usize>>,
    pub n_trials: Option<usize>,
}

fn default_snr_grid() -> Vec<f64> {
    vec![-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0]
}

fn default_t_grid() -> Vec<f64> {
    vec![15.0, 20.0, 30.0, 50.0, 100.0, 200.0, 400.0]
}

fn base_params(m: usize, k: usize, t: usize) -> SystemParams {
    // tau_u = tau_d = K and p_u = 0 dB throughout
    SystemParams {
        m,
        k,
        t,
        tau_u: k,
        tau_d: k,
        p_u: 1.0,
        p_d: 1.0,
    }
}

/// Run one named figure. Curves from different antenna counts are tagged
/// by suffixing the mode label with `_M<count>`.
pub fn run_figure(
    name: &str,
    overrides: &FigureOverrides,
    master_seed: u64,
) -> Result<Vec<CurvePoint>> {
    let n_trials = overrides.n_trials.unwrap_or(10_000);
    let snr = overrides.snr_db.clone().unwrap_or_else(default_snr_grid);
    let t_grid = overrides.t_values.clone().unwrap_or_else(default_t_grid);

    let (m_defaults, k, axis, modes): (Vec<usize>, usize, SweepAxis, Vec<CurveMode>) = match name {
        // single user, SNR sweep, trained vs baseline (MRT = ZF at K = 1)
        "fig2" => (
            vec![10, 50],
            1,
            SweepAxis::SnrDb,
            vec![CurveMode::BftMrt, CurveMode::BaselineMrt],
        ),
        // five users, SNR sweep, both precoders
        "fig3" => (
            vec![10, 50],
            5,
            SweepAxis::SnrDb,
            vec![
                CurveMode::BftMrt,
                CurveMode::BftZf,
                CurveMode::BaselineMrt,
                CurveMode::BaselineZf,
            ],
        ),
        // coherence-interval sweep at 20 dB
        "fig4" => (
            vec![50],
            5,
            SweepAxis::CoherenceT,
            vec![
                CurveMode::BftMrt,
                CurveMode::BftZf,
                CurveMode::BaselineMrt,
                CurveMode::BaselineZf,
            ],
        ),
        // trained receiver vs genie, SNR sweep
        "fig5" => (
            vec![10, 50],
            5,
            SweepAxis::SnrDb,
            vec![
                CurveMode::BftMrt,
                CurveMode::BftZf,
                CurveMode::GenieMrt,
                CurveMode::GenieZf,
            ],
        ),
        other => {
            return Err(SimError::InvalidConfig(format!(
                "unknown figure '{other}', expected fig2|fig3|fig4|fig5"
            )))
        }
    };

    let m_values = overrides.m_values.clone().unwrap_or(m_defaults);
    let mut points = Vec::new();
    for m in m_values {
        let mut params = base_params(m, k, 200);
        let sweep_values = match axis {
            SweepAxis::SnrDb => snr.clone(),
            SweepAxis::CoherenceT => {
                params.p_d = 100.0; // 20 dB operating point for the T sweep
                t_grid.clone()
            }
            SweepAxis::AntennasM => unreachable!("no figure sweeps antennas"),
        };
        let config = ExperimentConfig {
            params,
            modes: modes.clone(),
            sweep_axis: axis,
            sweep_values,
            n_trials,
            master_seed,
            output_path: None,
        };
        let mut batch = run_sweep(&config)?;
        for p in &mut batch {
            p.mode = format!("{}_M{}", p.mode, m);
        }
        points.extend(batch);
    }
    Ok(points)
}
