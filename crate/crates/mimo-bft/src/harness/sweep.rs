//! Run a sweep config into curve points.

use crate::error::Result;
use crate::rates::{monte_carlo_rate, se_baseline, se_bft};

use super::config::{CurvePoint, ExperimentConfig};

/// Evaluate every (sweep value, mode) combination. Monte Carlo curves use
/// the config's master seed; baseline curves are closed-form (zero stderr,
/// zero trials).
pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<CurvePoint>> {
    config.validate()?;
    let mut points = Vec::with_capacity(config.sweep_values.len() * config.modes.len());
    for &axis_value in &config.sweep_values {
        let params = config.params_at(axis_value)?;
        for mode in &config.modes {
            let point = if let Some(rate_mode) = mode.rate_mode() {
                let result = monte_carlo_rate(rate_mode, &params, config.n_trials, config.master_seed)?;
                let se = se_bft(&result, &params)?;
                CurvePoint {
                    axis_value,
                    mode: mode.label().to_string(),
                    spectral_efficiency: se.value,
                    std_error: se.std_error,
                    n_trials: config.n_trials,
                    seed: config.master_seed,
                }
            } else {
                let kind = mode.baseline_kind().expect("non-MC mode is baseline");
                let se = se_baseline(kind, &params)?;
                CurvePoint {
                    axis_value,
                    mode: mode.label().to_string(),
                    spectral_efficiency: se.value,
                    std_error: 0.0,
                    n_trials: 0,
                    seed: config.master_seed,
                }
            };
            points.push(point);
        }
    }
    Ok(points)
}
