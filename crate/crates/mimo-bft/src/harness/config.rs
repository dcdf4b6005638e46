//! Experiment configuration and the CSV row schema.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::params::{db_to_linear, PrecoderKind, SystemParams};
use crate::rates::RateMode;

/// Header shared by every CSV the harness emits.
pub const CSV_HEADER: &str = "axis,mode,se,se_stderr,trials,seed";

/// Curves a sweep can emit, including the closed-form baselines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveMode {
    BftMrt,
    BftZf,
    GenieMrt,
    GenieZf,
    BaselineMrt,
    BaselineZf,
}

impl CurveMode {
    /// Monte Carlo mode, when this curve needs simulation.
    pub fn rate_mode(&self) -> Option<RateMode> {
        match self {
            CurveMode::BftMrt => Some(RateMode::BftMrt),
            CurveMode::BftZf => Some(RateMode::BftZf),
            CurveMode::GenieMrt => Some(RateMode::GenieMrt),
            CurveMode::GenieZf => Some(RateMode::GenieZf),
            CurveMode::BaselineMrt | CurveMode::BaselineZf => None,
        }
    }

    /// Precoder for the closed-form baseline curves.
    pub fn baseline_kind(&self) -> Option<PrecoderKind> {
        match self {
            CurveMode::BaselineMrt => Some(PrecoderKind::Mrt),
            CurveMode::BaselineZf => Some(PrecoderKind::Zf),
            _ => None,
        }
    }

    pub fn needs_zf(&self) -> bool {
        matches!(
            self,
            CurveMode::BftZf | CurveMode::GenieZf | CurveMode::BaselineZf
        )
    }

    pub fn label(&self) -> &'static str {
        match self {
            CurveMode::BftMrt => "bft_mrt",
            CurveMode::BftZf => "bft_zf",
            CurveMode::GenieMrt => "genie_mrt",
            CurveMode::GenieZf => "genie_zf",
            CurveMode::BaselineMrt => "baseline_mrt",
            CurveMode::BaselineZf => "baseline_zf",
        }
    }
}

/// Which scalar the sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepAxis {
    #[serde(rename = "snr_db")]
    SnrDb,
    #[serde(rename = "coherence_T")]
    CoherenceT,
    #[serde(rename = "antennas_M")]
    AntennasM,
}

impl SweepAxis {
    pub fn label(&self) -> &'static str {
        match self {
            SweepAxis::SnrDb => "snr_db",
            SweepAxis::CoherenceT => "coherence_T",
            SweepAxis::AntennasM => "antennas_M",
        }
    }
}

fn default_trials() -> usize {
    10_000
}

/// One sweep: base parameters, curves, axis, grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub params: SystemParams,
    pub modes: Vec<CurveMode>,
    pub sweep_axis: SweepAxis,
    pub sweep_values: Vec<f64>,
    #[serde(default = "default_trials")]
    pub n_trials: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub output_path: Option<String>,
}

impl ExperimentConfig {
    /// Parameters with the sweep axis applied at one grid value.
    pub fn params_at(&self, axis_value: f64) -> Result<SystemParams> {
        let mut p = self.params;
        match self.sweep_axis {
            SweepAxis::SnrDb => p.p_d = db_to_linear(axis_value),
            SweepAxis::CoherenceT => {
                if axis_value.fract() != 0.0 || axis_value < 1.0 {
                    return Err(SimError::InvalidConfig(format!(
                        "coherence_T sweep value must be a positive integer, got {axis_value}"
                    )));
                }
                p.t = axis_value as usize;
            }
            SweepAxis::AntennasM => {
                if axis_value.fract() != 0.0 || axis_value < 1.0 {
                    return Err(SimError::InvalidConfig(format!(
                        "antennas_M sweep value must be a positive integer, got {axis_value}"
                    )));
                }
                p.m = axis_value as usize;
            }
        }
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes.is_empty() {
            return Err(SimError::InvalidConfig("modes must be nonempty".into()));
        }
        if self.sweep_values.is_empty() {
            return Err(SimError::InvalidConfig("sweep_values must be nonempty".into()));
        }
        for w in self.sweep_values.windows(2) {
            if w[1] <= w[0] {
                return Err(SimError::InvalidConfig(format!(
                    "sweep_values must be strictly increasing ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        if self.n_trials < 100 {
            return Err(SimError::InvalidConfig(format!(
                "n_trials must be >= 100, got {}",
                self.n_trials
            )));
        }
        for &v in &self.sweep_values {
            let p = self.params_at(v)?;
            p.validate()
                .map_err(|e| SimError::InvalidConfig(format!("at sweep value {v}: {e}")))?;
            if self.modes.iter().any(|m| m.needs_zf()) {
                p.require_zf()
                    .map_err(|e| SimError::InvalidConfig(format!("at sweep value {v}: {e}")))?;
            }
        }
        Ok(())
    }
}

/// One emitted data point.
#[derive(Debug, Clone, Serialize)]
pub struct CurvePoint {
    pub axis_value: f64,
    pub mode: String,
    pub spectral_efficiency: f64,
    pub std_error: f64,
    pub n_trials: usize,
    pub seed: u64,
}

impl CurvePoint {
    /// CSV row; f64 Display is shortest round-trip form.
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.axis_value,
            self.mode,
            self.spectral_efficiency,
            self.std_error,
            self.n_trials,
            self.seed
        )
    }
}

/// Full CSV document for a set of points.
pub fn points_to_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&p.csv_row());
        out.push('\n');
    }
    out
}
