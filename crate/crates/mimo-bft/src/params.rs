//! Scenario parameters shared by every module.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};

/// Which linear precoder the base station uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrecoderKind {
    Mrt,
    Zf,
}

impl PrecoderKind {
    pub fn label(&self) -> &'static str {
        match self {
            PrecoderKind::Mrt => "mrt",
            PrecoderKind::Zf => "zf",
        }
    }
}

/// All scenario scalars: antenna/user counts, coherence budget, powers.
///
/// Powers are linear-scale SNRs (noise variance is 1 throughout).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// BS antenna count M.
    pub m: usize,
    /// User count K.
    pub k: usize,
    /// Coherence interval length T in symbols.
    pub t: usize,
    /// Uplink pilot length in symbols.
    pub tau_u: usize,
    /// Downlink pilot length in symbols.
    pub tau_d: usize,
    /// Uplink pilot power (linear).
    pub p_u: f64,
    /// Downlink power (linear).
    pub p_d: f64,
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        if self.m < 1 {
            return Err(SimError::InvalidParams("M must be >= 1".into()));
        }
        if self.k < 1 {
            return Err(SimError::InvalidParams("K must be >= 1".into()));
        }
        if self.tau_u < self.k {
            return Err(SimError::InvalidParams(format!(
                "tau_u ({}) must be >= K ({}) for orthogonal uplink pilots",
                self.tau_u, self.k
            )));
        }
        if self.tau_d < self.k {
            return Err(SimError::InvalidParams(format!(
                "tau_d ({}) must be >= K ({}) for orthonormal downlink pilot rows",
                self.tau_d, self.k
            )));
        }
        if self.t < self.tau_u + self.tau_d {
            return Err(SimError::InvalidParams(format!(
                "T ({}) must be >= tau_u + tau_d ({})",
                self.t,
                self.tau_u + self.tau_d
            )));
        }
        if !(self.p_u > 0.0) {
            return Err(SimError::InvalidParams(format!("p_u must be > 0, got {}", self.p_u)));
        }
        if !(self.p_d > 0.0) {
            return Err(SimError::InvalidParams(format!("p_d must be > 0, got {}", self.p_d)));
        }
        Ok(())
    }

    /// ZF needs M > K for the Gram inverse and the power normalization.
    pub fn require_zf(&self) -> Result<()> {
        if self.m <= self.k {
            return Err(SimError::UnsupportedConfig(format!(
                "ZF requires M > K, got M={} K={}",
                self.m, self.k
            )));
        }
        Ok(())
    }

    /// Uplink training energy tau_u * p_u, the quantity every closed form
    /// depends on.
    pub fn tau_u_p_u(&self) -> f64 {
        self.tau_u as f64 * self.p_u
    }

    /// Downlink training energy tau_d * p_d.
    pub fn tau_d_p_d(&self) -> f64 {
        self.tau_d as f64 * self.p_d
    }

    /// Payload fraction with both training phases spent.
    pub fn prelog_bft(&self) -> f64 {
        (self.t - self.tau_u - self.tau_d) as f64 / self.t as f64
    }

    /// Payload fraction when only uplink training is spent.
    pub fn prelog_baseline(&self) -> f64 {
        (self.t - self.tau_u) as f64 / self.t as f64
    }
}

/// Linear power from a dB value.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> SystemParams {
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

    #[test]
    fn valid_params_pass() {
        base().validate().unwrap();
    }

    #[test]
    fn short_pilots_rejected() {
        let mut p = base();
        p.tau_u = 4;
        assert!(p.validate().is_err());
        let mut p = base();
        p.tau_d = 4;
        assert!(p.validate().is_err());
    }

    #[test]
    fn coherence_budget_enforced() {
        let mut p = base();
        p.t = 9;
        assert!(p.validate().is_err());
    }

    #[test]
    fn zf_requires_more_antennas_than_users() {
        let mut p = base();
        p.m = 5;
        assert!(p.require_zf().is_err());
        assert!(base().require_zf().is_ok());
    }

    #[test]
    fn db_conversion() {
        assert!((db_to_linear(0.0) - 1.0).abs() < 1e-15);
        assert!((db_to_linear(10.0) - 10.0).abs() < 1e-12);
        assert!((db_to_linear(20.0) - 100.0).abs() < 1e-10);
    }
}
