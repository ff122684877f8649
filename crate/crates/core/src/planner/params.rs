use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Collision-free edges, lossless refinement after search.
    Standard,
    /// Edges must also be lossless; no refinement.
    Lossless,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(Mode::Standard),
            "lossless" => Ok(Mode::Lossless),
            other => Err(Error::InvalidArgument(format!("unknown mode `{other}` (expected standard|lossless)"))),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Standard => "standard",
            Mode::Lossless => "lossless",
        })
    }
}

/// Sampling bounds, radius-schedule constant and search settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlannerParams {
    /// Covariance floor: sampled covariances have trace above `rho · d`.
    pub rho: f64,
    /// Trace ceiling for sampled covariances.
    pub r_max: f64,
    /// Radius-schedule constant.
    pub gamma: f64,
    /// Endpoint neighbour count used by the search.
    pub k_near: usize,
    pub mode: Mode,
    /// Number of sampled beliefs (endpoints excluded).
    pub n: usize,
    pub seed: u64,
}

pub const DEFAULT_K_NEAR: usize = 15;

impl PlannerParams {
    pub fn validate(&self, dim: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return bad(format!("rho must be > 0, got {}", self.rho));
        }
        if !(self.r_max > self.rho * dim as f64) || !self.r_max.is_finite() {
            return bad(format!("r_max must exceed rho·d = {}, got {}", self.rho * dim as f64, self.r_max));
        }
        if !(self.gamma > 0.0) || !self.gamma.is_finite() {
            return bad(format!("gamma must be > 0, got {}", self.gamma));
        }
        if self.k_near == 0 {
            return bad("k_near must be ≥ 1".into());
        }
        Ok(())
    }

    /// Trace band `(rho·d, r_max]` used for covariance sampling.
    pub fn trace_band(&self, dim: usize) -> Result<crate::volume::TraceBand> {
        crate::volume::TraceBand::new(dim, self.rho * dim as f64, self.r_max)
    }
}
