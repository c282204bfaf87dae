use serde::{Deserialize, Serialize};

use crate::error::{GbhError, Result};
use crate::layout::Layout;

fn check_prob(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(GbhError::InvalidConfig(format!("{name} must lie in [0, 1], got {v}")))
    }
}

fn check_rho(name: &str, v: f64) -> Result<()> {
    if (0.0..1.0).contains(&v) {
        Ok(())
    } else {
        Err(GbhError::InvalidConfig(format!("{name} must lie in [0, 1), got {v}")))
    }
}

fn check_dim(name: &str, v: usize) -> Result<()> {
    if v > 0 {
        Ok(())
    } else {
        Err(GbhError::InvalidConfig(format!("{name} must be positive")))
    }
}

/// One-way factor model: `m` groups of `n` statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OneWaySimConfig {
    pub m: usize,
    pub n: usize,
    /// Probability that a group carries no signal.
    pub pi_dot: f64,
    /// Probability that a hypothesis inside an active group is null.
    pub pi: f64,
    pub mu: f64,
    /// Within-group equicorrelation shared by every group.
    pub rho: f64,
    /// Optional per-group override of `rho`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_per_group: Option<Vec<f64>>,
}

impl OneWaySimConfig {
    pub fn new(m: usize, n: usize, pi_dot: f64, pi: f64, mu: f64, rho: f64) -> Self {
        OneWaySimConfig {
            m,
            n,
            pi_dot,
            pi,
            mu,
            rho,
            rho_per_group: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_dim("m", self.m)?;
        check_dim("n", self.n)?;
        check_prob("pi_dot", self.pi_dot)?;
        check_prob("pi", self.pi)?;
        check_rho("rho", self.rho)?;
        if !self.mu.is_finite() {
            return Err(GbhError::InvalidConfig("mu must be finite".into()));
        }
        if let Some(rhos) = &self.rho_per_group {
            if rhos.len() != self.m {
                return Err(GbhError::InvalidConfig(format!(
                    "rho_per_group needs {} entries, got {}",
                    self.m,
                    rhos.len()
                )));
            }
            for &r in rhos {
                check_rho("rho_per_group", r)?;
            }
        }
        Ok(())
    }

    pub fn rho_for(&self, g: usize) -> f64 {
        self.rho_per_group.as_ref().map_or(self.rho, |r| r[g])
    }
}

/// Two-way grid of `m x n` cells holding `p` statistics each.
/// `p = 1` is the one-per-cell matrix model, `p > 1` the tensor model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoWaySimConfig {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub pi_r: f64,
    pub pi_c: f64,
    pub pi_rc: f64,
    pub mu: f64,
    /// Correlation between statistics in the same column (differing rows).
    pub rho_r: f64,
    /// Correlation between statistics in the same row (differing columns).
    pub rho_c: f64,
    /// Correlation between statistics in the same cell; unused when `p = 1`.
    pub rho_p: f64,
}

impl TwoWaySimConfig {
    pub fn validate(&self) -> Result<()> {
        check_dim("m", self.m)?;
        check_dim("n", self.n)?;
        check_dim("p", self.p)?;
        check_prob("pi_r", self.pi_r)?;
        check_prob("pi_c", self.pi_c)?;
        check_prob("pi_rc", self.pi_rc)?;
        check_rho("rho_r", self.rho_r)?;
        check_rho("rho_c", self.rho_c)?;
        check_rho("rho_p", self.rho_p)?;
        if !self.mu.is_finite() {
            return Err(GbhError::InvalidConfig("mu must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimDesign {
    OneWay(OneWaySimConfig),
    TwoWay(TwoWaySimConfig),
}

impl SimDesign {
    pub fn validate(&self) -> Result<()> {
        match self {
            SimDesign::OneWay(c) => c.validate(),
            SimDesign::TwoWay(c) => c.validate(),
        }
    }

    pub fn layout(&self) -> Result<Layout> {
        match self {
            SimDesign::OneWay(c) => Layout::one_way(vec![c.n; c.m]),
            SimDesign::TwoWay(c) if c.p == 1 => Layout::two_way(c.m, c.n),
            SimDesign::TwoWay(c) => Layout::equal_cells(c.m, c.n, c.p),
        }
    }

    pub fn expected_pi0(&self) -> f64 {
        match self {
            SimDesign::OneWay(c) => 1.0 - (1.0 - c.pi_dot) * (1.0 - c.pi),
            SimDesign::TwoWay(c) => 1.0 - (1.0 - c.pi_rc) * (1.0 - c.pi_r) * (1.0 - c.pi_c),
        }
    }
}
