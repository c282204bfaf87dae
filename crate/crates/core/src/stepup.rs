//! Weighted Benjamini-Hochberg step-up procedure.
//!
//! Weighted p-values `w_i * P_i` are compared against the critical constants
//! `j * alpha / N`. Products use extended-real limits: a zero weight always
//! gives 0, an infinite weight gives `+inf` unless the p-value is exactly 0.

use crate::data::{PValueSet, RejectionSet, WeightAssignment};
use crate::error::{check_alpha, GbhError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepUpConfig {
    alpha: f64,
}

impl StepUpConfig {
    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(StepUpConfig { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// `w * p` with `0 * p = 0` and `inf * p = inf` for `p > 0`.
pub fn weighted_pvalue(weight: f64, p: f64) -> f64 {
    if weight == 0.0 || p == 0.0 {
        0.0
    } else {
        weight * p
    }
}

/// The `j`-th critical constant `j * alpha / N`, `j` counted from 1.
#[inline]
pub fn critical_constant(j: usize, alpha: f64, n: usize) -> f64 {
    j as f64 * alpha / n as f64
}

pub fn weighted_pvalues(p: &PValueSet, w: &WeightAssignment) -> Result<Vec<f64>> {
    if p.layout() != w.layout() {
        return Err(GbhError::LayoutMismatch);
    }
    Ok(w.weights()
        .iter()
        .zip(p.values())
        .map(|(&wi, &pi)| weighted_pvalue(wi, pi))
        .collect())
}

/// Weighted BH at level `cfg.alpha`.
pub fn weighted_bh(
    p: &PValueSet,
    w: &WeightAssignment,
    cfg: &StepUpConfig,
) -> Result<RejectionSet> {
    let weighted = weighted_pvalues(p, w)?;
    Ok(step_up(p, &weighted, cfg.alpha))
}

/// Unweighted BH, i.e. every weight equal to 1.
pub fn plain_bh(p: &PValueSet, cfg: &StepUpConfig) -> Result<RejectionSet> {
    Ok(step_up(p, p.values(), cfg.alpha))
}

fn step_up(p: &PValueSet, weighted: &[f64], alpha: f64) -> RejectionSet {
    let n = weighted.len();
    let mut order: Vec<usize> = (0..n).collect();
    // stable sort keeps flat-index order among ties
    order.sort_by(|&a, &b| weighted[a].total_cmp(&weighted[b]));

    let r = (1..=n)
        .rev()
        .find(|&j| weighted[order[j - 1]] <= critical_constant(j, alpha, n))
        .unwrap_or(0);

    let mut rejected = vec![false; n];
    if r > 0 {
        let cutoff = weighted[order[r - 1]];
        for (flag, &v) in rejected.iter_mut().zip(weighted) {
            *flag = v <= cutoff;
        }
    }
    RejectionSet::new(p.layout().clone(), rejected, r)
}

/// Quadratic-time transcription of the step-up rule used as a testing oracle.
///
/// For each `j` it counts how many weighted p-values fall at or below the
/// `j`-th constant; `P_(j) <= c_j` holds exactly when that count is at least
/// `j`. No sorting is involved.
pub fn stepup_reference(
    p: &PValueSet,
    w: &WeightAssignment,
    cfg: &StepUpConfig,
) -> Result<RejectionSet> {
    let weighted = weighted_pvalues(p, w)?;
    let n = weighted.len();
    let mut r = 0;
    for j in 1..=n {
        let c = critical_constant(j, cfg.alpha, n);
        let below = weighted.iter().filter(|&&v| v <= c).count();
        if below >= j {
            r = j;
        }
    }
    let rejected: Vec<bool> = if r == 0 {
        vec![false; n]
    } else {
        let c = critical_constant(r, cfg.alpha, n);
        weighted.iter().map(|&v| v <= c).collect()
    };
    Ok(RejectionSet::new(p.layout().clone(), rejected, r))
}
