//! Null-proportion estimators used by the competing procedures.

use crate::data::PValueSet;
use crate::error::{check_alpha, check_lambda, GbhError, Result};
use crate::layout::Layout;
use crate::stepup::{plain_bh, StepUpConfig};

/// `(N - R_N + 1) / (N (1 - lambda))`, uncapped.
pub fn storey_pi0(p: &PValueSet, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let n = p.len();
    let r = p.values().iter().filter(|&&v| v <= lambda).count();
    Ok((n - r + 1) as f64 / (n as f64 * (1.0 - lambda)))
}

/// Least-slope estimate for one group.
///
/// With sorted p-values, `l_i = (n - i + 1) / (1 - P_(i))`; the estimate is
/// `min((floor(l_i) + 1) / n, 1)` at the smallest `i >= 2` with
/// `l_i > l_{i-1}`, and 1 if the sequence never increases.
pub fn lsl_pi0(group_pvalues: &[f64]) -> Result<f64> {
    if group_pvalues.is_empty() {
        return Err(GbhError::EmptyGroup);
    }
    let mut sorted = group_pvalues.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    // 1 - 1 = 0 gives +inf, which is what we want
    let slope = |i: usize| (n - i + 1) as f64 / (1.0 - sorted[i - 1]);
    let hit = (2..=n).find(|&i| slope(i) > slope(i - 1));
    Ok(match hit {
        Some(i) => ((slope(i).floor() + 1.0) / n as f64).min(1.0),
        None => 1.0,
    })
}

/// Two-stage estimate `(n - r) / n`, with `r` the BH rejections at level
/// `alpha / (1 + alpha)` within the group.
pub fn tst_pi0(group_pvalues: &[f64], alpha: f64) -> Result<f64> {
    if group_pvalues.is_empty() {
        return Err(GbhError::EmptyGroup);
    }
    check_alpha(alpha)?;
    let n = group_pvalues.len();
    let layout = Layout::one_way(vec![n])?;
    let p = PValueSet::new(layout, group_pvalues.to_vec())?;
    let r = plain_bh(&p, &StepUpConfig::new(alpha / (1.0 + alpha))?)?.count();
    Ok((n - r) as f64 / n as f64)
}
