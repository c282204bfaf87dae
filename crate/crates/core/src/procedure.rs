//! Complete testing procedures: a weight rule fed into the step-up engine.

use crate::adaptive::{adaptive_weights, AdaptiveVariant};
use crate::data::{PValueSet, RejectionSet, TruthMask, WeightAssignment};
use crate::error::{check_lambda, GbhError, Result};
use crate::estimators::{lsl_pi0, storey_pi0, tst_pi0};
use crate::layout::LayoutKind;
use crate::metrics::{null_proportions, ProportionTable};
use crate::oracle::{oneway_oracle_weights, oracle_weights, OracleVariant};
use crate::stepup::{weighted_bh, StepUpConfig};

#[derive(Debug, Clone, PartialEq)]
pub enum Procedure {
    /// Unweighted BH.
    PlainBh,
    /// BH with the uniform weight `(N - R_N + 1) / (N (1 - lambda))`.
    NaiveAdaptiveBh { lambda: f64, cap_at_one: bool },
    /// Oracle weights. `None` proportions are taken from the truth mask at
    /// run time, which is how simulations supply oracle knowledge.
    OracleGbh {
        variant: OracleVariant,
        proportions: Option<ProportionTable>,
    },
    AdaptiveGbh { variant: AdaptiveVariant, lambda: f64 },
    /// One-way oracle weights with least-slope group estimates.
    LslGbh,
    /// One-way oracle weights with two-stage group estimates.
    TstGbh,
    /// Caller-supplied weights in flat order.
    FixedWeights(Vec<f64>),
}

impl Procedure {
    pub fn name(&self) -> &'static str {
        match self {
            Procedure::PlainBh => "bh",
            Procedure::NaiveAdaptiveBh { .. } => "naive_adaptive_bh",
            Procedure::OracleGbh { .. } => "oracle_gbh",
            Procedure::AdaptiveGbh { .. } => "adaptive_gbh",
            Procedure::LslGbh => "lsl_gbh",
            Procedure::TstGbh => "tst_gbh",
            Procedure::FixedWeights(_) => "fixed_weights",
        }
    }

    /// Weights this procedure assigns on `p`.
    pub fn weights(
        &self,
        p: &PValueSet,
        alpha: f64,
        truth: Option<&TruthMask>,
    ) -> Result<WeightAssignment> {
        let layout = p.layout();
        match self {
            Procedure::PlainBh => WeightAssignment::uniform(layout.clone(), 1.0),
            Procedure::NaiveAdaptiveBh { lambda, cap_at_one } => {
                let mut pi0 = storey_pi0(p, *lambda)?;
                if *cap_at_one {
                    pi0 = pi0.min(1.0);
                }
                WeightAssignment::uniform(layout.clone(), pi0)
            }
            Procedure::OracleGbh {
                variant,
                proportions,
            } => match (proportions, truth) {
                (Some(props), _) => oracle_weights(props, layout, *variant),
                (None, Some(truth)) => {
                    if truth.layout() != layout {
                        return Err(GbhError::LayoutMismatch);
                    }
                    oracle_weights(&null_proportions(truth), layout, *variant)
                }
                (None, None) => Err(GbhError::MissingProportions),
            },
            Procedure::AdaptiveGbh { variant, lambda } => {
                check_lambda(*lambda)?;
                adaptive_weights(p, *lambda, *variant)
            }
            Procedure::LslGbh => estimated_oneway_weights(p, lsl_pi0),
            Procedure::TstGbh => estimated_oneway_weights(p, |g| tst_pi0(g, alpha)),
            Procedure::FixedWeights(w) => WeightAssignment::new(layout.clone(), w.clone()),
        }
    }
}

/// Plugs per-group estimates into the one-way oracle weights, with the
/// overall proportion `sum(n_g pi_g) / N`.
fn estimated_oneway_weights<F>(p: &PValueSet, estimate: F) -> Result<WeightAssignment>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let layout = p.layout();
    if layout.kind() != LayoutKind::OneWay {
        return Err(GbhError::VariantMismatch {
            variant: "one_way",
            layout: layout.kind().name(),
        });
    }
    let groups = (0..layout.rows())
        .map(|g| estimate(p.unit(g)))
        .collect::<Result<Vec<f64>>>()?;
    let overall = groups
        .iter()
        .zip(layout.row_sizes())
        .map(|(pi, &n)| pi * n as f64)
        .sum::<f64>()
        / layout.total() as f64;
    let props = ProportionTable::new(layout, overall.min(1.0), groups, vec![], vec![])?;
    oneway_oracle_weights(&props, layout)
}

pub fn run_procedure(p: &PValueSet, procedure: &Procedure, alpha: f64) -> Result<RejectionSet> {
    run_procedure_with_truth(p, procedure, alpha, None)
}

/// Like [`run_procedure`], letting oracle procedures read proportions from `truth`.
pub fn run_procedure_with_truth(
    p: &PValueSet,
    procedure: &Procedure,
    alpha: f64,
    truth: Option<&TruthMask>,
) -> Result<RejectionSet> {
    let cfg = StepUpConfig::new(alpha)?;
    let w = procedure.weights(p, alpha, truth)?;
    weighted_bh(p, &w, &cfg)
}
