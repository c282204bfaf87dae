//! Weighted Benjamini-Hochberg procedures for one-way and two-way classified
//! hypotheses.
//!
//! The step-up engine in [`stepup`] accepts any [`WeightAssignment`]. Weight
//! rules live in [`oracle`] (known null proportions) and [`adaptive`]
//! (threshold-count estimates). [`procedure`] bundles a weight rule with the
//! engine, and [`sim`] runs seeded Monte-Carlo studies of FDR and power.
//!
//! ```
//! use gbh_core::{plain_bh, Layout, PValueSet, StepUpConfig};
//!
//! let layout = Layout::one_way(vec![4]).unwrap();
//! let p = PValueSet::new(layout, vec![0.01, 0.02, 0.3, 0.9]).unwrap();
//! let rej = plain_bh(&p, &StepUpConfig::new(0.05).unwrap()).unwrap();
//! assert_eq!(rej.count(), 2);
//! ```

pub mod adaptive;
pub mod data;
pub mod error;
pub mod estimators;
pub mod layout;
pub mod metrics;
pub mod oracle;
pub mod procedure;
pub mod sim;
pub mod stepup;

pub use adaptive::{
    adaptive_weights, cell_components, component_estimate, oneway_adaptive_weights,
    threshold_counts, twoway_cells_adaptive_weights, twoway_oneper_adaptive_weights,
    AdaptiveVariant, CountTable,
};
pub use data::{PValueSet, RejectionSet, TruthMask, WeightAssignment};
pub use error::{GbhError, Result};
pub use estimators::{lsl_pi0, storey_pi0, tst_pi0};
pub use layout::{Index, Layout, LayoutKind};
pub use metrics::{fdp, null_proportions, power, ProportionTable};
pub use oracle::{
    component_weight, oneway_oracle_weights, oracle_weights, twoway_cells_oracle_weights,
    twoway_oneper_oracle_weights, verify_weight_identity, OracleVariant,
};
pub use procedure::{run_procedure, run_procedure_with_truth, Procedure};
pub use sim::{
    expected_pi0, gen_oneway, gen_twoway, run_replications, run_replications_multi,
    OneWaySimConfig, SimDesign, SimSummary, TwoWaySimConfig,
};
pub use stepup::{plain_bh, stepup_reference, weighted_bh, StepUpConfig};
