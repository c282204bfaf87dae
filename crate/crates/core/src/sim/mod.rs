//! Seeded simulation designs and the Monte-Carlo replication runner.

mod config;
mod generate;
mod runner;

pub use config::{OneWaySimConfig, SimDesign, TwoWaySimConfig};
pub use generate::{
    equicorrelated_noise, gen_oneway, gen_twoway, oneway_statistics, twoway_statistics,
    upper_tail_pvalue,
};
pub use runner::{replicate, replication_rng, run_replications, run_replications_multi, SimSummary};

/// Expected overall null proportion implied by the hidden-state composition.
pub fn expected_pi0(design: &SimDesign) -> f64 {
    design.expected_pi0()
}
