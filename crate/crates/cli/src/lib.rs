//! Library behind the `gbh` binary: sweep simulations, analysis of observed
//! p-value tables and pivoting of simulation results.
//!
//! Exit codes are a stable contract: 0 success, 2 validation, 3 I/O,
//! 4 procedure incompatible with the data layout.

pub mod analyze;
pub mod config;
pub mod error;
pub mod report;
pub mod simulate;

pub use analyze::{cmd_analyze, AnalyzeOptions};
pub use config::RunConfig;
pub use error::{CliError, Result};
pub use report::cmd_report;
pub use simulate::{cmd_simulate, format_sig, SIM_HEADER};
