use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::config::SimDesign;
use super::generate::generate;
use crate::error::{check_alpha, GbhError, Result};
use crate::metrics::{fdp, power};
use crate::procedure::{run_procedure_with_truth, Procedure};

/// Monte-Carlo FDR and power estimates at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimSummary {
    pub procedure: String,
    pub design: SimDesign,
    pub alpha: f64,
    pub seed: u64,
    pub reps: usize,
    pub fdr_hat: f64,
    pub se_fdr: f64,
    pub power_hat: f64,
    pub se_power: f64,
}

/// Independent stream for replication `rep` under a master seed.
pub fn replication_rng(seed: u64, rep: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep as u64);
    rng
}

/// One replication: draws a data set and returns `(fdp, power)` for every
/// procedure applied to it.
pub fn replicate(
    procedures: &[Procedure],
    design: &SimDesign,
    alpha: f64,
    seed: u64,
    rep: usize,
) -> Result<Vec<(f64, f64)>> {
    let mut rng = replication_rng(seed, rep);
    let (p, truth) = generate(design, &mut rng)?;
    procedures
        .iter()
        .map(|proc| {
            let rej = run_procedure_with_truth(&p, proc, alpha, Some(&truth))?;
            Ok((fdp(&rej, &truth)?, power(&rej, &truth)?))
        })
        .collect()
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Runs every procedure on the same `reps` simulated data sets. Replications
/// execute in parallel; results do not depend on scheduling.
pub fn run_replications_multi(
    procedures: &[Procedure],
    design: &SimDesign,
    reps: usize,
    alpha: f64,
    seed: u64,
) -> Result<Vec<SimSummary>> {
    if reps == 0 {
        return Err(GbhError::InvalidConfig("reps must be at least 1".into()));
    }
    check_alpha(alpha)?;
    design.validate()?;
    let per_rep = (0..reps)
        .into_par_iter()
        .map(|rep| replicate(procedures, design, alpha, seed, rep))
        .collect::<Result<Vec<_>>>()?;
    Ok(procedures
        .iter()
        .enumerate()
        .map(|(k, proc)| {
            let fdps: Vec<f64> = per_rep.iter().map(|r| r[k].0).collect();
            let powers: Vec<f64> = per_rep.iter().map(|r| r[k].1).collect();
            let (fdr_hat, se_fdr) = mean_se(&fdps);
            let (power_hat, se_power) = mean_se(&powers);
            SimSummary {
                procedure: proc.name().to_string(),
                design: design.clone(),
                alpha,
                seed,
                reps,
                fdr_hat,
                se_fdr,
                power_hat,
                se_power,
            }
        })
        .collect())
}

pub fn run_replications(
    procedure: &Procedure,
    design: &SimDesign,
    reps: usize,
    alpha: f64,
    seed: u64,
) -> Result<SimSummary> {
    let mut out = run_replications_multi(std::slice::from_ref(procedure), design, reps, alpha, seed)?;
    Ok(out.remove(0))
}
