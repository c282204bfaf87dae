use std::path::{Path, PathBuf};

use gbh_core::{run_replications_multi, SimDesign};

use crate::config::RunConfig;
use crate::error::{CliError, Result};

pub const SIM_HEADER: [&str; 20] = [
    "procedure", "m", "n", "p", "pi_r", "pi_c", "pi_rc", "pi_dot", "pi", "rho_r", "rho_c",
    "rho_p", "lambda", "alpha", "reps", "seed", "fdr_hat", "se_fdr", "power_hat", "se_power",
];

/// Formats `x` with `digits` significant digits, `%g` style.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{exp}", trim_zeros(mantissa))
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Seed in effect: `GBH_SEED` overrides the config value.
pub fn effective_seed(config_seed: u64) -> Result<u64> {
    match std::env::var("GBH_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Validation(format!("GBH_SEED must be an unsigned integer, got {v:?}"))),
        Err(_) => Ok(config_seed),
    }
}

/// Runs every sweep point and returns CSV records in output order.
pub fn simulate_records(cfg: &RunConfig, seed: u64) -> Result<Vec<Vec<String>>> {
    let procs = cfg.procedures()?;
    let bare: Vec<_> = procs.iter().map(|p| p.procedure.clone()).collect();
    let mut rows = Vec::new();
    for point in cfg.points() {
        let summaries = run_replications_multi(&bare, &point.design, cfg.reps, cfg.alpha, seed)?;
        for (proc, s) in procs.iter().zip(&summaries) {
            let mut row = vec![proc.label.clone()];
            row.extend(design_fields(&point.design));
            row.extend([
                proc.lambda.to_string(),
                cfg.alpha.to_string(),
                cfg.reps.to_string(),
                seed.to_string(),
                format_sig(s.fdr_hat, 6),
                format_sig(s.se_fdr, 6),
                format_sig(s.power_hat, 6),
                format_sig(s.se_power, 6),
            ]);
            rows.push(row);
        }
    }
    Ok(rows)
}

/// `m, n, p, pi_r, pi_c, pi_rc, pi_dot, pi, rho_r, rho_c, rho_p`; inapplicable fields are empty.
fn design_fields(design: &SimDesign) -> Vec<String> {
    let s = |x: f64| x.to_string();
    match design {
        SimDesign::OneWay(c) => vec![
            c.m.to_string(),
            c.n.to_string(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            s(c.pi_dot),
            s(c.pi),
            s(c.rho),
            String::new(),
            String::new(),
        ],
        SimDesign::TwoWay(c) => vec![
            c.m.to_string(),
            c.n.to_string(),
            c.p.to_string(),
            s(c.pi_r),
            s(c.pi_c),
            s(c.pi_rc),
            String::new(),
            String::new(),
            s(c.rho_r),
            s(c.rho_c),
            if c.p > 1 { s(c.rho_p) } else { String::new() },
        ],
    }
}

pub fn write_records(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::csv(path, e))?;
    w.write_record(header).map_err(|e| CliError::csv(path, e))?;
    for row in rows {
        w.write_record(row).map_err(|e| CliError::csv(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// `gbh simulate`. Returns the number of rows written.
pub fn cmd_simulate(config: &Path, out: Option<&Path>) -> Result<usize> {
    let cfg = RunConfig::load(config)?;
    let out: PathBuf = match (out, &cfg.out) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(p)) => p.clone(),
        (None, None) => {
            return Err(CliError::Validation(
                "no output path: pass --out or set out in the config".into(),
            ))
        }
    };
    let seed = effective_seed(cfg.seed)?;
    let rows = simulate_records(&cfg, seed)?;
    write_records(&out, &SIM_HEADER, &rows)?;
    Ok(rows.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(0.0, 6), "0");
        assert_eq!(format_sig(0.05, 6), "0.05");
        assert_eq!(format_sig(0.123456789, 6), "0.123457");
        assert_eq!(format_sig(1.0, 6), "1");
        assert_eq!(format_sig(0.000012345678, 6), "1.23457e-5");
        assert_eq!(format_sig(0.0001, 6), "0.0001");
        assert_eq!(format_sig(1234567.0, 6), "1.23457e6");
        assert_eq!(format_sig(0.99999999, 6), "1");
    }

    #[test]
    fn formatted_values_round_trip_to_six_digits() {
        for x in [0.0123456789, 0.5, 0.987654321, 3.3e-7] {
            let back: f64 = format_sig(x, 6).parse().unwrap();
            assert!((back - x).abs() <= 5e-6 * x.abs());
        }
    }

    #[test]
    fn rows_follow_grid_then_procedure_order() {
        let cfg = RunConfig::from_json(
            r#"{"mode": "two_way", "m": 3, "n": 4,
                "procedures": ["bh", "oracle_gbh"],
                "sweep": {"pi_r": [0.0, 0.3], "pi_rc": [0.2, 0.6]}, "reps": 4}"#,
        )
        .unwrap();
        let rows = simulate_records(&cfg, 1).unwrap();
        assert_eq!(rows.len(), 8);
        assert_eq!(rows[0][0], "bh");
        assert_eq!(rows[1][0], "oracle_gbh");
        assert_eq!((rows[0][4].as_str(), rows[0][6].as_str()), ("0", "0.2"));
        assert_eq!((rows[2][4].as_str(), rows[2][6].as_str()), ("0", "0.6"));
        assert_eq!(rows[4][4], "0.3");
        assert_eq!(rows[0][11], "", "rho_p is empty when p = 1");
        assert!(rows.iter().all(|r| r.len() == SIM_HEADER.len()));
    }
}
