//! Data generators for the one-way and two-way simulation designs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use statrs::function::erf::erfc;

use super::config::{OneWaySimConfig, SimDesign, TwoWaySimConfig};
use crate::data::{PValueSet, TruthMask};
use crate::error::Result;

/// One-sided p-value `1 - Phi(x)` for testing a positive mean.
pub fn upper_tail_pvalue(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Zero-mean, unit-variance normals on a row-major grid with covariance
/// `prod over differing modes of rho_mode`.
///
/// Uses one independent factor per subset of "shared" modes: a factor that
/// drops mode set `D` is indexed by the remaining modes and scaled by
/// `sqrt(prod_{D} rho * prod_{not D} (1 - rho))`. For two modes this is the
/// usual four-term row/column factor model.
pub fn equicorrelated_noise<R: Rng + ?Sized>(dims: &[usize], rhos: &[f64], rng: &mut R) -> Vec<f64> {
    assert_eq!(dims.len(), rhos.len(), "one rho per mode");
    let modes = dims.len();
    let total: usize = dims.iter().product();
    let mut out = vec![0.0; total];
    let mut multi = vec![0usize; modes];
    for dropped in 0..(1usize << modes) {
        let shared = |k: usize| dropped & (1 << k) != 0;
        let var: f64 = (0..modes)
            .map(|k| if shared(k) { rhos[k] } else { 1.0 - rhos[k] })
            .product();
        if var == 0.0 {
            continue;
        }
        let coef = var.sqrt();
        // row-major strides of the retained sub-grid, 0 for shared modes
        let mut strides = vec![0usize; modes];
        let mut len = 1;
        for k in (0..modes).rev() {
            if !shared(k) {
                strides[k] = len;
                len *= dims[k];
            }
        }
        let factor: Vec<f64> = (0..len).map(|_| rng.sample(StandardNormal)).collect();
        multi.iter_mut().for_each(|i| *i = 0);
        for x in out.iter_mut() {
            let j: usize = multi.iter().zip(&strides).map(|(i, s)| i * s).sum();
            *x += coef * factor[j];
            for k in (0..modes).rev() {
                multi[k] += 1;
                if multi[k] < dims[k] {
                    break;
                }
                multi[k] = 0;
            }
        }
    }
    out
}

/// Test statistics and null indicators for the one-way design.
pub fn oneway_statistics<R: Rng + ?Sized>(cfg: &OneWaySimConfig, rng: &mut R) -> (Vec<f64>, Vec<bool>) {
    let (m, n) = (cfg.m, cfg.n);
    let mut stats = Vec::with_capacity(m * n);
    let mut is_null = Vec::with_capacity(m * n);
    for g in 0..m {
        let active = rng.random_bool(1.0 - cfg.pi_dot);
        let signals: Vec<bool> = if active {
            (0..n).map(|_| rng.random_bool(1.0 - cfg.pi)).collect()
        } else {
            vec![false; n]
        };
        let rho = cfg.rho_for(g);
        let shared: f64 = rng.sample(StandardNormal);
        for signal in signals {
            let z: f64 = rng.sample(StandardNormal);
            let mean = if signal { cfg.mu } else { 0.0 };
            stats.push(mean + (1.0 - rho).sqrt() * z + rho.sqrt() * shared);
            is_null.push(!signal);
        }
    }
    (stats, is_null)
}

/// Test statistics and null indicators for the two-way design, row-major
/// over `(g, h, k)`.
pub fn twoway_statistics<R: Rng + ?Sized>(cfg: &TwoWaySimConfig, rng: &mut R) -> (Vec<f64>, Vec<bool>) {
    let (m, n, p) = (cfg.m, cfg.n, cfg.p);
    let cell_states: Vec<bool> = (0..m * n * p)
        .map(|_| rng.random_bool(1.0 - cfg.pi_rc))
        .collect();
    let rows: Vec<bool> = (0..m).map(|_| rng.random_bool(1.0 - cfg.pi_r)).collect();
    let cols: Vec<bool> = (0..n).map(|_| rng.random_bool(1.0 - cfg.pi_c)).collect();
    let mut stats = if p == 1 {
        equicorrelated_noise(&[m, n], &[cfg.rho_r, cfg.rho_c], rng)
    } else {
        equicorrelated_noise(&[m, n, p], &[cfg.rho_r, cfg.rho_c, cfg.rho_p], rng)
    };
    let mut is_null = Vec::with_capacity(m * n * p);
    for (i, x) in stats.iter_mut().enumerate() {
        let (g, h) = (i / (n * p), (i / p) % n);
        let signal = cell_states[i] && rows[g] && cols[h];
        if signal {
            *x += cfg.mu;
        }
        is_null.push(!signal);
    }
    (stats, is_null)
}

fn to_sets(design: &SimDesign, stats: Vec<f64>, is_null: Vec<bool>) -> Result<(PValueSet, TruthMask)> {
    let layout = design.layout()?;
    let p = stats.into_iter().map(upper_tail_pvalue).collect();
    Ok((
        PValueSet::new(layout.clone(), p)?,
        TruthMask::new(layout, is_null)?,
    ))
}

pub(crate) fn generate<R: Rng + ?Sized>(design: &SimDesign, rng: &mut R) -> Result<(PValueSet, TruthMask)> {
    let (stats, is_null) = match design {
        SimDesign::OneWay(c) => oneway_statistics(c, rng),
        SimDesign::TwoWay(c) => twoway_statistics(c, rng),
    };
    to_sets(design, stats, is_null)
}

pub fn gen_oneway(cfg: &OneWaySimConfig, seed: u64) -> Result<(PValueSet, TruthMask)> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generate(&SimDesign::OneWay(cfg.clone()), &mut rng)
}

pub fn gen_twoway(cfg: &TwoWaySimConfig, seed: u64) -> Result<(PValueSet, TruthMask)> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generate(&SimDesign::TwoWay(cfg.clone()), &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::LayoutKind;

    fn twoway(m: usize, n: usize, p: usize) -> TwoWaySimConfig {
        TwoWaySimConfig {
            m,
            n,
            p,
            pi_r: 0.0,
            pi_c: 0.0,
            pi_rc: 0.0,
            mu: 3.0,
            rho_r: 0.3,
            rho_c: 0.4,
            rho_p: 0.2,
        }
    }

    #[test]
    fn upper_tail_values() {
        assert_eq!(upper_tail_pvalue(0.0), 0.5);
        let v = upper_tail_pvalue(1.959963984540054);
        assert!((v - 0.025).abs() < 1e-10, "{v}");
        assert!(upper_tail_pvalue(40.0) >= 0.0);
        assert!(upper_tail_pvalue(-40.0) <= 1.0);
    }

    #[test]
    fn groups_always_active_when_pi_dot_zero() {
        let cfg = OneWaySimConfig::new(30, 4, 0.0, 0.0, 3.0, 0.0);
        let (_, truth) = gen_oneway(&cfg, 7).unwrap();
        assert!(truth.is_null().iter().all(|&b| !b));
    }

    #[test]
    fn no_active_groups_means_all_null() {
        let cfg = OneWaySimConfig::new(5, 4, 1.0, 0.0, 3.0, 0.3);
        let (_, truth) = gen_oneway(&cfg, 7).unwrap();
        assert!(truth.is_null().iter().all(|&b| b));
    }

    #[test]
    fn same_seed_same_data() {
        let cfg = OneWaySimConfig::new(4, 6, 0.3, 0.5, 3.0, 0.3);
        assert_eq!(gen_oneway(&cfg, 11).unwrap(), gen_oneway(&cfg, 11).unwrap());
        assert_ne!(gen_oneway(&cfg, 11).unwrap(), gen_oneway(&cfg, 12).unwrap());
        let cfg = twoway(3, 4, 2);
        assert_eq!(gen_twoway(&cfg, 5).unwrap(), gen_twoway(&cfg, 5).unwrap());
    }

    #[test]
    fn dense_two_way_design_has_no_nulls() {
        let (p, truth) = gen_twoway(&twoway(4, 5, 1), 3).unwrap();
        assert!(truth.is_null().iter().all(|&b| !b));
        assert_eq!(p.layout().kind(), LayoutKind::TwoWayOnePerCell);
        let (p, _) = gen_twoway(&twoway(2, 3, 4), 3).unwrap();
        assert_eq!(p.layout().kind(), LayoutKind::TwoWayCells);
        assert_eq!(p.len(), 24);
    }

    #[test]
    fn signals_need_row_and_column() {
        let mut cfg = twoway(6, 6, 1);
        cfg.pi_r = 0.5;
        cfg.pi_c = 0.5;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (_, is_null) = twoway_statistics(&cfg, &mut rng);
        // every signal sits in a row and column that carry signals, and with
        // pi_rc = 0 such rows and columns are fully non-null at crossings
        let sig = |g: usize, h: usize| !is_null[g * 6 + h];
        for g in 0..6 {
            for h in 0..6 {
                let row_active = (0..6).any(|k| sig(g, k));
                let col_active = (0..6).any(|k| sig(k, h));
                assert_eq!(sig(g, h), row_active && col_active);
            }
        }
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = twoway(2, 2, 1);
        cfg.rho_c = 1.0;
        assert!(gen_twoway(&cfg, 1).is_err());
        let cfg = OneWaySimConfig::new(2, 2, 1.5, 0.0, 3.0, 0.0);
        assert!(gen_oneway(&cfg, 1).is_err());
        let mut cfg = OneWaySimConfig::new(2, 2, 0.5, 0.0, 3.0, 0.0);
        cfg.rho_per_group = Some(vec![0.1]);
        assert!(gen_oneway(&cfg, 1).is_err());
    }

    #[test]
    fn two_mode_noise_matches_four_term_model() {
        // same draws, assembled by hand as in the matrix factor model
        let (m, n, rr, rc) = (2usize, 3usize, 0.3f64, 0.4f64);
        let mut a = ChaCha8Rng::seed_from_u64(1);
        let got = equicorrelated_noise(&[m, n], &[rr, rc], &mut a);
        let mut b = ChaCha8Rng::seed_from_u64(1);
        let mut draw = |k: usize| -> Vec<f64> { (0..k).map(|_| b.sample(StandardNormal)).collect() };
        let z_mn = draw(m * n); // nothing shared
        let z_n = draw(n); // row mode shared
        let z_m = draw(m); // column mode shared
        let z_0 = draw(1)[0];
        for g in 0..m {
            for h in 0..n {
                let expect = ((1.0 - rr) * (1.0 - rc)).sqrt() * z_mn[g * n + h]
                    + ((1.0 - rr) * rc).sqrt() * z_m[g]
                    + (rr * (1.0 - rc)).sqrt() * z_n[h]
                    + (rr * rc).sqrt() * z_0;
                assert!((got[g * n + h] - expect).abs() < 1e-14);
            }
        }
    }
}
