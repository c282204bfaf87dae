use gbh_core::sim::{replicate, replication_rng, twoway_statistics, upper_tail_pvalue};
use gbh_core::{
    expected_pi0, gen_oneway, run_replications, run_replications_multi, AdaptiveVariant,
    OneWaySimConfig, OracleVariant, Procedure, SimDesign, TwoWaySimConfig,
};
use statrs::distribution::{ContinuousCDF, Normal};

fn twoway(m: usize, n: usize, p: usize) -> TwoWaySimConfig {
    TwoWaySimConfig {
        m,
        n,
        p,
        pi_r: 0.2,
        pi_c: 0.4,
        pi_rc: 0.5,
        mu: 3.0,
        rho_r: 0.3,
        rho_c: 0.4,
        rho_p: 0.2,
    }
}

#[test]
fn pvalue_matches_normal_survival() {
    let normal = Normal::standard();
    for x in [-3.0, -1.0, 0.0, 0.5, 1.5, 3.0, 5.0] {
        let p = upper_tail_pvalue(x);
        assert!((p - normal.sf(x)).abs() < 1e-9, "{x}");
    }
}

#[test]
fn null_pvalues_are_uniform_ks() {
    // 1e5 independent null p-values, Kolmogorov-Smirnov at the 1% level
    let cfg = OneWaySimConfig::new(100, 1000, 1.0, 0.0, 3.0, 0.0);
    let (p, truth) = gen_oneway(&cfg, 2024).unwrap();
    assert!(truth.is_null().iter().all(|&b| b));
    let mut v = p.values().to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let d = v
        .iter()
        .enumerate()
        .map(|(i, &x)| ((i + 1) as f64 / n - x).max(x - i as f64 / n))
        .fold(0.0, f64::max);
    let critical = 1.6276 / n.sqrt();
    assert!(d < critical, "D = {d}, critical {critical}");
}

#[test]
fn correlated_null_pvalues_have_uniform_mean() {
    // one p-value per independent replication, so draws are independent
    let cfg = TwoWaySimConfig {
        pi_rc: 1.0,
        ..twoway(3, 4, 2)
    };
    let reps = 20_000;
    let draws: Vec<f64> = (0..reps)
        .map(|r| {
            let (x, _) = twoway_statistics(&cfg, &mut replication_rng(77, r));
            upper_tail_pvalue(x[r % x.len()])
        })
        .collect();
    let mean = draws.iter().sum::<f64>() / reps as f64;
    let se = (1.0f64 / 12.0).sqrt() / (reps as f64).sqrt();
    assert!((mean - 0.5).abs() < 3.0 * se, "mean {mean}");
}

#[test]
fn expected_pi0_examples() {
    let one = SimDesign::OneWay(OneWaySimConfig::new(2, 2, 0.0, 0.5, 3.0, 0.0));
    assert_eq!(expected_pi0(&one), 0.5);
    let two = SimDesign::TwoWay(TwoWaySimConfig {
        pi_r: 0.0,
        pi_c: 0.0,
        pi_rc: 0.3,
        ..twoway(2, 2, 1)
    });
    assert!((expected_pi0(&two) - 0.3).abs() < 1e-15);
    let all = SimDesign::OneWay(OneWaySimConfig::new(2, 2, 1.0, 0.2, 3.0, 0.0));
    assert_eq!(expected_pi0(&all), 1.0);
}

#[test]
fn summary_means_match_recomputation() {
    let design = SimDesign::TwoWay(twoway(4, 5, 3));
    let procs = [
        Procedure::PlainBh,
        Procedure::OracleGbh {
            variant: OracleVariant::TwoWayCellsFourTerm,
            proportions: None,
        },
        Procedure::AdaptiveGbh {
            variant: AdaptiveVariant::TwoWayCellsFourTerm,
            lambda: 0.5,
        },
    ];
    let reps = 64;
    let summaries = run_replications_multi(&procs, &design, reps, 0.1, 5).unwrap();
    for (k, s) in summaries.iter().enumerate() {
        let mut fdps = Vec::new();
        let mut powers = Vec::new();
        for rep in 0..reps {
            let (f, p) = replicate(&procs, &design, 0.1, 5, rep).unwrap()[k];
            fdps.push(f);
            powers.push(p);
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let se = |v: &[f64]| {
            let m = mean(v);
            (v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (v.len() - 1) as f64).sqrt()
                / (v.len() as f64).sqrt()
        };
        assert!((s.fdr_hat - mean(&fdps)).abs() < 1e-12);
        assert!((s.power_hat - mean(&powers)).abs() < 1e-12);
        assert!((s.se_fdr - se(&fdps)).abs() < 1e-12);
        assert!((s.se_power - se(&powers)).abs() < 1e-12);

        // replication order does not matter
        fdps.reverse();
        assert!((s.fdr_hat - mean(&fdps)).abs() < 1e-12);
        assert_eq!(s.reps, reps);
    }
}

#[test]
fn never_and_always_rejecting_procedures() {
    let cfg = OneWaySimConfig::new(3, 4, 0.5, 0.5, 3.0, 0.2);
    let design = SimDesign::OneWay(cfg.clone());
    let never = Procedure::FixedWeights(vec![f64::INFINITY; 12]);
    let s = run_replications(&never, &design, 40, 0.05, 1).unwrap();
    assert_eq!((s.fdr_hat, s.power_hat), (0.0, 0.0));

    let null = SimDesign::OneWay(OneWaySimConfig { pi_dot: 1.0, ..cfg });
    let always = Procedure::FixedWeights(vec![0.0; 12]);
    let s = run_replications(&always, &null, 40, 0.05, 1).unwrap();
    assert_eq!(s.fdr_hat, 1.0);
    assert_eq!(s.se_fdr, 0.0);
}

#[test]
fn summaries_are_deterministic_and_seed_sensitive() {
    let design = SimDesign::OneWay(OneWaySimConfig::new(5, 20, 0.3, 0.5, 2.0, 0.3));
    let proc = Procedure::AdaptiveGbh {
        variant: AdaptiveVariant::OneWay,
        lambda: 0.5,
    };
    let a = run_replications(&proc, &design, 100, 0.05, 42).unwrap();
    let b = run_replications(&proc, &design, 100, 0.05, 42).unwrap();
    let c = run_replications(&proc, &design, 100, 0.05, 43).unwrap();
    assert_eq!(a, b);
    assert_ne!((a.fdr_hat, a.power_hat), (c.fdr_hat, c.power_hat));
}

#[test]
fn estimates_stay_in_unit_interval() {
    let design = SimDesign::TwoWay(twoway(5, 6, 1));
    let procs = [
        Procedure::PlainBh,
        Procedure::NaiveAdaptiveBh {
            lambda: 0.5,
            cap_at_one: false,
        },
        Procedure::AdaptiveGbh {
            variant: AdaptiveVariant::TwoWayOnePer,
            lambda: 0.5,
        },
    ];
    for s in run_replications_multi(&procs, &design, 50, 0.05, 8).unwrap() {
        for v in [s.fdr_hat, s.power_hat] {
            assert!((0.0..=1.0).contains(&v));
        }
        assert!(s.se_fdr >= 0.0 && s.se_power >= 0.0);
    }
}
