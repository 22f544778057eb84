mod common;

use common::{binormal, rng, worked_example};
use rocqe_core::bootstrap::{nearest_rank, replicate_rng};
use rocqe_core::{
    auc, build_roc, confidence_band, confidence_band_with, resample_stratified, BootstrapConfig,
    Execution,
};

fn config(iterations: usize, confidence: f64, seed: u64) -> BootstrapConfig {
    BootstrapConfig {
        iterations,
        confidence,
        seed,
        grid_points: None,
    }
}

#[test]
fn worked_example_band_is_deterministic() {
    let d = worked_example();
    let cfg = config(500, 0.95, 42);
    let a = confidence_band_with(&d, &cfg, Execution::Serial).unwrap();
    let b = confidence_band_with(&d, &cfg, Execution::Parallel).unwrap();
    let c = confidence_band(&d, &cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(b, c);
    let other = confidence_band(&d, &config(500, 0.95, 43)).unwrap();
    assert_ne!(a.replicate_aucs, other.replicate_aucs);
}

#[test]
fn replicate_aucs_match_full_resampling() {
    let d = worked_example();
    let cfg = config(64, 0.9, 7);
    let fast = confidence_band(&d, &cfg).unwrap();
    for (i, &a) in fast.replicate_aucs.iter().enumerate() {
        let resampled = resample_stratified(&d, &mut replicate_rng(7, i)).unwrap();
        assert_eq!(resampled.p_count(), d.p_count());
        assert_eq!(resampled.n_count(), d.n_count());
        assert!((auc(&build_roc(&resampled).unwrap()) - a).abs() < 1e-12);
    }
}

#[test]
fn band_is_monotone_and_ordered() {
    let mut r = rng(11);
    for seed in 0..20 {
        let d = binormal(&mut r, 30 + seed as usize, 40, 1.0);
        let out = confidence_band(&d, &config(200, 0.95, seed)).unwrap();
        let band = &out.band;
        assert_eq!(band.fpr_grid.len(), band.lower_tpr.len());
        assert_eq!(band.fpr_grid.first(), Some(&0.0));
        assert_eq!(band.fpr_grid.last(), Some(&1.0));
        for i in 0..band.fpr_grid.len() {
            assert!(band.lower_tpr[i] <= band.upper_tpr[i]);
            assert!((0.0..=1.0).contains(&band.lower_tpr[i]));
            if i > 0 {
                assert!(band.lower_tpr[i] >= band.lower_tpr[i - 1]);
                assert!(band.upper_tpr[i] >= band.upper_tpr[i - 1]);
            }
        }
        assert_eq!(*band.upper_tpr.last().unwrap(), 1.0);
        let (lo, hi) = band.auc_interval;
        assert!(lo <= hi);
        assert!(out.replicate_aucs.iter().all(|a| (0.0..=1.0).contains(a)));
    }
}

#[test]
fn higher_confidence_nests_lower() {
    let mut r = rng(12);
    for seed in 0..10 {
        let d = binormal(&mut r, 40, 60, 0.8);
        let narrow = confidence_band(&d, &config(300, 0.8, seed)).unwrap().band;
        let wide = confidence_band(&d, &config(300, 0.95, seed)).unwrap().band;
        for i in 0..narrow.fpr_grid.len() {
            assert!(wide.lower_tpr[i] <= narrow.lower_tpr[i]);
            assert!(wide.upper_tpr[i] >= narrow.upper_tpr[i]);
        }
        assert!(wide.auc_interval.0 <= narrow.auc_interval.0);
        assert!(wide.auc_interval.1 >= narrow.auc_interval.1);
    }
}

#[test]
fn nearest_rank_percentiles() {
    let v: Vec<f64> = (1..=1000).map(f64::from).collect();
    assert_eq!(nearest_rank(&v, 0.025), 25.0);
    assert_eq!(nearest_rank(&v, 0.975), 975.0);
    assert_eq!(nearest_rank(&v, 0.0), 1.0);
    assert_eq!(nearest_rank(&v, 1.0), 1000.0);
    assert_eq!(nearest_rank(&[3.0], 0.5), 3.0);
}

/// Interval width shrinks like 1 / sqrt(sample size): four times the
/// segments should roughly halve it.
#[test]
fn quadrupled_sample_halves_auc_interval() {
    let mut r = rng(13);
    let (mut small, mut large) = (0.0, 0.0);
    for seed in 0..50 {
        let a = binormal(&mut r, 50, 50, 1.0);
        let b = binormal(&mut r, 200, 200, 1.0);
        let wa = confidence_band(&a, &config(300, 0.95, seed))
            .unwrap()
            .band
            .auc_interval;
        let wb = confidence_band(&b, &config(300, 0.95, seed))
            .unwrap()
            .band
            .auc_interval;
        small += wa.1 - wa.0;
        large += wb.1 - wb.0;
    }
    let ratio = small / large;
    assert!((1.5..=3.0).contains(&ratio), "width ratio {ratio}");
}

#[test]
fn invalid_configs_are_rejected() {
    let d = worked_example();
    assert!(confidence_band(&d, &config(1, 0.95, 0)).is_err());
    assert!(confidence_band(&d, &config(100, 1.0, 0)).is_err());
    assert!(confidence_band(&d, &config(100, 0.0, 0)).is_err());
    let mut c = config(100, 0.95, 0);
    c.grid_points = Some(0);
    assert!(confidence_band(&d, &c).is_err());
}
