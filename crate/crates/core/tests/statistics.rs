//! Sampler law, volume constants and the information-cost minimizer against
//! independent numerical oracles.

use igprm::harness::{self, Sampler};
use igprm::volume::{self, TraceBand};
use igprm::{belief, linalg, oracle, spd, stats, RngState};
use nalgebra::{DMatrix, DVector};

const SEED: u64 = 4242;

#[test]
fn one_dimensional_draws_are_uniform() {
    let band = TraceBand::new(1, 0.0, 1.0).unwrap();
    let mut rng = RngState::from_seed(SEED);
    let xs: Vec<f64> = (0..20_000).map(|_| spd::sample_uniform_spd(&band, &mut rng).unwrap()[(0, 0)]).collect();
    let ks = stats::ks_one_sample(&xs, |t| t.clamp(0.0, 1.0)).unwrap();
    assert!(ks.statistic < ks.critical(0.001), "{ks:?}");
}

#[test]
fn half_trace_mass_approaches_one_eighth() {
    let band = TraceBand::new(2, 0.0, 1.0).unwrap();
    let mut rng = RngState::from_seed(SEED + 1);
    let n = 100_000;
    let hits = (0..n).filter(|_| spd::sample_uniform_spd(&band, &mut rng).unwrap().trace() <= 0.5).count();
    let p = hits as f64 / n as f64;
    let se = (0.125f64 * 0.875 / n as f64).sqrt();
    assert!((p - 0.125).abs() <= 4.0 * se, "{p}");
}

#[test]
fn trace_law_and_rotation_invariance_hold_in_two_and_three_dimensions() {
    let sampler = harness::default_sampler();
    for d in [2, 3] {
        let r = harness::trace_law_suite(d, 100_000, SEED, &*sampler).unwrap();
        assert!(r.passed, "{r}");
        let r = harness::rotation_suite(d, 100_000, SEED, &*sampler).unwrap();
        assert!(r.passed, "{r}");
        let r = harness::membership_suite(d, 50_000, SEED, &*sampler).unwrap();
        assert!(r.passed, "{r}");
    }
}

#[test]
fn wrong_trace_exponent_is_caught() {
    let bad: Box<Sampler> = Box::new(|band: &TraceBand, rng: &mut RngState| {
        spd::sample_with_trace_exponent(band, band.free_entries() as f64 + 1.0, rng)
    });
    let r = harness::trace_law_suite(2, 100_000, SEED, &*bad).unwrap();
    assert!(!r.passed, "{r}");
}

#[test]
fn haar_first_column_angle_is_uniform() {
    let r = harness::haar_suite(100_000, SEED).unwrap();
    assert!(r.passed, "{r}");
}

#[test]
fn selberg_closed_form_against_monte_carlo() {
    assert!((volume::selberg(2, 1.0, 1.0, 0.5).unwrap() - 1.0 / 3.0).abs() < 1e-12);
    let mut rng = RngState::from_seed(SEED + 2);
    for d in [2, 3] {
        let exact = volume::selberg(d, 1.0, 1.0, 0.5).unwrap();
        let (est, se) = oracle::mc_selberg_half(d, 1_000_000, &mut rng);
        assert!((est - exact).abs() <= 3.0 * se, "d={d}: {est} ± {se} vs {exact}");
    }
}

#[test]
fn dominated_volume_bound() {
    assert!((volume::vol_lower_bound_dominated(&[1.0]).unwrap() - 1.0).abs() < 1e-12);
    let r = harness::volume_suite(1_000_000, SEED).unwrap();
    assert!(r.passed, "{r}");
}

#[test]
fn band_volume_is_additive() {
    for d in 1..=5 {
        let cuts = [0.05, 0.3, 0.31, 1.7, 4.0];
        let whole = volume::volume_trace_band(&TraceBand::new(d, cuts[0], cuts[4]).unwrap()).unwrap();
        let parts: f64 = cuts
            .windows(2)
            .map(|w| volume::volume_trace_band(&TraceBand::new(d, w[0], w[1]).unwrap()).unwrap())
            .sum();
        assert!((whole - parts).abs() <= 1e-12 * whole);
    }
}

#[test]
fn minimizer_matches_barrier_solver() {
    let mut rng = RngState::from_seed(SEED + 3);
    for d in 1..=3 {
        for _ in 0..100 {
            let a = harness::random_spd(d, &mut rng);
            let b = harness::random_spd(d, &mut rng);
            let closed = belief::info_cost(&a, &b).unwrap();
            let (numeric, q_num) = oracle::info_cost_numeric(&a, &b).unwrap();
            assert!((closed - numeric).abs() <= 1e-6, "d={d}: {closed} vs {numeric}");
            let q = belief::info_cost_minimizer(&a, &b).unwrap();
            assert!(linalg::min_eigenvalue(&(&a - &q)).unwrap() >= -1e-9);
            assert!(linalg::min_eigenvalue(&(&b - &q)).unwrap() >= -1e-9);
            // the numeric optimum is feasible as well
            assert!(linalg::min_eigenvalue(&(&a - &q_num)).unwrap() >= -1e-9);
        }
    }
}

#[test]
fn hand_computed_minimizers() {
    let diag = |v: &[f64]| DMatrix::from_diagonal(&DVector::from_column_slice(v));
    let q = belief::info_cost_minimizer(&(DMatrix::identity(2, 2) * 2.0), &diag(&[1.0, 4.0])).unwrap();
    assert!(linalg::frobenius_distance(&q, &diag(&[1.0, 2.0])) < 1e-12);
    let c = belief::info_cost(&diag(&[4.0, 0.25]), &DMatrix::identity(2, 2)).unwrap();
    let (n, _) = oracle::info_cost_numeric(&diag(&[4.0, 0.25]), &DMatrix::identity(2, 2)).unwrap();
    assert!((c - 0.5 * 4f64.ln()).abs() < 1e-12);
    assert!((n - c).abs() < 1e-6);
}
