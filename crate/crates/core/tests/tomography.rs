// Copyright 2026 The krausloom Authors
// SPDX-License-Identifier: Apache-2.0

use krausloom::circuit::{gad_experiment, gad_experiment_output, EXPERIMENT_CONVENTION, PUBLISHED_GAD_THETA};
use krausloom::qmath::{c, fidelity, CMatrix, DensityMatrix, PureState, Tolerances, C64};
use krausloom::tomography::{
    informational_rank, linear_reconstruct, ml_reconstruct, parse_counts, simulate_counts,
    simulate_interferometer_counts, spearman, write_counts, CountNormalization, MlOptions,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn random_pure(rng: &mut ChaCha8Rng) -> PureState {
    let amps: Vec<C64> = (0..4)
        .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    PureState::normalized(amps, vec![2, 2]).unwrap()
}

#[test]
fn projectors_are_informationally_complete() {
    assert_eq!(informational_rank(), 16);
}

#[test]
fn interferometer_counts_recover_the_gad_output() {
    let t = PUBLISHED_GAD_THETA;
    let out = gad_experiment_output(t, t, t, EXPERIMENT_CONVENTION).unwrap();
    let truth = gad_experiment(t, t, t, EXPERIMENT_CONVENTION).unwrap();
    let rec = simulate_interferometer_counts(&out, 1_000_000_000_000, false, 0).unwrap();
    let lin = linear_reconstruct(&rec, CountNormalization::HvBlock).unwrap();
    assert!(fidelity(&lin, &truth).unwrap() >= 0.999);
    assert!(lin.max_abs_diff(&truth) < 1e-9);
}

#[test]
fn interferometer_and_density_counts_agree() {
    let out = gad_experiment_output(0.3, 0.5, 0.2, EXPERIMENT_CONVENTION).unwrap();
    let rho = gad_experiment(0.3, 0.5, 0.2, EXPERIMENT_CONVENTION).unwrap();
    let a = simulate_interferometer_counts(&out, 1_000_000, false, 0).unwrap();
    let b = simulate_counts(&rho, 1_000_000, false, 0).unwrap();
    for (x, y) in a.iter().zip(&b) {
        let (px, py) = (x.expected_probability.unwrap(), y.expected_probability.unwrap());
        assert!((px - py).abs() < 1e-12, "setting {}", x.index);
    }
}

#[test]
fn ml_output_is_always_a_valid_state() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let strict = Tolerances {
        structural: 1e-12,
        spectral: 1e-12,
        ..Tolerances::default()
    };
    for seed in 0..10 {
        let truth = random_pure(&mut rng).density();
        let rec = simulate_counts(&truth, 200, true, seed).unwrap();
        let ml = ml_reconstruct(&rec, &MlOptions::default()).unwrap();
        assert!(ml.state.report().is_valid(&strict), "{}", ml.state.report());
    }
}

#[test]
fn fidelity_improves_with_shots() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let truths: Vec<DensityMatrix> = (0..20).map(|_| random_pure(&mut rng).density()).collect();
    let options = MlOptions {
        max_iter: 2000,
        ..MlOptions::default()
    };
    let shots = [100u64, 1_000, 10_000, 100_000];
    let means: Vec<f64> = shots
        .iter()
        .map(|&n| {
            let total: f64 = truths
                .iter()
                .enumerate()
                .map(|(k, truth)| {
                    let rec = simulate_counts(truth, n, true, k as u64).unwrap();
                    let ml = ml_reconstruct(&rec, &options).unwrap();
                    fidelity(&ml.state, truth).unwrap()
                })
                .sum();
            total / truths.len() as f64
        })
        .collect();
    let log_shots: Vec<f64> = shots.iter().map(|&n| (n as f64).ln()).collect();
    let rho = spearman(&log_shots, &means).unwrap();
    assert!(rho > 0.9, "means {means:?}");
}

#[test]
fn total_shots_normalization_matches_block_normalization_without_noise() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let truth = random_pure(&mut rng).density();
    let rec = simulate_counts(&truth, 1_000_000_000_000, false, 0).unwrap();
    let a = linear_reconstruct(&rec, CountNormalization::HvBlock).unwrap();
    let b = linear_reconstruct(&rec, CountNormalization::TotalShots).unwrap();
    assert!(a.max_abs_diff(&b) < 1e-10);
}

#[test]
fn count_files_round_trip_into_the_same_reconstruction() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let truth = random_pure(&mut rng).density();
    let rec = simulate_counts(&truth, 5_000, true, 3).unwrap();
    let back = parse_counts(&write_counts(&rec)).unwrap();
    let a = linear_reconstruct(&rec, CountNormalization::HvBlock).unwrap();
    let b = linear_reconstruct(&back, CountNormalization::HvBlock).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn linear_inversion_round_trips(entries in prop::collection::vec(-1.0f64..1.0, 32)) {
        let g = CMatrix::from_fn(4, 4, |i, j| c(entries[4 * i + j], entries[16 + 4 * i + j]));
        let m = &g * g.adjoint();
        prop_assume!(m.trace().re > 1e-3);
        let t = m.trace().re;
        let rho = DensityMatrix::new(m.unscale(t), vec![2, 2]).unwrap();
        let rec = simulate_counts(&rho, 1_000_000_000_000, false, 0).unwrap();
        let lin = linear_reconstruct(&rec, CountNormalization::HvBlock).unwrap();
        prop_assert!(lin.max_abs_diff(&rho) < 1e-8);
    }
}
