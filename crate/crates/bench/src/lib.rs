// Copyright 2026 The krausloom Authors
// SPDX-License-Identifier: Apache-2.0

//! Inputs shared by the benchmarks.

use krausloom::channels::{ChannelParams, SgadParams};
use krausloom::circuit::{
    build_channel_lattice, gad_experiment, preparation_circuit, ProductStateParams, EXPERIMENT_CONVENTION,
    PUBLISHED_GAD_THETA,
};
use krausloom::tomography::{simulate_counts, CountRecord};
use krausloom::{CircuitSpec, DensityMatrix, PureState, Result};

/// One instance of each channel family.
pub fn channels() -> Vec<(&'static str, ChannelParams)> {
    vec![
        ("dephasing", ChannelParams::Dephasing { p: 0.3 }),
        ("gad", ChannelParams::Gad { p: 0.3, alpha2_sq: 0.6 }),
        (
            "sgad",
            ChannelParams::Sgad(SgadParams {
                alpha: 0.1,
                beta: 0.2,
                mu: 0.3,
                nu: 0.4,
                phi: 0.5,
                lambda: -0.5,
                alpha2_sq: 0.6,
            }),
        ),
        ("pauli", ChannelParams::Pauli { p: 0.3, q1: 0.2, q2: 0.3, q3: 0.5 }),
    ]
}

/// Preparation followed by the GAD lattice, with its all-zero input.
pub fn gad_circuit() -> Result<(CircuitSpec, PureState)> {
    let prep = preparation_circuit(&ProductStateParams::half_angle(0.7, 1.1))?;
    let spec = prep.compose(&build_channel_lattice(&ChannelParams::Gad { p: 0.3, alpha2_sq: 0.7 })?)?;
    let zero = PureState::basis(0, spec.register().dims())?;
    Ok((spec, zero))
}

/// The ideal experimental GAD output and its counts.
pub fn tomography_input(shots: u64, noise: bool) -> Result<(DensityMatrix, Vec<CountRecord>)> {
    let t = PUBLISHED_GAD_THETA;
    let rho = gad_experiment(t, t, t, EXPERIMENT_CONVENTION)?;
    let counts = simulate_counts(&rho, shots, noise, 7)?;
    Ok((rho, counts))
}
