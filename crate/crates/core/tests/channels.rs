// Copyright 2026 The krausloom Authors
// SPDX-License-Identifier: Apache-2.0

use krausloom::channels::{action_distance, completeness_residual, kraus_apply, ChannelParams, KrausSet, SgadParams};
use krausloom::circuit::{
    build_channel_lattice, lattice_kraus, preparation_circuit, ProductStateParams, Stage,
};
use krausloom::qmath::{c, CMatrix, DensityMatrix, Tolerances};
use krausloom::CircuitSpec;
use proptest::prelude::*;

fn unit() -> impl Strategy<Value = f64> {
    0.0f64..=1.0
}

fn angle() -> impl Strategy<Value = f64> {
    -std::f64::consts::PI..std::f64::consts::PI
}

fn channel() -> impl Strategy<Value = ChannelParams> {
    prop_oneof![
        unit().prop_map(|p| ChannelParams::Dephasing { p }),
        (unit(), unit()).prop_map(|(p, alpha2_sq)| ChannelParams::Gad { p, alpha2_sq }),
        (unit(), unit(), unit(), unit(), angle(), angle(), unit()).prop_map(
            |(alpha, beta, mu, nu, phi, lambda, alpha2_sq)| ChannelParams::Sgad(SgadParams {
                alpha,
                beta,
                mu,
                nu,
                phi,
                lambda,
                alpha2_sq,
            })
        ),
        (unit(), 0.01f64..1.0, 0.01f64..1.0, 0.01f64..1.0).prop_map(|(p, a, b, d)| {
            let s = a + b + d;
            ChannelParams::Pauli {
                p,
                q1: a / s,
                q2: b / s,
                q3: d / s,
            }
        }),
    ]
}

fn qubit_state() -> impl Strategy<Value = DensityMatrix> {
    prop::collection::vec(-1.0f64..1.0, 8).prop_filter_map("degenerate", |e| {
        let g = CMatrix::from_fn(2, 2, |i, j| c(e[2 * i + j], e[4 + 2 * i + j]));
        let m = &g * g.adjoint();
        let t = m.trace().re;
        (t > 1e-3).then(|| DensityMatrix::new(m.unscale(t), vec![2]).unwrap())
    })
}

fn environment_mixture(params: &ChannelParams) -> Vec<f64> {
    match params {
        ChannelParams::Pauli { .. } => vec![1.0, 0.0, 0.0, 0.0],
        _ => vec![params.alpha2_sq(), 1.0 - params.alpha2_sq()],
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn channels_are_cptp(params in channel(), rho in qubit_state()) {
        let k = params.kraus().unwrap();
        prop_assert!(completeness_residual(&k) < 1e-10);
        let out = kraus_apply(&rho, &k).unwrap();
        prop_assert!(out.report().is_valid(&Tolerances::default()), "{}", out.report());
    }

    #[test]
    fn lattice_kraus_has_the_same_action(params in channel()) {
        let lattice = build_channel_lattice(&params).unwrap();
        let from_circuit = lattice_kraus(&lattice, &environment_mixture(&params)).unwrap();
        let d = action_distance(&from_circuit, &params.kraus().unwrap()).unwrap();
        prop_assert!(d < 1e-10, "gap {d:e}");
    }

    #[test]
    fn lattices_are_unitary_and_serialize(params in channel()) {
        let lattice = build_channel_lattice(&params).unwrap();
        prop_assert!(lattice.operator_through(Stage::Evolve).unwrap().residual() < 1e-10);
        let back = CircuitSpec::from_json(&lattice.to_json()).unwrap();
        prop_assert_eq!(back, lattice);
    }

    #[test]
    fn prepared_circuits_compose_and_serialize(t1 in angle(), t2 in angle(), t in unit()) {
        let prep = preparation_circuit(&ProductStateParams::half_angle(t1, t2)).unwrap();
        let lattice = build_channel_lattice(&ChannelParams::Gad { p: t, alpha2_sq: 0.5 }).unwrap();
        let spec = prep.compose(&lattice).unwrap();
        let back = CircuitSpec::from_json(&spec.to_json()).unwrap();
        prop_assert_eq!(&back, &spec);
        prop_assert!(back.control("theta1").is_some());
    }

    #[test]
    fn kraus_sets_serialize(params in channel()) {
        let k = params.kraus().unwrap();
        let back: KrausSet = serde_json::from_str(&serde_json::to_string(&k).unwrap()).unwrap();
        prop_assert_eq!(back, k);
    }
}
