// Copyright 2026 The krausloom Authors
// SPDX-License-Identifier: Apache-2.0

//! Product-state preparation on the path register and bath weights.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{evolve, CircuitSpec, GatePlacement, Stage};
use crate::error::{check_finite, Error, Result};
use crate::gates::{PathCondition, Register, U3Params};
use crate::qmath::{PureState, C64};

/// How the angles of [`ProductStateParams`] map to amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AngleConvention {
    /// `α₁ = cos(θ₁/2)`, `α₂ = cos(θ₂/2)`: the angles are `u3` arguments.
    #[default]
    HalfAngle,
    /// `α₁ = cos θ₁`, `β₁ = sin θ₁`, `α₂ = sin θ₂`, `β₂ = cos θ₂`, `p = cos² θ₃`.
    FullAngle,
    /// Half-wave-plate angles: a plate at `θ` acts as `u3(4θ, 0, π)`, so
    /// `α₁ = cos 2θ₁`, `α₂ = sin 2θ₂` and `p = cos² 2θ₃`.
    WavePlate,
}

impl AngleConvention {
    /// `u3` polar angle producing the system amplitudes.
    pub fn system_u3_angle(self, theta1: f64) -> f64 {
        match self {
            Self::HalfAngle => theta1,
            Self::FullAngle => 2.0 * theta1,
            Self::WavePlate => 4.0 * theta1,
        }
    }

    /// `u3` polar angle producing the environment amplitudes.
    pub fn environment_u3_angle(self, theta2: f64) -> f64 {
        match self {
            Self::HalfAngle => theta2,
            // sin θ = cos((π - 2θ)/2)
            Self::FullAngle => PI - 2.0 * theta2,
            Self::WavePlate => PI - 4.0 * theta2,
        }
    }

    /// Channel probability set by the transition angle.
    pub fn channel_probability(self, theta3: f64) -> f64 {
        let c = match self {
            Self::HalfAngle => (theta3 / 2.0).cos(),
            Self::FullAngle => theta3.cos(),
            Self::WavePlate => (2.0 * theta3).cos(),
        };
        (c * c).clamp(0.0, 1.0)
    }
}

impl std::str::FromStr for AngleConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "half-angle" => Ok(Self::HalfAngle),
            "full-angle" | "experimental" => Ok(Self::FullAngle),
            "wave-plate" => Ok(Self::WavePlate),
            other => Err(Error::Parse(format!("unknown angle convention `{other}`"))),
        }
    }
}

/// Angles of the system–environment product state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProductStateParams {
    /// System amplitude angle.
    pub theta1: f64,
    /// Environment mixture angle.
    pub theta2: f64,
    /// Relative phase of the system's `|1⟩` amplitude.
    #[serde(default)]
    pub phi1: f64,
    #[serde(default)]
    pub convention: AngleConvention,
}

impl ProductStateParams {
    pub fn new(theta1: f64, theta2: f64, convention: AngleConvention) -> Self {
        Self {
            theta1,
            theta2,
            phi1: 0.0,
            convention,
        }
    }

    pub fn half_angle(theta1: f64, theta2: f64) -> Self {
        Self::new(theta1, theta2, AngleConvention::HalfAngle)
    }

    /// Half-angle parameters preparing `system` (up to global phase) with
    /// environment ground weight `alpha2_sq`.
    pub fn for_system(system: &PureState, alpha2_sq: f64) -> Result<Self> {
        let u = system_params_for(system)?;
        Ok(Self {
            theta1: u.theta,
            theta2: 2.0 * alpha2_sq.clamp(0.0, 1.0).sqrt().acos(),
            phi1: u.phi,
            convention: AngleConvention::HalfAngle,
        })
    }

    pub fn system_u3(&self) -> Result<U3Params> {
        U3Params::new(self.convention.system_u3_angle(self.theta1), self.phi1, PI)
    }

    pub fn environment_u3(&self) -> Result<U3Params> {
        U3Params::new(self.convention.environment_u3_angle(self.theta2), 0.0, PI)
    }

    /// `(α₁, β₁)` of the system qubit.
    pub fn system_amplitudes(&self) -> Result<(C64, C64)> {
        let u = crate::gates::u3(&self.system_u3()?);
        Ok((u.matrix()[(0, 0)], u.matrix()[(1, 0)]))
    }

    /// `(α₂, β₂)` of the environment mixture.
    pub fn environment_amplitudes(&self) -> Result<(f64, f64)> {
        let u = crate::gates::u3(&self.environment_u3()?);
        Ok((u.matrix()[(0, 0)].re, u.matrix()[(1, 0)].re))
    }

    fn validate(&self) -> Result<()> {
        check_finite("theta1", self.theta1)?;
        check_finite("theta2", self.theta2)?;
        check_finite("phi1", self.phi1)?;
        Ok(())
    }
}

/// `u3(θ, φ, π)` whose first column is `system` up to a global phase.
pub fn system_params_for(system: &PureState) -> Result<U3Params> {
    if system.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: system.dim(),
        });
    }
    let (a, b) = (system.amplitude(0), system.amplitude(1));
    U3Params::new(2.0 * b.norm().atan2(a.norm()), b.arg() - a.arg(), PI)
}

/// Prepare-stage layers on the channel register (system path, environment
/// path, polarization), starting from `|00⟩|H⟩`.
pub fn preparation_circuit(params: &ProductStateParams) -> Result<CircuitSpec> {
    params.validate()?;
    let register = Register::channel();
    let (s, e, pol) = (0, 1, register.polarization());
    let mut spec = CircuitSpec::new(register);
    spec.push_gates(
        Stage::Prepare,
        [
            GatePlacement::LocalU3 {
                params: params.system_u3()?,
                wire: pol,
            },
            GatePlacement::CnotPolPath { control: pol, target: s },
            // restore H on the lower system path
            GatePlacement::PathConditionedU3 {
                params: U3Params::FLIP,
                target: pol,
                condition: PathCondition::new(vec![(s, true)])?,
            },
            GatePlacement::LocalU3 {
                params: params.environment_u3()?,
                wire: pol,
            },
            GatePlacement::CnotPolPath { control: pol, target: e },
        ],
    )?;
    spec.set_control("theta1", params.theta1);
    spec.set_control("theta2", params.theta2);
    Ok(spec)
}

/// `(α₁α₂|00⟩ + β₁α₂|10⟩)|H⟩ + (α₁β₂|01⟩ + β₁β₂|11⟩)|V⟩`.
pub fn prepare_product_state(params: &ProductStateParams) -> Result<PureState> {
    let spec = preparation_circuit(params)?;
    evolve(&PureState::basis(0, vec![2; 3])?, &spec, Stage::Prepare)
}

/// Prepare-stage layers on the Pauli register: the system qubit on the first
/// path wire, reservoir in `|00⟩`, polarization returned to H.
pub fn pauli_preparation_circuit(system: U3Params) -> Result<CircuitSpec> {
    let register = Register::pauli();
    let pol = register.polarization();
    let mut spec = CircuitSpec::new(register);
    spec.push_gates(
        Stage::Prepare,
        [
            GatePlacement::LocalU3 {
                params: system,
                wire: pol,
            },
            GatePlacement::CnotPolPath { control: pol, target: 0 },
            GatePlacement::PathConditionedU3 {
                params: U3Params::FLIP,
                target: pol,
                condition: PathCondition::new(vec![(0, true)])?,
            },
        ],
    )?;
    Ok(spec)
}

/// Bath temperature for [`thermal_weights`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BathTemperature {
    /// `k_B T` in the energy unit of the levels.
    Finite(f64),
    Zero,
}

/// Boltzmann weights `(e^{-E₁/kT}, e^{-E₂/kT}) / Z` of a two-level bath.
///
/// The pair sums to exactly 1. At zero temperature the lower level takes all
/// the weight (degenerate levels split evenly).
pub fn thermal_weights(e1: f64, e2: f64, temperature: BathTemperature) -> Result<(f64, f64)> {
    check_finite("e1", e1)?;
    check_finite("e2", e2)?;
    let gap = e2 - e1;
    match temperature {
        BathTemperature::Zero => Ok(if gap > 0.0 {
            (1.0, 0.0)
        } else if gap < 0.0 {
            (0.0, 1.0)
        } else {
            (0.5, 0.5)
        }),
        BathTemperature::Finite(kbt) => {
            if !kbt.is_finite() || kbt <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "k_B T must be positive and finite, got {kbt}; use BathTemperature::Zero for T = 0"
                )));
            }
            // the smaller weight is a logistic that never overflows
            let x = (gap / kbt).abs();
            let small = 1.0 / (1.0 + x.exp());
            let big = 1.0 - small;
            Ok(if gap >= 0.0 { (big, small) } else { (small, big) })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::output_mode_decomposition;
    use crate::qmath::{max_abs_diff, partial_trace, r, CMatrix};
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    fn traced(params: &ProductStateParams) -> CMatrix {
        let psi = prepare_product_state(params).unwrap();
        partial_trace(&psi.density(), &[0, 1]).unwrap().into_matrix()
    }

    #[test]
    fn zero_angles_give_ground_state() {
        let psi = prepare_product_state(&ProductStateParams::half_angle(0.0, 0.0)).unwrap();
        assert_eq!(psi, PureState::basis(0, vec![2; 3]).unwrap());
    }

    #[test]
    fn equal_superposition_system() {
        let m = traced(&ProductStateParams::half_angle(FRAC_PI_2, 0.0));
        let mut expected = CMatrix::zeros(4, 4);
        for (i, j) in [(0, 0), (0, 2), (2, 0), (2, 2)] {
            expected[(i, j)] = r(0.5);
        }
        assert!(max_abs_diff(&m, &expected) < 1e-15);
    }

    #[test]
    fn modes_follow_the_tagged_product_form() {
        let params = ProductStateParams::half_angle(1.1, 0.7);
        let (a1, b1) = ((0.55f64).cos(), (0.55f64).sin());
        let (a2, b2) = ((0.35f64).cos(), (0.35f64).sin());
        let modes = output_mode_decomposition(&prepare_product_state(&params).unwrap()).unwrap();
        let expected = [(a1 * a2, 0.0), (0.0, a1 * b2), (b1 * a2, 0.0), (0.0, b1 * b2)];
        for (m, (h, v)) in modes.iter().zip(expected) {
            assert!((m.h - r(h)).norm() < 1e-15 && (m.v - r(v)).norm() < 1e-15);
        }
    }

    #[test]
    fn conventions_produce_documented_amplitudes() {
        let t = 0.3;
        let full = ProductStateParams::new(t, t, AngleConvention::FullAngle);
        let (a1, b1) = full.system_amplitudes().unwrap();
        let (a2, b2) = full.environment_amplitudes().unwrap();
        assert!((a1 - r(t.cos())).norm() < 1e-15 && (b1 - r(t.sin())).norm() < 1e-15);
        assert!((a2 - t.sin()).abs() < 1e-15 && (b2 - t.cos()).abs() < 1e-15);

        let plate = ProductStateParams::new(t, t, AngleConvention::WavePlate);
        let (a1, _) = plate.system_amplitudes().unwrap();
        let (a2, _) = plate.environment_amplitudes().unwrap();
        assert!((a1 - r((2.0 * t).cos())).norm() < 1e-15);
        assert!((a2 - (2.0 * t).sin()).abs() < 1e-15);

        assert!((AngleConvention::FullAngle.channel_probability(t) - t.cos().powi(2)).abs() < 1e-15);
        assert!((AngleConvention::HalfAngle.channel_probability(t) - (t / 2.0).cos().powi(2)).abs() < 1e-15);
    }

    #[test]
    fn system_phase_is_carried() {
        let mut params = ProductStateParams::half_angle(FRAC_PI_2, 0.0);
        params.phi1 = 0.9;
        let m = traced(&params);
        // ρ_S[1][0] = β₁ α₁* = ½ e^{iφ}
        assert!((m[(2, 0)] - C64::from_polar(0.5, 0.9)).norm() < 1e-15);
    }

    #[test]
    fn thermal_weight_examples() {
        assert_eq!(thermal_weights(1.0, 1.0, BathTemperature::Finite(0.3)).unwrap(), (0.5, 0.5));
        let (a, b) = thermal_weights(0.0, 1.0, BathTemperature::Finite(1e9)).unwrap();
        assert!((a - 0.5).abs() < 1e-6 && (b - 0.5).abs() < 1e-6);
        let (a, b) = thermal_weights(0.0, 3f64.ln(), BathTemperature::Finite(1.0)).unwrap();
        assert!((a - 0.75).abs() < 1e-15 && (b - 0.25).abs() < 1e-15);
        assert_eq!(thermal_weights(0.0, 1.0, BathTemperature::Zero).unwrap(), (1.0, 0.0));
        assert_eq!(thermal_weights(2.0, 1.0, BathTemperature::Zero).unwrap(), (0.0, 1.0));
        assert!(matches!(
            thermal_weights(0.0, 1.0, BathTemperature::Finite(0.0)),
            Err(Error::InvalidArgument(_))
        ));
        assert!(thermal_weights(0.0, 1.0, BathTemperature::Finite(-1.0)).is_err());
        // huge gaps saturate instead of producing NaN
        assert_eq!(thermal_weights(0.0, 1e6, BathTemperature::Finite(1e-3)).unwrap(), (1.0, 0.0));
    }

    proptest! {
        #[test]
        fn thermal_weights_sum_to_one(e1 in -50.0..50.0f64, e2 in -50.0..50.0f64, kbt in 1e-3..1e3f64) {
            let (a, b) = thermal_weights(e1, e2, BathTemperature::Finite(kbt)).unwrap();
            prop_assert_eq!(a + b, 1.0);
            // the lower level is never less populated
            prop_assert_eq!(e1 <= e2, a >= b);
        }

        #[test]
        fn environment_block_is_diagonal(t1 in -7.0..7.0f64, t2 in -7.0..7.0f64, phi in -4.0..4.0f64) {
            let mut params = ProductStateParams::half_angle(t1, t2);
            params.phi1 = phi;
            let psi = prepare_product_state(&params).unwrap();
            prop_assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
            let env = partial_trace(&psi.density(), &[1]).unwrap();
            prop_assert!(env.entry(0, 1).norm() < 1e-14);
            prop_assert!(env.entry(1, 0).norm() < 1e-14);
        }
    }
}
