// Copyright 2026 The krausloom Authors
// SPDX-License-Identifier: Apache-2.0

//! Channel lattices compiled to the three gate kinds.
//!
//! Path qubits cannot be rotated directly; a rotation of path bit `k` is made
//! by swapping it into the polarization wire, rotating polarization
//! conditioned on the other path bits, and swapping back. The swap itself is
//! `CNOT(pol→k) · X_pol[k=1] · CNOT(pol→k)`. While bit `k` sits on the
//! polarization wire the polarization tag sits on wire `k`, which lets a
//! rotation depend on the tag.

use std::f64::consts::FRAC_PI_2;

use super::prepare::{pauli_preparation_circuit, preparation_circuit, system_params_for, ProductStateParams};
use super::{evolve, CircuitSpec, GatePlacement, Stage};
use crate::channels::{check_pauli_weights, kraus_from_branches, ChannelParams, KrausSet, SgadParams};
use crate::error::{check_probability, Error, Result};
use crate::gates::{bit, PathCondition, Register, U3Params, WireRole};
use crate::qmath::{partial_trace, CMatrix, DensityMatrix, PureState, UnitaryMatrix, STRUCTURAL_TOL};

#[derive(Debug, Clone, PartialEq)]
enum Step {
    Swap(usize),
    Gate(GatePlacement),
}

/// Accumulates mode-selective rotations on a register and compiles them.
#[derive(Debug, Clone)]
pub struct LatticeBuilder {
    register: Register,
    paths: Vec<usize>,
    pol: usize,
    steps: Vec<Step>,
}

impl LatticeBuilder {
    pub fn new(register: Register) -> Self {
        let paths = register.path_wires();
        let pol = register.polarization();
        Self {
            register,
            paths,
            pol,
            steps: Vec::new(),
        }
    }

    pub fn path_bits(&self) -> usize {
        self.paths.len()
    }

    /// Value of path bit `k` (register order) in path mode `mode`.
    fn mode_bit(&self, mode: usize, k: usize) -> bool {
        (mode >> (self.paths.len() - 1 - k)) & 1 == 1
    }

    fn swap(&mut self, k: usize) {
        // adjacent identical swaps cancel
        if self.steps.last() == Some(&Step::Swap(k)) {
            self.steps.pop();
        } else {
            self.steps.push(Step::Swap(k));
        }
    }

    fn path_x(&mut self, k: usize) {
        self.swap(k);
        self.steps.push(Step::Gate(GatePlacement::LocalU3 {
            params: U3Params::FLIP,
            wire: self.pol,
        }));
        self.swap(k);
    }

    fn path_cx(&mut self, control: usize, target: usize) -> Result<()> {
        self.swap(target);
        self.steps.push(Step::Gate(GatePlacement::PathConditionedU3 {
            params: U3Params::FLIP,
            target: self.pol,
            condition: PathCondition::new(vec![(self.paths[control], true)])?,
        }));
        self.swap(target);
        Ok(())
    }

    /// Rotates the pair of path modes `(a, b)` by `gate`, written in the basis
    /// `[a, b]`. With `tag = Some(t)` only the amplitudes whose polarization
    /// is `t` (false = H) are rotated.
    pub fn mode_rotation(&mut self, a: usize, b: usize, gate: U3Params, tag: Option<bool>) -> Result<()> {
        let bits = self.paths.len();
        if a == b || a >> bits != 0 || b >> bits != 0 {
            return Err(Error::InvalidArgument(format!(
                "modes {a} and {b} must be distinct and below {}",
                1 << bits
            )));
        }
        let differ: Vec<usize> = (0..bits).filter(|&k| self.mode_bit(a ^ b, k)).collect();
        let k = differ[0];
        // permutation taking a to a' (bit k clear) and b to a' with bit k set
        let flip_first = self.mode_bit(a, k);
        if flip_first {
            self.path_x(k);
        }
        for &m in &differ[1..] {
            self.path_cx(k, m)?;
        }
        let pivot = if flip_first { a ^ (1 << (bits - 1 - k)) } else { a };
        let mut condition: Vec<(usize, bool)> = (0..bits)
            .filter(|&j| j != k)
            .map(|j| (self.paths[j], self.mode_bit(pivot, j)))
            .collect();
        if let Some(t) = tag {
            condition.push((self.paths[k], t));
        }
        self.swap(k);
        self.steps.push(Step::Gate(GatePlacement::PathConditionedU3 {
            params: gate,
            target: self.pol,
            condition: PathCondition::new(condition)?,
        }));
        self.swap(k);
        for &m in differ[1..].iter().rev() {
            self.path_cx(k, m)?;
        }
        if flip_first {
            self.path_x(k);
        }
        Ok(())
    }

    /// Applies `gate` to path bit `k` alone.
    pub fn path_unitary(&mut self, k: usize, gate: U3Params) -> Result<()> {
        if k >= self.paths.len() {
            return Err(Error::InvalidArgument(format!("path bit {k} out of range")));
        }
        self.swap(k);
        self.steps.push(Step::Gate(GatePlacement::LocalU3 {
            params: gate,
            wire: self.pol,
        }));
        self.swap(k);
        Ok(())
    }

    /// Expands swaps into gates and emits the evolve stage.
    pub fn finish(self) -> Result<CircuitSpec> {
        self.finish_stage(Stage::Evolve)
    }

    pub fn finish_stage(self, stage: Stage) -> Result<CircuitSpec> {
        let mut spec = CircuitSpec::new(self.register.clone());
        for step in self.steps {
            match step {
                Step::Gate(g) => spec.push_layer(stage, vec![g])?,
                Step::Swap(k) => {
                    let wire = self.paths[k];
                    spec.push_gates(
                        stage,
                        [
                            GatePlacement::CnotPolPath {
                                control: self.pol,
                                target: wire,
                            },
                            GatePlacement::PathConditionedU3 {
                                params: U3Params::FLIP,
                                target: self.pol,
                                condition: PathCondition::new(vec![(wire, true)])?,
                            },
                            GatePlacement::CnotPolPath {
                                control: self.pol,
                                target: wire,
                            },
                        ],
                    )?;
                }
            }
        }
        Ok(spec)
    }
}

const M00: usize = 0b00;
const M01: usize = 0b01;
const M10: usize = 0b10;
const M11: usize = 0b11;
const H: Option<bool> = Some(false);
const V: Option<bool> = Some(true);

fn amplitude_angle(prob: f64) -> f64 {
    prob.sqrt().acos()
}

/// Beam splitter keeping `√(1-prob)` and transferring `e^{iφ}√prob`.
fn transfer(prob: f64, phase: f64) -> Result<U3Params> {
    U3Params::splitter((1.0 - prob).sqrt(), prob.sqrt(), phase)
}

/// Evolve-stage lattice of a channel. The channel register is used for
/// dephasing, GAD and SGAD; Pauli uses the four-wire register.
pub fn build_channel_lattice(params: &ChannelParams) -> Result<CircuitSpec> {
    params.validate()?;
    match *params {
        ChannelParams::Dephasing { p } => {
            let mut b = LatticeBuilder::new(Register::channel());
            b.mode_rotation(M10, M11, transfer(p, 0.0)?, None)?;
            let mut spec = b.finish()?;
            spec.set_control("theta3", 2.0 * amplitude_angle(p));
            Ok(spec)
        }
        ChannelParams::Gad { p, .. } => {
            let mut b = LatticeBuilder::new(Register::channel());
            // 10H → √(1-p)10 + √p 01 and 01V → √(1-p)01 + √p 10
            b.mode_rotation(M10, M01, transfer(p, 0.0)?, H)?;
            b.mode_rotation(M01, M10, transfer(p, 0.0)?, V)?;
            let mut spec = b.finish()?;
            spec.set_control("theta2", amplitude_angle(p));
            spec.set_control("theta3", amplitude_angle(p));
            Ok(spec)
        }
        ChannelParams::Sgad(s) => sgad_lattice(&s),
        ChannelParams::Pauli { p, q1, q2, q3 } => build_pauli_lattice(p, q1, q2, q3),
    }
}

fn sgad_lattice(s: &SgadParams) -> Result<CircuitSpec> {
    let mut b = LatticeBuilder::new(Register::channel());
    b.mode_rotation(M00, M11, transfer(s.alpha, -s.phi)?, H)?;
    b.mode_rotation(M10, M01, transfer(s.beta, 0.0)?, H)?;
    b.mode_rotation(M01, M10, transfer(s.mu, -s.lambda)?, V)?;
    b.mode_rotation(M11, M00, transfer(s.nu, 0.0)?, V)?;
    let mut spec = b.finish()?;
    for (name, prob) in [("theta1", s.alpha), ("theta2", s.beta), ("theta3", s.mu), ("theta4", s.nu)] {
        spec.set_control(name, amplitude_angle(prob));
    }
    spec.set_control("phi", s.phi);
    spec.set_control("lambda", s.lambda);
    Ok(spec)
}

/// Internal angles of the Pauli lattice: `p = cos²θ₁`, `q₁ = cos²θ₂`,
/// `q₂ = sin²θ₂ cos²θ₃`, `q₃ = sin²θ₂ sin²θ₃`, principal branches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliAngles {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
}

impl PauliAngles {
    pub fn solve(p: f64, q1: f64, q2: f64, q3: f64) -> Result<Self> {
        check_pauli_weights(p, [q1, q2, q3])?;
        let rest = q2 + q3;
        let theta3 = if rest <= 0.0 {
            0.0
        } else {
            amplitude_angle((q2 / rest).clamp(0.0, 1.0))
        };
        Ok(Self {
            theta1: amplitude_angle(p),
            theta2: amplitude_angle(q1),
            theta3,
        })
    }
}

/// Evolve-stage lattice realizing
/// `|000⟩ → √(1-p)|000⟩ + √p(√q₁|101⟩ + i√q₂|110⟩ + √q₃|011⟩)` and
/// `|100⟩ → √(1-p)|100⟩ + √p(√q₁|001⟩ - i√q₂|010⟩ - √q₃|111⟩)`.
pub fn build_pauli_lattice(p: f64, q1: f64, q2: f64, q3: f64) -> Result<CircuitSpec> {
    let angles = PauliAngles::solve(p, q1, q2, q3)?;
    let rest = (q2 + q3).clamp(0.0, 1.0);
    let split = if rest > 0.0 { (q3 / rest).clamp(0.0, 1.0) } else { 0.0 };
    let q1_out = 1.0 - q1.clamp(0.0, 1.0);

    let mut b = LatticeBuilder::new(Register::pauli());
    b.mode_rotation(0b000, 0b101, transfer(p, 0.0)?, None)?;
    b.mode_rotation(0b100, 0b001, transfer(p, 0.0)?, None)?;
    b.mode_rotation(0b101, 0b110, transfer(q1_out, FRAC_PI_2)?, None)?;
    b.mode_rotation(0b001, 0b010, transfer(q1_out, -FRAC_PI_2)?, None)?;
    b.mode_rotation(0b110, 0b011, transfer(split, -FRAC_PI_2)?, None)?;
    b.mode_rotation(0b010, 0b111, transfer(split, -FRAC_PI_2)?, None)?;
    let mut spec = b.finish()?;
    spec.set_control("theta1", angles.theta1);
    spec.set_control("theta2", angles.theta2);
    spec.set_control("theta3", angles.theta3);
    Ok(spec)
}

/// Path-space blocks `W_H`, `W_V` of a polarization-block-diagonal evolve
/// stage: `L = W_H ⊗ |H⟩⟨H| + W_V ⊗ |V⟩⟨V|`.
pub fn polarization_branches(spec: &CircuitSpec) -> Result<[UnitaryMatrix; 2]> {
    let register = spec.register();
    let n = register.len();
    let pol = register.polarization();
    let op = spec.stage_operator(Stage::Evolve)?;
    let l = op.matrix();
    let path_dim = register.dim() / 2;
    // full index of path mode x with polarization t
    let embed = |x: usize, t: usize| -> usize {
        let low = n - 1 - pol;
        let hi = x >> low;
        let lo = x & ((1 << low) - 1);
        (hi << (low + 1)) | (t << low) | lo
    };
    let mut leak: f64 = 0.0;
    for row in 0..register.dim() {
        for col in 0..register.dim() {
            if bit(row, pol, n) != bit(col, pol, n) {
                leak = leak.max(l[(row, col)].norm());
            }
        }
    }
    if leak > STRUCTURAL_TOL {
        return Err(Error::InvalidWiring(format!(
            "evolve stage mixes polarization tags (leak {leak:.3e})"
        )));
    }
    let block = |t: usize| {
        UnitaryMatrix::new(CMatrix::from_fn(path_dim, path_dim, |x, y| l[(embed(x, t), embed(y, t))]))
    };
    Ok([block(0)?, block(1)?])
}

/// Kraus set of a lattice whose environment starts in the mixture `gamma`;
/// environment basis state `j` enters with polarization tag `j & 1`.
pub fn lattice_kraus(spec: &CircuitSpec, gamma: &[f64]) -> Result<KrausSet> {
    let roles = spec.register().roles();
    let system = roles.iter().filter(|r| **r == WireRole::SystemPath).count();
    let env = spec.register().path_wires().len() - system;
    let path_order_ok = spec
        .register()
        .path_wires()
        .iter()
        .enumerate()
        .all(|(k, &w)| (roles[w] == WireRole::SystemPath) == (k < system));
    if system == 0 || env == 0 || !path_order_ok {
        return Err(Error::InvalidWiring(
            "Kraus extraction needs system path wires followed by environment path wires".into(),
        ));
    }
    if gamma.len() != 1 << env {
        return Err(Error::DimensionMismatch {
            expected: 1 << env,
            actual: gamma.len(),
        });
    }
    let [wh, wv] = polarization_branches(spec)?;
    let branches: Vec<UnitaryMatrix> = (0..gamma.len())
        .map(|j| if j & 1 == 0 { wh.clone() } else { wv.clone() })
        .collect();
    kraus_from_branches(&branches, gamma)
}

/// Full register input for a channel: the product state (or the Pauli input)
/// carrying `system`, with the environment weight the channel expects.
pub fn channel_input_state(params: &ChannelParams, system: &PureState) -> Result<PureState> {
    match params {
        ChannelParams::Pauli { .. } => {
            let spec = pauli_preparation_circuit(system_params_for(system)?)?;
            evolve(&PureState::basis(0, vec![2; 4])?, &spec, Stage::Prepare)
        }
        _ => {
            let alpha2_sq = check_probability("alpha2_sq", params.alpha2_sq())?;
            let spec = preparation_circuit(&ProductStateParams::for_system(system, alpha2_sq)?)?;
            evolve(&PureState::basis(0, vec![2; 3])?, &spec, Stage::Prepare)
        }
    }
}

/// Reduced state of the system path wires.
pub fn reduced_system_state(state: &PureState, register: &Register) -> Result<DensityMatrix> {
    let keep: Vec<usize> = (0..register.len())
        .filter(|&w| register.roles()[w] == WireRole::SystemPath)
        .collect();
    partial_trace(&state.density(), &keep)
}
