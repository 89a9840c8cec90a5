// Copyright 2026 The krausloom Authors
// SPDX-License-Identifier: Apache-2.0

//! The programmable interferometer: gate placements, layered circuits and
//! state evolution.

mod experiment;
mod lattice;
mod prepare;
mod schema;

pub use experiment::{
    gad_experiment, gad_experiment_output, projection_circuit, projection_probability, published_gad_matrix,
    EXPERIMENT_CONVENTION, PUBLISHED_GAD_MATRIX, PUBLISHED_GAD_THETA,
};
pub use lattice::{
    build_channel_lattice, build_pauli_lattice, channel_input_state, lattice_kraus,
    polarization_branches, reduced_system_state, LatticeBuilder, PauliAngles,
};
pub use prepare::{
    pauli_preparation_circuit, prepare_product_state, preparation_circuit, system_params_for,
    thermal_weights, AngleConvention, BathTemperature, ProductStateParams,
};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{cnot_pol_path, controlled_on_path, embed, u3, PathCondition, Register, U3Params};
use crate::qmath::{PureState, UnitaryMatrix, C64, STRUCTURAL_TOL};

/// One gate on the register.
#[derive(Debug, Clone, PartialEq)]
pub enum GatePlacement {
    /// `u3` on a single wire.
    LocalU3 { params: U3Params, wire: usize },
    /// Polarizing beam splitter: polarization controls a path flip.
    CnotPolPath { control: usize, target: usize },
    /// `u3` on polarization, applied only where the path wires match.
    PathConditionedU3 {
        params: U3Params,
        target: usize,
        condition: PathCondition,
    },
}

impl GatePlacement {
    /// Wires touched, including the wires read by a path condition.
    pub fn wires(&self) -> Vec<usize> {
        match self {
            Self::LocalU3 { wire, .. } => vec![*wire],
            Self::CnotPolPath { control, target } => vec![*control, *target],
            Self::PathConditionedU3 {
                target, condition, ..
            } => std::iter::once(*target).chain(condition.wires()).collect(),
        }
    }

    pub fn params(&self) -> Option<&U3Params> {
        match self {
            Self::LocalU3 { params, .. } | Self::PathConditionedU3 { params, .. } => Some(params),
            Self::CnotPolPath { .. } => None,
        }
    }

    /// Full-register operator.
    pub fn operator(&self, register: &Register) -> Result<UnitaryMatrix> {
        let n = register.len();
        match self {
            Self::LocalU3 { params, wire } => {
                register.wire(*wire)?;
                embed(&u3(params), *wire, n)
            }
            Self::CnotPolPath { control, target } => {
                cnot_pol_path(register.wire(*control)?, register.wire(*target)?, n)
            }
            Self::PathConditionedU3 {
                params,
                target,
                condition,
            } => controlled_on_path(&u3(params), condition, register.wire(*target)?, register),
        }
    }
}

/// Where a layer sits in the experiment. Layers of a circuit never go back
/// to an earlier stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Prepare,
    Evolve,
    Project,
}

impl std::str::FromStr for Stage {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prepare" => Ok(Self::Prepare),
            "evolve" => Ok(Self::Evolve),
            "project" => Ok(Self::Project),
            other => Err(Error::Parse(format!("unknown stage `{other}`"))),
        }
    }
}

/// Gates on disjoint wires, applied together.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub stage: Stage,
    pub gates: Vec<GatePlacement>,
}

/// Ordered layers of gate placements on a register.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitSpec {
    register: Register,
    layers: Vec<Layer>,
    controls: BTreeMap<String, f64>,
}

impl CircuitSpec {
    pub fn new(register: Register) -> Self {
        Self {
            register,
            layers: Vec::new(),
            controls: BTreeMap::new(),
        }
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Named figure-level angles the lattice was configured from.
    pub fn controls(&self) -> &BTreeMap<String, f64> {
        &self.controls
    }

    pub fn control(&self, name: &str) -> Option<f64> {
        self.controls.get(name).copied()
    }

    pub fn set_control(&mut self, name: &str, value: f64) {
        self.controls.insert(name.to_string(), value);
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(|l| l.gates.len()).sum()
    }

    /// Appends a layer after checking wiring and stage order.
    pub fn push_layer(&mut self, stage: Stage, gates: Vec<GatePlacement>) -> Result<()> {
        if let Some(last) = self.layers.last() {
            if stage < last.stage {
                return Err(Error::InvalidWiring(format!(
                    "{stage:?} layer cannot follow a {:?} layer",
                    last.stage
                )));
            }
        }
        let mut used = vec![false; self.register.len()];
        for gate in &gates {
            // builds the operator once to validate roles and conditions
            gate.operator(&self.register)?;
            for w in gate.wires() {
                if std::mem::replace(&mut used[w], true) {
                    return Err(Error::InvalidWiring(format!(
                        "wire {w} is used twice in one layer"
                    )));
                }
            }
        }
        self.layers.push(Layer { stage, gates });
        Ok(())
    }

    /// One gate per layer.
    pub fn push_gates(&mut self, stage: Stage, gates: impl IntoIterator<Item = GatePlacement>) -> Result<()> {
        for gate in gates {
            self.push_layer(stage, vec![gate])?;
        }
        Ok(())
    }

    /// Layers of `self` followed by layers of `other`; controls are merged.
    pub fn compose(&self, other: &CircuitSpec) -> Result<CircuitSpec> {
        if self.register != other.register {
            return Err(Error::InvalidWiring("cannot compose circuits on different registers".into()));
        }
        let mut out = self.clone();
        for layer in &other.layers {
            out.push_layer(layer.stage, layer.gates.clone())?;
        }
        out.controls.extend(other.controls.clone());
        Ok(out)
    }

    pub fn layer_operator(&self, index: usize) -> Result<UnitaryMatrix> {
        let layer = self
            .layers
            .get(index)
            .ok_or_else(|| Error::InvalidArgument(format!("layer {index} out of range")))?;
        let mut op = UnitaryMatrix::identity(self.register.dim());
        for gate in &layer.gates {
            op = gate.operator(&self.register)?.then_after(&op);
        }
        Ok(op)
    }

    fn operator_where(&self, keep: impl Fn(Stage) -> bool) -> Result<UnitaryMatrix> {
        let mut op = UnitaryMatrix::identity(self.register.dim());
        for (k, layer) in self.layers.iter().enumerate() {
            if keep(layer.stage) {
                op = self.layer_operator(k)?.then_after(&op);
            }
        }
        Ok(op)
    }

    /// Product of the layers tagged `stage`.
    pub fn stage_operator(&self, stage: Stage) -> Result<UnitaryMatrix> {
        self.operator_where(|s| s == stage)
    }

    /// Product of all layers up to and including `through`.
    pub fn operator_through(&self, through: Stage) -> Result<UnitaryMatrix> {
        self.operator_where(|s| s <= through)
    }

    /// Checks that the composed circuit is unitary within [`STRUCTURAL_TOL`].
    pub fn validate(&self) -> Result<()> {
        let residual = self.operator_through(Stage::Project)?.residual();
        if residual > STRUCTURAL_TOL {
            return Err(Error::NotUnitary(residual));
        }
        Ok(())
    }
}

/// Applies every layer whose stage is at most `through`.
pub fn evolve(state: &PureState, circuit: &CircuitSpec, through: Stage) -> Result<PureState> {
    if state.dim() != circuit.register.dim() {
        return Err(Error::DimensionMismatch {
            expected: circuit.register.dim(),
            actual: state.dim(),
        });
    }
    let mut out = state.clone();
    for layer in circuit.layers.iter().filter(|l| l.stage <= through) {
        for gate in &layer.gates {
            out = gate.operator(&circuit.register)?.apply(&out)?;
        }
    }
    Ok(out)
}

/// H and V amplitudes of one path mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePolarization {
    pub h: C64,
    pub v: C64,
}

impl ModePolarization {
    pub fn norm_sqr(&self) -> f64 {
        self.h.norm_sqr() + self.v.norm_sqr()
    }
}

/// Splits a state whose last factor is polarization into the per-path-mode
/// polarization vectors; entry `i` belongs to path basis string `i`.
pub fn output_mode_decomposition(state: &PureState) -> Result<Vec<ModePolarization>> {
    if state.dims().last() != Some(&2) {
        return Err(Error::InvalidArgument(
            "the last factor of the state must be the polarization qubit".into(),
        ));
    }
    let amps = state.amplitudes();
    Ok((0..state.dim() / 2)
        .map(|i| ModePolarization {
            h: amps[2 * i],
            v: amps[2 * i + 1],
        })
        .collect())
}

/// Binary label of path mode `index` over `path_bits` wires.
pub fn mode_label(index: usize, path_bits: usize) -> String {
    (0..path_bits)
        .map(|k| if (index >> (path_bits - 1 - k)) & 1 == 1 { '1' } else { '0' })
        .collect()
}
