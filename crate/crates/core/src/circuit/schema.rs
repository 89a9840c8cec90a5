// Copyright 2026 The krausloom Authors
// SPDX-License-Identifier: Apache-2.0

//! Structured-text form of a [`CircuitSpec`].
//!
//! ```json
//! {
//!   "register": ["system-path", "environment-path", "polarization"],
//!   "layers": [[{"kind": "local-u3", "theta": 1.0, "phi": 0.0, "lambda": 3.14159, "wires": [2]}],
//!              [{"kind": "cnot-pol-path", "wires": [2, 0]}],
//!              [{"kind": "path-conditioned-u3", "theta": 3.14159, "phi": 0.0, "lambda": 3.14159,
//!                "wires": [2], "condition": "1-"}]],
//!   "stages": ["prepare", "prepare", "evolve"],
//!   "controls": {"theta3": 0.5}
//! }
//! ```
//!
//! `wires` is `[wire]` for `local-u3`, `[control, target]` for
//! `cnot-pol-path` and `[target]` for `path-conditioned-u3`. A condition has
//! one character per path wire in register order: `0`, `1` or `-`. `stages`
//! is optional and defaults to `evolve` for every layer.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{CircuitSpec, GatePlacement, Stage};
use crate::error::{Error, Result};
use crate::gates::{PathCondition, Register, U3Params, WireRole};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateRecord {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda: Option<f64>,
    wires: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    condition: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitRecord {
    register: Vec<WireRole>,
    layers: Vec<Vec<GateRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    stages: Option<Vec<Stage>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    controls: BTreeMap<String, f64>,
}

fn record_of(gate: &GatePlacement, register: &Register) -> GateRecord {
    let angles = |p: &U3Params| (Some(p.theta), Some(p.phi), Some(p.lambda));
    match gate {
        GatePlacement::LocalU3 { params, wire } => {
            let (theta, phi, lambda) = angles(params);
            GateRecord {
                kind: "local-u3".into(),
                theta,
                phi,
                lambda,
                wires: vec![*wire],
                condition: None,
            }
        }
        GatePlacement::CnotPolPath { control, target } => GateRecord {
            kind: "cnot-pol-path".into(),
            theta: None,
            phi: None,
            lambda: None,
            wires: vec![*control, *target],
            condition: None,
        },
        GatePlacement::PathConditionedU3 {
            params,
            target,
            condition,
        } => {
            let (theta, phi, lambda) = angles(params);
            GateRecord {
                kind: "path-conditioned-u3".into(),
                theta,
                phi,
                lambda,
                wires: vec![*target],
                condition: Some(condition.pattern(register)),
            }
        }
    }
}

fn arity(kind: &str, wires: &[usize], expected: usize) -> Result<()> {
    if wires.len() != expected {
        return Err(Error::InvalidWiring(format!(
            "`{kind}` takes {expected} wire(s), got {}",
            wires.len()
        )));
    }
    Ok(())
}

fn placement_of(record: &GateRecord, register: &Register) -> Result<GatePlacement> {
    let params = || -> Result<U3Params> {
        let theta = record
            .theta
            .ok_or_else(|| Error::Parse(format!("`{}` needs theta", record.kind)))?;
        U3Params::new(theta, record.phi.unwrap_or(0.0), record.lambda.unwrap_or(0.0))
    };
    let kind = record.kind.as_str();
    let gate = match kind {
        "local-u3" => {
            arity(kind, &record.wires, 1)?;
            GatePlacement::LocalU3 {
                params: params()?,
                wire: record.wires[0],
            }
        }
        "cnot-pol-path" => {
            arity(kind, &record.wires, 2)?;
            GatePlacement::CnotPolPath {
                control: record.wires[0],
                target: record.wires[1],
            }
        }
        "path-conditioned-u3" => {
            arity(kind, &record.wires, 1)?;
            let pattern = record
                .condition
                .as_deref()
                .ok_or_else(|| Error::Parse("`path-conditioned-u3` needs a condition".into()))?;
            GatePlacement::PathConditionedU3 {
                params: params()?,
                target: record.wires[0],
                condition: PathCondition::parse(pattern, register)?,
            }
        }
        other => return Err(Error::Parse(format!("unknown gate kind `{other}`"))),
    };
    if kind != "path-conditioned-u3" && record.condition.is_some() {
        return Err(Error::Parse(format!("`{kind}` does not take a condition")));
    }
    Ok(gate)
}

impl CircuitSpec {
    pub fn to_json(&self) -> String {
        let record = CircuitRecord {
            register: self.register.roles().to_vec(),
            layers: self
                .layers
                .iter()
                .map(|l| l.gates.iter().map(|g| record_of(g, &self.register)).collect())
                .collect(),
            stages: Some(self.layers.iter().map(|l| l.stage).collect()),
            controls: self.controls.clone(),
        };
        serde_json::to_string_pretty(&record).expect("circuit records always serialize")
    }

    /// Parses and validates a circuit, including unitarity of the composition.
    pub fn from_json(text: &str) -> Result<Self> {
        let record: CircuitRecord =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let register = Register::new(record.register)?;
        let stages = match record.stages {
            Some(s) if s.len() != record.layers.len() => {
                return Err(Error::Parse(format!(
                    "{} stages for {} layers",
                    s.len(),
                    record.layers.len()
                )))
            }
            Some(s) => s,
            None => vec![Stage::Evolve; record.layers.len()],
        };
        let mut spec = CircuitSpec::new(register);
        for (layer, stage) in record.layers.iter().zip(stages) {
            let gates = layer
                .iter()
                .map(|g| placement_of(g, &spec.register))
                .collect::<Result<Vec<_>>>()?;
            spec.push_layer(stage, gates)?;
        }
        spec.controls = record.controls;
        spec.validate()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{ChannelParams, SgadParams};
    use crate::circuit::{build_channel_lattice, preparation_circuit, ProductStateParams};

    #[test]
    fn lattices_round_trip_through_json() {
        let prep = preparation_circuit(&ProductStateParams::half_angle(0.4, 1.3)).unwrap();
        let lattice = build_channel_lattice(&ChannelParams::Sgad(SgadParams {
            alpha: 0.1,
            beta: 0.2,
            mu: 0.3,
            nu: 0.4,
            phi: 0.5,
            lambda: -0.6,
            alpha2_sq: 0.7,
        }))
        .unwrap();
        let spec = prep.compose(&lattice).unwrap();
        let back = CircuitSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn minimal_document_defaults_to_evolve() {
        let text = r#"{"register": ["system-path", "polarization"],
                       "layers": [[{"kind": "cnot-pol-path", "wires": [1, 0]}]]}"#;
        let spec = CircuitSpec::from_json(text).unwrap();
        assert_eq!(spec.layers()[0].stage, Stage::Evolve);
    }

    #[test]
    fn malformed_documents_are_rejected() {
        let cases = [
            // two polarization wires
            r#"{"register": ["polarization", "polarization"], "layers": []}"#,
            // cnot controlled by a path wire
            r#"{"register": ["system-path", "environment-path", "polarization"],
                "layers": [[{"kind": "cnot-pol-path", "wires": [0, 1]}]]}"#,
            // condition on the wrong number of path wires
            r#"{"register": ["system-path", "environment-path", "polarization"],
                "layers": [[{"kind": "path-conditioned-u3", "theta": 1, "wires": [2], "condition": "1"}]]}"#,
            // unknown kind
            r#"{"register": ["system-path", "polarization"], "layers": [[{"kind": "toffoli", "wires": [0]}]]}"#,
            // missing theta
            r#"{"register": ["system-path", "polarization"], "layers": [[{"kind": "local-u3", "wires": [1]}]]}"#,
            // stage count mismatch
            r#"{"register": ["system-path", "polarization"], "layers": [], "stages": ["evolve"]}"#,
            "not json",
        ];
        for text in cases {
            assert!(CircuitSpec::from_json(text).is_err(), "accepted: {text}");
        }
    }
}
