// Copyright 2026 The krausloom Authors
// SPDX-License-Identifier: Apache-2.0

//! Simulator for a programmable linear-optical interferometer.
//!
//! Qubits are encoded in photon paths with polarization as an ancilla.
//! The crate prepares system–environment product states, evolves them
//! through gate lattices that realize dephasing, generalized amplitude
//! damping, squeezed generalized amplitude damping and Pauli channels,
//! extracts the matching Kraus operators, and reconstructs two-qubit states
//! from the sixteen-setting projection protocol.
//!
//! Wire 0 is the most significant bit of every basis index.

pub mod channels;
pub mod circuit;
pub mod error;
pub mod gates;
pub mod qmath;
pub mod tomography;

pub use channels::{kraus_apply, ChannelKind, ChannelParams, KrausSet, SgadParams};
pub use circuit::{AngleConvention, CircuitSpec, GatePlacement, ProductStateParams, Stage};
pub use error::{Error, Result};
pub use gates::{Register, U3Params, WireRole};
pub use qmath::{fidelity, partial_trace, DensityMatrix, PureState, UnitaryMatrix};
pub use tomography::{CountRecord, TomographySetting};
