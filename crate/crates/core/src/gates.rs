// Copyright 2026 The krausloom Authors
// SPDX-License-Identifier: Apache-2.0

//! Elementary gates of the interferometer and their embedding on a register.
//!
//! A register is a list of qubit wires: one polarization wire and one or more
//! path wires. Wire 0 is the most significant bit of a basis index.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};
use crate::qmath::{c, CMatrix, UnitaryMatrix, C64, ONE, ZERO};

const TAU: f64 = 2.0 * PI;
/// `u3` is 4π-periodic in θ; reducing modulo 2π would flip the sign of the gate.
const THETA_PERIOD: f64 = 4.0 * PI;
const SNAP: f64 = 4.0 * f64::EPSILON;

/// Parameters `(θ, φ, λ)` of the U3 gate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct U3Params {
    pub theta: f64,
    pub phi: f64,
    pub lambda: f64,
}

impl U3Params {
    /// `U(0, 0, π) = diag(1, -1)`.
    pub const PHASE_FLIP: U3Params = U3Params {
        theta: 0.0,
        phi: 0.0,
        lambda: PI,
    };
    /// `U(π, 0, π) = X`; swaps H and V (or the two paths after a CNOT).
    pub const FLIP: U3Params = U3Params {
        theta: PI,
        phi: 0.0,
        lambda: PI,
    };

    /// Range-reduces θ to `[0, 4π)` and φ, λ to `[0, 2π)`.
    pub fn new(theta: f64, phi: f64, lambda: f64) -> Result<Self> {
        Ok(Self {
            theta: reduce(check_finite("theta", theta)?, THETA_PERIOD),
            phi: reduce(check_finite("phi", phi)?, TAU),
            lambda: reduce(check_finite("lambda", lambda)?, TAU),
        })
    }

    /// Parameters of `u3(self)†`.
    pub fn dagger(&self) -> U3Params {
        Self {
            theta: reduce(-self.theta, THETA_PERIOD),
            phi: reduce(-self.lambda, TAU),
            lambda: reduce(-self.phi, TAU),
        }
    }

    /// Beam-splitter gate that keeps amplitude `stay` on `|0⟩` and sends
    /// `transfer · e^{iφ}` to `|1⟩` (`stay² + transfer² = 1`, both ≥ 0).
    /// The diagonal of the resulting matrix is `(stay, stay)`.
    pub fn splitter(stay: f64, transfer: f64, phase: f64) -> Result<Self> {
        Self::new(2.0 * transfer.atan2(stay), phase, -phase)
    }
}

fn reduce(x: f64, period: f64) -> f64 {
    let y = x.rem_euclid(period);
    // rem_euclid may round up to exactly `period`
    if y >= period {
        0.0
    } else {
        y
    }
}

fn snap(x: f64) -> f64 {
    if x.abs() < SNAP {
        0.0
    } else {
        x
    }
}

fn phase(angle: f64) -> C64 {
    c(snap(angle.cos()), snap(angle.sin()))
}

/// `[[cos(θ/2), -e^{iλ} sin(θ/2)], [e^{iφ} sin(θ/2), e^{i(λ+φ)} cos(θ/2)]]`.
pub fn u3(p: &U3Params) -> UnitaryMatrix {
    let cos = snap((p.theta / 2.0).cos());
    let sin = snap((p.theta / 2.0).sin());
    let m = CMatrix::from_row_slice(
        2,
        2,
        &[
            c(cos, 0.0),
            -phase(p.lambda) * sin,
            phase(p.phi) * sin,
            phase(p.lambda + p.phi) * cos,
        ],
    );
    UnitaryMatrix::from_matrix_unchecked(m)
}

/// What a wire of the register encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WireRole {
    SystemPath,
    EnvironmentPath,
    ReservoirPath,
    Polarization,
}

impl WireRole {
    pub fn is_path(self) -> bool {
        !matches!(self, WireRole::Polarization)
    }
}

/// A wire together with its role.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WireIndex {
    pub index: usize,
    pub role: WireRole,
}

/// Largest register accepted (dense matrices are `2ⁿ × 2ⁿ`).
pub const MAX_WIRES: usize = 10;

/// Ordered wires of a register; exactly one carries polarization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<WireRole>", into = "Vec<WireRole>")]
pub struct Register {
    roles: Vec<WireRole>,
}

impl Register {
    pub fn new(roles: Vec<WireRole>) -> Result<Self> {
        let pol = roles.iter().filter(|r| !r.is_path()).count();
        if pol != 1 {
            return Err(Error::InvalidWiring(format!(
                "a register needs exactly one polarization wire, found {pol}"
            )));
        }
        if roles.len() < 2 || roles.len() > MAX_WIRES {
            return Err(Error::InvalidWiring(format!(
                "register size {} outside 2..={MAX_WIRES}",
                roles.len()
            )));
        }
        Ok(Self { roles })
    }

    /// System path, environment path, polarization.
    pub fn channel() -> Self {
        Self {
            roles: vec![
                WireRole::SystemPath,
                WireRole::EnvironmentPath,
                WireRole::Polarization,
            ],
        }
    }

    /// System path, two reservoir paths, polarization.
    pub fn pauli() -> Self {
        Self {
            roles: vec![
                WireRole::SystemPath,
                WireRole::ReservoirPath,
                WireRole::ReservoirPath,
                WireRole::Polarization,
            ],
        }
    }

    pub fn len(&self) -> usize {
        self.roles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roles.is_empty()
    }

    pub fn dim(&self) -> usize {
        1 << self.roles.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        vec![2; self.roles.len()]
    }

    pub fn roles(&self) -> &[WireRole] {
        &self.roles
    }

    pub fn polarization(&self) -> usize {
        self.roles
            .iter()
            .position(|r| !r.is_path())
            .expect("register invariant: one polarization wire")
    }

    pub fn path_wires(&self) -> Vec<usize> {
        (0..self.roles.len()).filter(|&w| self.roles[w].is_path()).collect()
    }

    pub fn wire(&self, index: usize) -> Result<WireIndex> {
        self.roles
            .get(index)
            .map(|&role| WireIndex { index, role })
            .ok_or_else(|| {
                Error::InvalidArgument(format!("wire {index} out of range for {} wires", self.len()))
            })
    }

    pub fn polarization_wire(&self) -> WireIndex {
        WireIndex {
            index: self.polarization(),
            role: WireRole::Polarization,
        }
    }
}

impl TryFrom<Vec<WireRole>> for Register {
    type Error = Error;
    fn try_from(roles: Vec<WireRole>) -> Result<Self> {
        Register::new(roles)
    }
}

impl From<Register> for Vec<WireRole> {
    fn from(r: Register) -> Self {
        r.roles
    }
}

/// Value of wire `wire` in basis index `x` of an `n`-wire register.
#[inline]
pub(crate) fn bit(x: usize, wire: usize, n: usize) -> usize {
    (x >> (n - 1 - wire)) & 1
}

#[inline]
pub(crate) fn flip(x: usize, wire: usize, n: usize) -> usize {
    x ^ (1 << (n - 1 - wire))
}

/// Required values of a subset of path wires.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PathCondition {
    bits: Vec<(usize, bool)>,
}

impl PathCondition {
    pub fn new(mut bits: Vec<(usize, bool)>) -> Result<Self> {
        bits.sort_unstable();
        if bits.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidWiring("a wire appears twice in a path condition".into()));
        }
        Ok(Self { bits })
    }

    /// Parses one character per path wire (register order): `0`, `1`, or `-` for "any".
    pub fn parse(pattern: &str, register: &Register) -> Result<Self> {
        let paths = register.path_wires();
        let chars: Vec<char> = pattern.chars().collect();
        if chars.len() != paths.len() {
            return Err(Error::Parse(format!(
                "condition `{pattern}` must have one character per path wire ({})",
                paths.len()
            )));
        }
        let mut bits = Vec::new();
        for (&wire, ch) in paths.iter().zip(chars) {
            match ch {
                '0' => bits.push((wire, false)),
                '1' => bits.push((wire, true)),
                '-' | '*' | 'x' => {}
                other => return Err(Error::Parse(format!("bad condition character `{other}`"))),
            }
        }
        Self::new(bits)
    }

    /// Inverse of [`PathCondition::parse`].
    pub fn pattern(&self, register: &Register) -> String {
        register
            .path_wires()
            .iter()
            .map(|w| match self.bits.iter().find(|(wire, _)| wire == w) {
                Some((_, true)) => '1',
                Some((_, false)) => '0',
                None => '-',
            })
            .collect()
    }

    pub fn bits(&self) -> &[(usize, bool)] {
        &self.bits
    }

    pub fn wires(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().map(|&(w, _)| w)
    }

    pub fn matches(&self, x: usize, n: usize) -> bool {
        self.bits.iter().all(|&(w, v)| (bit(x, w, n) == 1) == v)
    }

    fn check(&self, register: &Register) -> Result<()> {
        for w in self.wires() {
            match register.roles().get(w) {
                None => {
                    return Err(Error::InvalidArgument(format!("condition wire {w} out of range")))
                }
                Some(role) if !role.is_path() => {
                    return Err(Error::InvalidWiring(format!(
                        "condition addresses polarization wire {w}"
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }
}

impl fmt::Display for PathCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .bits
            .iter()
            .map(|&(w, v)| format!("w{w}={}", u8::from(v)))
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

fn check_two_by_two(gate: &UnitaryMatrix) -> Result<()> {
    if gate.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: gate.dim(),
        });
    }
    Ok(())
}

fn check_wire(wire: usize, n: usize) -> Result<()> {
    if n == 0 || n > MAX_WIRES {
        return Err(Error::InvalidArgument(format!("register size {n} outside 1..={MAX_WIRES}")));
    }
    if wire >= n {
        return Err(Error::InvalidArgument(format!("wire {wire} out of range for {n} wires")));
    }
    Ok(())
}

/// Builds the `2ⁿ × 2ⁿ` operator that applies `gate` to `target` on every
/// basis state accepted by `applies`.
fn conditioned_single(
    gate: &CMatrix,
    target: usize,
    n: usize,
    applies: impl Fn(usize) -> bool,
) -> CMatrix {
    let dim = 1 << n;
    let mut out = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        if !applies(col) {
            out[(col, col)] = ONE;
            continue;
        }
        let b = bit(col, target, n);
        let partner = flip(col, target, n);
        // column `col` of the gate acting on the target bit
        let (same, other) = (gate[(b, b)], gate[(1 - b, b)]);
        if same != ZERO {
            out[(col, col)] = same;
        }
        if other != ZERO {
            out[(partner, col)] = other;
        }
    }
    out
}

/// `gate` on `wire`, identity elsewhere.
pub fn embed(gate: &UnitaryMatrix, wire: usize, n: usize) -> Result<UnitaryMatrix> {
    check_two_by_two(gate)?;
    check_wire(wire, n)?;
    Ok(UnitaryMatrix::from_matrix_unchecked(conditioned_single(
        gate.matrix(),
        wire,
        n,
        |_| true,
    )))
}

/// Polarizing beam splitter: flips path qubit `target` when polarization is V.
pub fn cnot_pol_path(control: WireIndex, target: WireIndex, n: usize) -> Result<UnitaryMatrix> {
    check_wire(control.index, n)?;
    check_wire(target.index, n)?;
    if control.role != WireRole::Polarization {
        return Err(Error::InvalidWiring(format!(
            "CNOT control wire {} is {:?}, expected polarization",
            control.index, control.role
        )));
    }
    if !target.role.is_path() || control.index == target.index {
        return Err(Error::InvalidWiring(format!(
            "CNOT target wire {} must be a path wire distinct from the control",
            target.index
        )));
    }
    let dim = 1 << n;
    let mut out = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let row = if bit(col, control.index, n) == 1 {
            flip(col, target.index, n)
        } else {
            col
        };
        out[(row, col)] = ONE;
    }
    Ok(UnitaryMatrix::from_matrix_unchecked(out))
}

/// Applies `gate` to the polarization wire only on path basis states that
/// satisfy `condition`.
pub fn controlled_on_path(
    gate: &UnitaryMatrix,
    condition: &PathCondition,
    target: WireIndex,
    register: &Register,
) -> Result<UnitaryMatrix> {
    check_two_by_two(gate)?;
    condition.check(register)?;
    let actual = register.wire(target.index)?;
    if actual.role != WireRole::Polarization || target.role != WireRole::Polarization {
        return Err(Error::InvalidWiring(format!(
            "path-conditioned gate must target the polarization wire, got wire {}",
            target.index
        )));
    }
    let n = register.len();
    Ok(UnitaryMatrix::from_matrix_unchecked(conditioned_single(
        gate.matrix(),
        target.index,
        n,
        |x| condition.matches(x, n),
    )))
}
