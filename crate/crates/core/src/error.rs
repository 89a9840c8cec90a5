// Copyright 2026 The krausloom Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("matrix is not unitary (residual {0:.3e})")]
    NotUnitary(f64),

    #[error("invalid wiring: {0}")]
    InvalidWiring(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("parameter `{name}` out of range: {value} ({reason})")]
    OutOfRange {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() || !(0.0..=1.0).contains(&value) {
        return Err(Error::OutOfRange {
            name,
            value,
            reason: "must lie in [0, 1]",
        });
    }
    Ok(value)
}

pub(crate) fn check_finite(name: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() {
        return Err(Error::OutOfRange {
            name,
            value,
            reason: "must be finite",
        });
    }
    Ok(value)
}
