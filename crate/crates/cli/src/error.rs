// Copyright 2026 The krausloom Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::path::Path;

/// Failure classes, each with its own exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad flags, config or input files. Exit code 2.
    Validation(String),
    /// The lattice and Kraus paths disagree. Exit code 3.
    Consistency(String),
    /// Reading or writing a file failed. Exit code 4.
    Io(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            Self::Validation(_) => 2,
            Self::Consistency(_) => 3,
            Self::Io(_) => 4,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self::Io(format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Validation(m) => write!(f, "{m}"),
            Self::Consistency(m) => write!(f, "consistency check failed: {m}"),
            Self::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<krausloom::Error> for CliError {
    fn from(e: krausloom::Error) -> Self {
        Self::Validation(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
