// Copyright 2026 The krausloom Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use krausloom::channels::ChannelKind;
use krausloom::circuit::{AngleConvention, Stage};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "krausloom", version, about = "Linear-optical quantum channel simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Prepare,
    Channel,
    Evolve,
    Tomography,
    ReproduceGad,
    ChannelDump,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Prepare => "prepare",
            Self::Channel => "channel",
            Self::Evolve => "evolve",
            Self::Tomography => "tomography",
            Self::ReproduceGad => "reproduce-gad",
            Self::ChannelDump => "channel-dump",
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Prepare the system–environment product state.
    Prepare(RunArgs),
    /// Apply a channel through its lattice and through its Kraus operators.
    Channel(RunArgs),
    /// Evolve the register through a circuit file or a configured lattice.
    Evolve(RunArgs),
    /// Simulate the sixteen-setting measurement and reconstruct the state.
    Tomography(RunArgs),
    /// Compare the ideal GAD output with the published reconstruction.
    ReproduceGad(RunArgs),
    /// Print the Kraus operators and lattice of a channel.
    ChannelDump(RunArgs),
}

impl Command {
    pub fn split(self) -> (CommandKind, RunArgs) {
        match self {
            Self::Prepare(a) => (CommandKind::Prepare, a),
            Self::Channel(a) => (CommandKind::Channel, a),
            Self::Evolve(a) => (CommandKind::Evolve, a),
            Self::Tomography(a) => (CommandKind::Tomography, a),
            Self::ReproduceGad(a) => (CommandKind::ReproduceGad, a),
            Self::ChannelDump(a) => (CommandKind::ChannelDump, a),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Json => "json",
            Self::Csv => "csv",
        }
    }
}

/// Flags shared by every subcommand. A `--config` TOML file may set any of
/// them under the same kebab-case names; flags win.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunArgs {
    /// TOML file with default values for these flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    #[arg(long)]
    pub channel: Option<ChannelKind>,
    /// Channel probability; overrides the one implied by --theta3.
    #[arg(long)]
    pub p: Option<f64>,
    /// Environment ground-state weight; defaults to the one set by --theta2.
    #[arg(long)]
    pub alpha2_sq: Option<f64>,
    #[arg(long)]
    pub q1: Option<f64>,
    #[arg(long)]
    pub q2: Option<f64>,
    #[arg(long)]
    pub q3: Option<f64>,
    #[arg(long)]
    pub sgad_alpha: Option<f64>,
    #[arg(long)]
    pub sgad_beta: Option<f64>,
    #[arg(long)]
    pub sgad_mu: Option<f64>,
    #[arg(long)]
    pub sgad_nu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub sgad_phi: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub sgad_lambda: Option<f64>,

    /// System angle.
    #[arg(long, allow_negative_numbers = true)]
    pub theta1: Option<f64>,
    /// Environment angle.
    #[arg(long, allow_negative_numbers = true)]
    pub theta2: Option<f64>,
    /// Transition angle.
    #[arg(long, allow_negative_numbers = true)]
    pub theta3: Option<f64>,
    /// Phase of the system's |1⟩ amplitude.
    #[arg(long, allow_negative_numbers = true)]
    pub phi1: Option<f64>,
    /// half-angle (default), full-angle (alias experimental) or wave-plate.
    #[arg(long)]
    pub convention: Option<AngleConvention>,

    #[arg(long)]
    pub shots: Option<u64>,
    /// Poisson shot noise; needs --shots.
    #[arg(long)]
    pub noise: bool,
    #[arg(long)]
    pub seed: Option<u64>,

    /// Output file (or directory with --grid); stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Last stage to run: prepare, evolve or project.
    #[arg(long)]
    pub through: Option<Stage>,
    /// Circuit file to evolve instead of a configured lattice.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
    /// Append the projection stage of this tomography setting (1-16).
    #[arg(long)]
    pub setting: Option<usize>,

    #[arg(long)]
    pub counts_out: Option<PathBuf>,
    #[arg(long)]
    pub counts_in: Option<PathBuf>,
    /// Write the ideal matrix of reproduce-gad to this file.
    #[arg(long)]
    pub emit_theory: Option<PathBuf>,
    /// Write the circuit that was run to this file.
    #[arg(long)]
    pub emit_circuit: Option<PathBuf>,

    /// Sweep axis `name=start:stop:count`; repeat for a Cartesian product.
    #[arg(long)]
    pub grid: Vec<String>,
}

macro_rules! prefer_flags {
    ($flags:ident, $file:ident; $($field:ident),*) => {
        RunArgs {
            $($field: $flags.$field.or($file.$field),)*
            config: $flags.config,
            noise: $flags.noise || $file.noise,
            grid: if $flags.grid.is_empty() { $file.grid } else { $flags.grid },
        }
    };
}

impl RunArgs {
    /// Fills unset flags from the `--config` file, if any.
    pub fn resolve(self) -> CliResult<Self> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = load_config(&path)?;
        let flags = self;
        Ok(prefer_flags!(flags, file;
            channel, p, alpha2_sq, q1, q2, q3,
            sgad_alpha, sgad_beta, sgad_mu, sgad_nu, sgad_phi, sgad_lambda,
            theta1, theta2, theta3, phi1, convention,
            shots, seed, out, format, through, circuit, setting,
            counts_out, counts_in, emit_theory, emit_circuit))
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    /// Mutable slot of a numeric field addressed by its flag name.
    pub fn numeric_field(&mut self, name: &str) -> Option<&mut Option<f64>> {
        Some(match name {
            "p" => &mut self.p,
            "alpha2-sq" => &mut self.alpha2_sq,
            "q1" => &mut self.q1,
            "q2" => &mut self.q2,
            "q3" => &mut self.q3,
            "sgad-alpha" => &mut self.sgad_alpha,
            "sgad-beta" => &mut self.sgad_beta,
            "sgad-mu" => &mut self.sgad_mu,
            "sgad-nu" => &mut self.sgad_nu,
            "sgad-phi" => &mut self.sgad_phi,
            "sgad-lambda" => &mut self.sgad_lambda,
            "theta1" => &mut self.theta1,
            "theta2" => &mut self.theta2,
            "theta3" => &mut self.theta3,
            "phi1" => &mut self.phi1,
            _ => return None,
        })
    }
}

fn load_config(path: &Path) -> CliResult<RunArgs> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    toml::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}
