// Copyright 2026 The krausloom Authors
// SPDX-License-Identifier: Apache-2.0

//! Sixteen-setting two-qubit tomography: projectors, synthetic counts and
//! reconstruction.

mod io;
mod reconstruct;

pub use io::{parse_counts, write_counts};
pub use reconstruct::{
    informational_rank, linear_reconstruct, linear_reconstruct_probabilities, ml_reconstruct,
    normalized_probabilities, project_to_psd, CountNormalization, MlOptions, MlOutcome,
};

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::circuit::projection_probability;
use crate::error::{Error, Result};
use crate::gates::{u3, U3Params};
use crate::qmath::{CMatrix, CVector, DensityMatrix, PureState, Tensor};

/// Single-qubit projection target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisState {
    H,
    V,
    D,
    R,
}

impl BasisState {
    /// Plate setting that maps `|0⟩` onto this state.
    pub fn u3(self) -> U3Params {
        let (theta, phi, lambda) = match self {
            Self::H => (0.0, 0.0, PI),
            Self::V => (PI, 0.0, PI),
            Self::D => (FRAC_PI_2, 0.0, FRAC_PI_2),
            Self::R => (FRAC_PI_2, FRAC_PI_2, FRAC_PI_2),
        };
        U3Params { theta, phi, lambda }
    }

    fn symbol(self) -> char {
        match self {
            Self::H => 'H',
            Self::V => 'V',
            Self::D => 'D',
            Self::R => 'R',
        }
    }
}

/// One projective measurement `(U₁ ⊗ U₂)|00⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TomographySetting {
    /// Row number, 1 through 16.
    pub index: usize,
    pub label: (BasisState, BasisState),
    pub u1: U3Params,
    pub u2: U3Params,
}

impl TomographySetting {
    /// Two-letter label such as `"DR"`.
    pub fn label_string(&self) -> String {
        [self.label.0.symbol(), self.label.1.symbol()].iter().collect()
    }
}

impl fmt::Display for TomographySetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:>2} {}", self.index, self.label_string())
    }
}

const TABLE: [(BasisState, BasisState); 16] = {
    use BasisState::*;
    [
        (H, H),
        (H, V),
        (V, V),
        (V, H),
        (R, H),
        (R, V),
        (D, V),
        (D, H),
        (D, R),
        (D, D),
        (R, D),
        (H, D),
        (V, D),
        (V, R),
        (H, R),
        (R, R),
    ]
};

/// The sixteen measurement settings in table order.
pub fn settings_table() -> Vec<TomographySetting> {
    TABLE
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| TomographySetting {
            index: k + 1,
            label: (a, b),
            u1: a.u3(),
            u2: b.u3(),
        })
        .collect()
}

/// Setting for a row number.
pub fn setting(index: usize) -> Result<TomographySetting> {
    if !(1..=16).contains(&index) {
        return Err(Error::InvalidArgument(format!("setting index {index} not in 1..=16")));
    }
    Ok(settings_table()[index - 1])
}

/// The projected two-qubit state `(U₁ ⊗ U₂)|00⟩`.
pub fn projector(s: &TomographySetting) -> PureState {
    let u = u3(&s.u1).tensor(&u3(&s.u2));
    let column: CVector = u.matrix().column(0).into_owned();
    PureState::new(column.iter().copied().collect(), vec![2, 2])
        .expect("a unitary column is normalized")
}

/// `|ψ⟩⟨ψ|` for a setting.
pub fn projector_matrix(s: &TomographySetting) -> CMatrix {
    projector(s).density().into_matrix()
}

/// Measured outcome of one setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountRecord {
    pub index: usize,
    pub label: String,
    /// Model probability, absent for records read from a count file.
    pub expected_probability: Option<f64>,
    pub counts: u64,
    pub total_shots: u64,
}

/// Turns per-branch probabilities into counts. Each branch is sampled
/// separately and the counts summed, as a polarization-resolving detector
/// would report them.
fn records_from_branches(branch_probs: &[Vec<f64>], shots: u64, noise: bool, seed: u64) -> Result<Vec<CountRecord>> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(16);
    for (s, probs) in settings_table().iter().zip(branch_probs) {
        let mut counts = 0u64;
        for &p in probs {
            let mean = p.max(0.0) * shots as f64;
            counts += if !noise {
                mean.round() as u64
            } else if mean > 0.0 {
                let poisson = Poisson::new(mean)
                    .map_err(|e| Error::InvalidArgument(format!("Poisson mean {mean}: {e}")))?;
                poisson.sample(&mut rng) as u64
            } else {
                0
            };
        }
        let total: f64 = probs.iter().sum();
        records.push(CountRecord {
            index: s.index,
            label: s.label_string(),
            expected_probability: Some(total.clamp(0.0, 1.0)),
            counts,
            total_shots: shots,
        });
    }
    Ok(records)
}

/// Counts for the sixteen settings on a two-qubit state. Without noise each
/// count is `round(p · shots)`; with noise it is Poisson with that mean,
/// reproducible for a fixed `seed`.
pub fn simulate_counts(rho: &DensityMatrix, shots: u64, noise: bool, seed: u64) -> Result<Vec<CountRecord>> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            actual: rho.dim(),
        });
    }
    if !rho.report().is_valid(&Default::default()) {
        return Err(Error::InvalidState(format!("not a density matrix: {}", rho.report())));
    }
    let probs: Vec<Vec<f64>> = settings_table()
        .iter()
        .map(|s| {
            let psi = projector(s);
            let v = psi.amplitudes();
            vec![(v.adjoint() * rho.matrix() * v)[(0, 0)].re]
        })
        .collect();
    records_from_branches(&probs, shots, noise, seed)
}

/// Counts for the three-wire interferometer output, measured through the
/// projection stage with the H and V branches sampled separately.
pub fn simulate_interferometer_counts(
    state: &PureState,
    shots: u64,
    noise: bool,
    seed: u64,
) -> Result<Vec<CountRecord>> {
    let probs = settings_table()
        .iter()
        .map(|s| projection_probability(state, &s.u1, &s.u2).map(|b| b.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    records_from_branches(&probs, shots, noise, seed)
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InvalidArgument(
            "spearman needs two equal-length samples of size two or more".into(),
        ));
    }
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut order: Vec<usize> = (0..v.len()).collect();
        order.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut out = vec![0.0; v.len()];
        let mut i = 0;
        while i < order.len() {
            let mut j = i;
            while j + 1 < order.len() && v[order[j + 1]] == v[order[i]] {
                j += 1;
            }
            let rank = (i + j) as f64 / 2.0 + 1.0;
            for &k in &order[i..=j] {
                out[k] = rank;
            }
            i = j + 1;
        }
        out
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let mean = (n + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mean) * (b - mean);
        sxx += (a - mean).powi(2);
        syy += (b - mean).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::InvalidArgument("spearman of a constant sample".into()));
    }
    Ok(sxy / (sxx * syy).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{c, ONE, ZERO};
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn table_rows() {
        let t = settings_table();
        assert_eq!(t.len(), 16);
        assert_eq!(t[0].label_string(), "HH");
        assert_eq!(t[0].u1, U3Params { theta: 0.0, phi: 0.0, lambda: PI });
        assert_eq!(t[9].label_string(), "DD");
        assert_eq!(t[9].u2, U3Params { theta: FRAC_PI_2, phi: 0.0, lambda: FRAC_PI_2 });
        assert_eq!(t[15].label_string(), "RR");
        assert_eq!(t[15].u1, U3Params { theta: FRAC_PI_2, phi: FRAC_PI_2, lambda: FRAC_PI_2 });
    }

    #[test]
    fn projector_examples() {
        let hh = projector(&setting(1).unwrap());
        assert!((hh.inner(&PureState::basis(0, vec![2, 2]).unwrap()).norm() - 1.0).abs() < 1e-15);
        let dh = projector(&setting(8).unwrap());
        let h = FRAC_1_SQRT_2;
        let expected = PureState::new(vec![c(h, 0.0), ZERO, c(h, 0.0), ZERO], vec![2, 2]).unwrap();
        assert!((dh.inner(&expected).norm() - 1.0).abs() < 1e-15);
        // R on qubit one carries the +i on |1⟩
        let rh = projector(&setting(5).unwrap());
        assert!((rh.amplitude(2) - ONE.scale(h) * c(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn pure_basis_counts() {
        let rho = PureState::basis(0, vec![2, 2]).unwrap().density();
        let rec = simulate_counts(&rho, 1000, false, 0).unwrap();
        assert_eq!(rec[0].counts, 1000);
        assert!(rec[1..4].iter().all(|r| r.counts == 0));
        let mixed = DensityMatrix::maximally_mixed(vec![2, 2]);
        let rec = simulate_counts(&mixed, 1000, false, 0).unwrap();
        assert!(rec.iter().all(|r| (r.expected_probability.unwrap() - 0.25).abs() < 1e-15));
    }

    #[test]
    fn noisy_counts_are_reproducible() {
        let rho = DensityMatrix::maximally_mixed(vec![2, 2]);
        let a = simulate_counts(&rho, 10_000, true, 42).unwrap();
        let b = simulate_counts(&rho, 10_000, true, 42).unwrap();
        let c = simulate_counts(&rho, 10_000, true, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn spearman_basics() {
        assert!((spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!((spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap() + 1.0).abs() < 1e-15);
        assert!(spearman(&[1.0, 1.0], &[1.0, 2.0]).is_err());
    }
}
