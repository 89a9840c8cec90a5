// Copyright 2026 The krausloom Authors
// SPDX-License-Identifier: Apache-2.0

//! Linear inversion, maximum likelihood and PSD projection.

use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{projector_matrix, settings_table, CountRecord};
use crate::channels::{pauli_x, pauli_y, pauli_z};
use crate::error::{Error, Result};
use crate::qmath::{hermitian_eigen, hermitian_function, max_abs_diff, CMatrix, DensityMatrix, Tensor};

/// How counts become probabilities for linear inversion.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountNormalization {
    /// Divide by the summed counts of rows 1–4, the orthonormal H/V block.
    #[default]
    HvBlock,
    /// Divide each row by its own `total_shots`.
    TotalShots,
}

/// Two-qubit Pauli products `σ_a ⊗ σ_b`, `a` major.
fn pauli_products() -> Vec<CMatrix> {
    let single = [CMatrix::identity(2, 2), pauli_x(), pauli_y(), pauli_z()];
    let mut out = Vec::with_capacity(16);
    for a in &single {
        for b in &single {
            out.push(a.tensor(b));
        }
    }
    out
}

struct Inversion {
    products: Vec<CMatrix>,
    /// Maps the sixteen probabilities to Pauli coefficients.
    inverse: DMatrix<f64>,
    rank: usize,
}

fn inversion() -> &'static Inversion {
    static CELL: OnceLock<Inversion> = OnceLock::new();
    CELL.get_or_init(|| {
        let products = pauli_products();
        let projectors: Vec<CMatrix> = settings_table().iter().map(projector_matrix).collect();
        // Tr(ρ P_s) with ρ = ¼ Σ_k r_k G_k
        let b = DMatrix::from_fn(16, 16, |s, k| (&projectors[s] * &products[k]).trace().re / 4.0);
        let rank = b.clone().svd(false, false).rank(1e-10);
        assert_eq!(rank, 16, "tomography settings are not informationally complete");
        let inverse = b.try_inverse().expect("full-rank system is invertible");
        Inversion {
            products,
            inverse,
            rank,
        }
    })
}

/// Rank of the vectorized sixteen projectors.
pub fn informational_rank() -> usize {
    inversion().rank
}

fn ordered(records: &[CountRecord]) -> Result<[&CountRecord; 16]> {
    let mut slots: [Option<&CountRecord>; 16] = [None; 16];
    for rec in records {
        if !(1..=16).contains(&rec.index) {
            return Err(Error::InvalidArgument(format!("setting index {} not in 1..=16", rec.index)));
        }
        if slots[rec.index - 1].replace(rec).is_some() {
            return Err(Error::InvalidArgument(format!("setting {} given twice", rec.index)));
        }
    }
    let missing: Vec<usize> = (1..=16).filter(|&i| slots[i - 1].is_none()).collect();
    if !missing.is_empty() {
        return Err(Error::InvalidArgument(format!("missing settings {missing:?}")));
    }
    Ok(slots.map(|s| s.expect("checked above")))
}

/// Per-setting probabilities in table order.
pub fn normalized_probabilities(records: &[CountRecord], normalization: CountNormalization) -> Result<[f64; 16]> {
    let rows = ordered(records)?;
    let mut out = [0.0; 16];
    match normalization {
        CountNormalization::HvBlock => {
            let total: u64 = rows[..4].iter().map(|r| r.counts).sum();
            if total == 0 {
                return Err(Error::InvalidArgument("rows 1-4 hold no counts".into()));
            }
            for (p, rec) in out.iter_mut().zip(rows) {
                *p = rec.counts as f64 / total as f64;
            }
        }
        CountNormalization::TotalShots => {
            for (p, rec) in out.iter_mut().zip(rows) {
                if rec.total_shots == 0 {
                    return Err(Error::InvalidArgument(format!("setting {} has zero shots", rec.index)));
                }
                *p = rec.counts as f64 / rec.total_shots as f64;
            }
        }
    }
    Ok(out)
}

/// Solves `Tr(ρ P_s) = p_s` for the sixteen real parameters of `ρ`, then
/// Hermitizes and normalizes the trace. The result need not be PSD.
pub fn linear_reconstruct_probabilities(probs: &[f64; 16]) -> Result<CMatrix> {
    let inv = inversion();
    let coeffs = &inv.inverse * DVector::from_column_slice(probs);
    let mut rho = CMatrix::zeros(4, 4);
    for (k, g) in inv.products.iter().enumerate() {
        rho += g.scale(coeffs[k] / 4.0);
    }
    rho = (&rho + rho.adjoint()).scale(0.5);
    let trace = rho.trace().re;
    if trace.abs() < 1e-15 {
        return Err(Error::InvalidState("reconstruction has zero trace".into()));
    }
    Ok(rho.unscale(trace))
}

/// Linear inversion from counts.
pub fn linear_reconstruct(records: &[CountRecord], normalization: CountNormalization) -> Result<DensityMatrix> {
    let m = linear_reconstruct_probabilities(&normalized_probabilities(records, normalization)?)?;
    DensityMatrix::from_matrix_unchecked(m, vec![2, 2])
}

/// Clips negative eigenvalues and renormalizes to unit trace.
pub fn project_to_psd(m: &CMatrix) -> Result<DensityMatrix> {
    if !m.is_square() || m.nrows() == 0 {
        return Err(Error::InvalidArgument("expected a nonempty square matrix".into()));
    }
    let residual = max_abs_diff(m, &m.adjoint());
    if residual > 1e-8 {
        return Err(Error::InvalidArgument(format!("matrix is not Hermitian (residual {residual:.3e})")));
    }
    let (values, _) = hermitian_eigen(m);
    let kept: f64 = values.iter().map(|&x| x.max(0.0)).sum();
    if kept <= 0.0 {
        return Err(Error::InvalidState("no positive spectrum to keep".into()));
    }
    let clipped = hermitian_function(m, |x| x.max(0.0) / kept);
    let n = m.nrows();
    let dims = if n.is_power_of_two() && n > 1 {
        vec![2; n.trailing_zeros() as usize]
    } else {
        vec![n]
    };
    DensityMatrix::from_matrix_unchecked((&clipped + clipped.adjoint()).scale(0.5), dims)
}

/// Settings for [`ml_reconstruct`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MlOptions {
    pub max_iter: usize,
    /// Stop once the fixed-point residual `max |Rσ - σ|` falls below this.
    pub tol: f64,
    /// Also stop once an accepted step gains less log-likelihood than this.
    /// The gain reaches roundoff long before the state settles, so this is
    /// off by default.
    pub gain_tol: f64,
    /// Normalization for the linear starting point.
    pub normalization: CountNormalization,
}

impl Default for MlOptions {
    fn default() -> Self {
        Self {
            max_iter: 20_000,
            tol: 1e-11,
            gain_tol: 0.0,
            normalization: CountNormalization::HvBlock,
        }
    }
}

/// Result of [`ml_reconstruct`].
#[derive(Debug, Clone, PartialEq)]
pub struct MlOutcome {
    pub state: DensityMatrix,
    pub iterations: usize,
    pub converged: bool,
    /// `Σ f_s ln q_s` with relative frequencies `f_s`.
    pub log_likelihood: f64,
}

/// Weight of `I/4` in the starting point. It only has to make the start
/// full rank; a larger weight is slow to drain from pure optima.
const START_MIXING: f64 = 1e-9;
const START_DILUTION: f64 = 100.0;

/// Maximum-likelihood state for Poisson counts with free overall intensity.
///
/// The sixteen projectors sum to `H ≠ I`, so the fit runs on the
/// renormalized POVM `K_s = H^{-1/2} P_s H^{-1/2}` with the state
/// `σ ∝ H^{1/2} ρ H^{1/2}`, where the diluted iteration
/// `σ ← (I + εR) σ (I + εR)`, `R = Σ (f_s / q_s) K_s`, applies directly.
/// `ε` is halved whenever a step would lower the likelihood. The optimum
/// satisfies `Rσ = σ`, which is the convergence test.
pub fn ml_reconstruct(records: &[CountRecord], options: &MlOptions) -> Result<MlOutcome> {
    let rows = ordered(records)?;
    let total: u64 = rows.iter().map(|r| r.counts).sum();
    if total == 0 {
        return Err(Error::InvalidArgument("no counts recorded".into()));
    }
    let freqs: Vec<f64> = rows.iter().map(|r| r.counts as f64 / total as f64).collect();

    let projectors: Vec<CMatrix> = settings_table().iter().map(projector_matrix).collect();
    let h: CMatrix = projectors.iter().sum();
    let h_half = hermitian_function(&h, f64::sqrt);
    let h_inv_half = hermitian_function(&h, |x| 1.0 / x.sqrt());
    let povm: Vec<CMatrix> = projectors.iter().map(|p| &h_inv_half * p * &h_inv_half).collect();

    let linear = linear_reconstruct(records, options.normalization)?;
    let start = project_to_psd(linear.matrix())?.into_matrix().scale(1.0 - START_MIXING)
        + CMatrix::identity(4, 4).scale(START_MIXING / 4.0);
    let mut sigma = normalize(&h_half * start * &h_half);

    let likelihood = |s: &CMatrix| -> (f64, Vec<f64>) {
        let q: Vec<f64> = povm.iter().map(|k| (s * k).trace().re.max(f64::MIN_POSITIVE)).collect();
        let l = freqs
            .iter()
            .zip(&q)
            .filter(|(f, _)| **f > 0.0)
            .map(|(f, q)| f * q.ln())
            .sum();
        (l, q)
    };

    let (mut current, mut q) = likelihood(&sigma);
    let mut epsilon = START_DILUTION;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < options.max_iter {
        let mut rr = CMatrix::zeros(4, 4);
        for ((k, f), qs) in povm.iter().zip(&freqs).zip(&q) {
            rr += k.scale(f / qs);
        }
        if max_abs_diff(&(&rr * &sigma), &sigma) < options.tol {
            converged = true;
            break;
        }
        iterations += 1;
        let step = CMatrix::identity(4, 4) + rr.scale(epsilon);
        let candidate = normalize(&step * &sigma * &step);
        let (next, next_q) = likelihood(&candidate);
        // decreases at roundoff level are accepted
        if next < current - 8.0 * f64::EPSILON * current.abs() {
            epsilon /= 2.0;
            if epsilon < 1e-12 {
                break;
            }
            continue;
        }
        let gain = next - current;
        sigma = candidate;
        current = next;
        q = next_q;
        if options.gain_tol > 0.0 && gain < options.gain_tol {
            converged = true;
            break;
        }
    }

    let rho = &h_inv_half * sigma * &h_inv_half;
    Ok(MlOutcome {
        state: project_to_psd(&normalize(rho))?,
        iterations,
        converged,
        log_likelihood: current,
    })
}

fn normalize(m: CMatrix) -> CMatrix {
    let hermitian = (&m + m.adjoint()).scale(0.5);
    let trace = hermitian.trace().re;
    hermitian.unscale(trace)
}
