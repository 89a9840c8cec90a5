// Copyright 2026 The krausloom Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra for small registers.
//!
//! Everything here works on `nalgebra` dynamic matrices of [`C64`]. Register
//! sizes in this crate never exceed a few qubits, so no attempt is made at
//! sparse storage. Subsystems are ordered left to right with the left factor
//! as the slowest-varying index, which is the convention of
//! [`nalgebra::Matrix::kronecker`].

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Tolerance for plain floating-point arithmetic (norms, traces of exact products).
pub const ARITHMETIC_TOL: f64 = 1e-12;
/// Tolerance for structural properties: hermiticity, unit trace, unitarity, completeness.
pub const STRUCTURAL_TOL: f64 = 1e-10;
/// Tolerance for spectral properties (smallest admissible eigenvalue is `-SPECTRAL_TOL`).
pub const SPECTRAL_TOL: f64 = 1e-9;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Overridable copy of the module tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub arithmetic: f64,
    pub structural: f64,
    pub spectral: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            arithmetic: ARITHMETIC_TOL,
            structural: STRUCTURAL_TOL,
            spectral: SPECTRAL_TOL,
        }
    }
}

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn r(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Builds a square matrix from row slices.
pub fn matrix_from_rows(rows: &[&[C64]]) -> CMatrix {
    let n = rows.len();
    CMatrix::from_fn(n, rows.first().map_or(0, |r| r.len()), |i, j| rows[i][j])
}

/// Builds a diagonal matrix from real entries.
pub fn real_diagonal(entries: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(entries.len(), entries.iter().map(|&x| r(x))))
}

/// Conjugate transpose.
pub fn dagger(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Frobenius norm of `U†U - I`.
pub fn unitarity_residual(m: &CMatrix) -> f64 {
    let n = m.ncols();
    (m.adjoint() * m - CMatrix::identity(n, n)).norm()
}

fn hermiticity_residual(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigen-decomposition of the Hermitian part of `m`, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(m.nrows(), order.len(), |i, j| eig.eigenvectors[(i, order[j])]);
    (values, vectors)
}

/// Rebuilds `V diag(f(λ)) V†` from a Hermitian eigen-decomposition.
fn spectral_map(values: &[f64], vectors: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let n = vectors.nrows();
    let mut out = CMatrix::zeros(n, n);
    for (k, &lambda) in values.iter().enumerate() {
        let w = f(lambda);
        if w == 0.0 {
            continue;
        }
        let v = vectors.column(k);
        out += (v * v.adjoint()).scale(w);
    }
    out
}

/// Square root of a positive semidefinite matrix; negative eigenvalues are clipped to zero.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    spectral_map(&values, &vectors, |x| x.max(0.0).sqrt())
}

/// Applies `f` to the spectrum of the Hermitian matrix `m`.
pub fn hermitian_function(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    spectral_map(&values, &vectors, f)
}

fn check_dims(dims: &[usize], total: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidArgument(format!("invalid subsystem dims {dims:?}")));
    }
    let product: usize = dims.iter().product();
    if product != total {
        return Err(Error::DimensionMismatch {
            expected: product,
            actual: total,
        });
    }
    Ok(())
}

fn all_finite<'a>(mut values: impl Iterator<Item = &'a C64>) -> bool {
    values.all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Normalized amplitude vector over a tensor-product register.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
    dims: Vec<usize>,
}

impl PureState {
    /// Validates finiteness, dimensions and unit norm (to [`ARITHMETIC_TOL`]).
    pub fn new(amplitudes: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        let state = Self::from_vector_unchecked(CVector::from_vec(amplitudes), dims)?;
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > ARITHMETIC_TOL {
            return Err(Error::InvalidState(format!("squared norm {norm} is not 1")));
        }
        Ok(state)
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        let mut state = Self::from_vector_unchecked(CVector::from_vec(amplitudes), dims)?;
        let norm = state.norm_sqr().sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector cannot be normalized".into()));
        }
        state.amplitudes.unscale_mut(norm);
        Ok(state)
    }

    /// Computational basis state `index`.
    pub fn basis(index: usize, dims: Vec<usize>) -> Result<Self> {
        let d: usize = dims.iter().product();
        if index >= d {
            return Err(Error::InvalidArgument(format!("basis index {index} >= dimension {d}")));
        }
        let mut amps = vec![ZERO; d];
        amps[index] = ONE;
        Self::new(amps, dims)
    }

    /// Checks shape and finiteness only.
    pub(crate) fn from_vector_unchecked(amplitudes: CVector, dims: Vec<usize>) -> Result<Self> {
        check_dims(&dims, amplitudes.len())?;
        if !all_finite(amplitudes.iter()) {
            return Err(Error::InvalidState("non-finite amplitude".into()));
        }
        Ok(Self { amplitudes, dims })
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> DensityMatrix {
        DensityMatrix {
            matrix: &self.amplitudes * self.amplitudes.adjoint(),
            dims: self.dims.clone(),
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Multiplies by the global phase that makes the first non-negligible
    /// amplitude real and positive.
    pub fn with_canonical_phase(&self) -> PureState {
        let pivot = self
            .amplitudes
            .iter()
            .find(|z| z.norm() > ARITHMETIC_TOL)
            .copied()
            .unwrap_or(ONE);
        let phase = pivot.conj() / pivot.norm();
        PureState {
            amplitudes: self.amplitudes.map(|z| z * phase),
            dims: self.dims.clone(),
        }
    }
}

/// Unit-trace Hermitian matrix together with its subsystem dimensions.
///
/// [`DensityMatrix::new`] enforces hermiticity, unit trace and positivity.
/// Reconstruction routines that cannot guarantee positivity build values with
/// [`DensityMatrix::from_matrix_unchecked`]; [`DensityMatrix::report`] tells
/// the two apart.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let rho = Self::from_matrix_unchecked(matrix, dims)?;
        let report = rho.report();
        if !report.is_valid(&Tolerances::default()) {
            return Err(Error::InvalidState(format!("not a density matrix: {report}")));
        }
        Ok(rho)
    }

    /// Checks shape and finiteness only.
    pub fn from_matrix_unchecked(matrix: CMatrix, dims: Vec<usize>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidArgument(format!(
                "density matrix must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        check_dims(&dims, matrix.nrows())?;
        if !all_finite(matrix.iter()) {
            return Err(Error::InvalidState("non-finite matrix entry".into()));
        }
        Ok(Self { matrix, dims })
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let d: usize = dims.iter().product();
        Self {
            matrix: CMatrix::identity(d, d).unscale(d as f64),
            dims,
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Diagnostics of this matrix; see [`validate_density`].
    pub fn report(&self) -> DensityReport {
        density_report(&self.matrix)
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        max_abs_diff(&self.matrix, &other.matrix)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.matrix).0
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }
}

/// Square matrix with `U†U = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix(CMatrix);

impl UnitaryMatrix {
    /// Checks unitarity to [`STRUCTURAL_TOL`] (Frobenius norm of `U†U - I`).
    pub fn new(matrix: CMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, STRUCTURAL_TOL)
    }

    pub fn with_tolerance(matrix: CMatrix, tol: f64) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidArgument("unitary must be square".into()));
        }
        let residual = unitarity_residual(&matrix);
        if residual.is_nan() || residual > tol {
            return Err(Error::NotUnitary(residual));
        }
        Ok(Self(matrix))
    }

    /// Wraps a matrix known to be unitary by construction.
    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        debug_assert!(unitarity_residual(&matrix) < 1e-8);
        Self(matrix)
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim, dim))
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn residual(&self) -> f64 {
        unitarity_residual(&self.0)
    }

    pub fn dagger(&self) -> UnitaryMatrix {
        Self(self.0.adjoint())
    }

    /// `self · other` (apply `other` first).
    pub fn then_after(&self, other: &UnitaryMatrix) -> UnitaryMatrix {
        Self(&self.0 * &other.0)
    }

    pub fn apply(&self, state: &PureState) -> Result<PureState> {
        if state.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: state.dim(),
            });
        }
        Ok(PureState {
            amplitudes: &self.0 * &state.amplitudes,
            dims: state.dims.clone(),
        })
    }

    /// `U ρ U†`.
    pub fn conjugate(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: rho.dim(),
            });
        }
        Ok(DensityMatrix {
            matrix: &self.0 * &rho.matrix * self.0.adjoint(),
            dims: rho.dims.clone(),
        })
    }
}

/// Kronecker product; the left operand is the slower-varying index.
pub trait Tensor<Rhs = Self> {
    type Output;
    fn tensor(&self, rhs: &Rhs) -> Self::Output;
}

impl Tensor for CMatrix {
    type Output = CMatrix;
    fn tensor(&self, rhs: &CMatrix) -> CMatrix {
        self.kronecker(rhs)
    }
}

impl Tensor for PureState {
    type Output = PureState;
    fn tensor(&self, rhs: &PureState) -> PureState {
        PureState {
            amplitudes: self.amplitudes.kronecker(&rhs.amplitudes),
            dims: [self.dims.as_slice(), rhs.dims.as_slice()].concat(),
        }
    }
}

impl Tensor for DensityMatrix {
    type Output = DensityMatrix;
    fn tensor(&self, rhs: &DensityMatrix) -> DensityMatrix {
        DensityMatrix {
            matrix: self.matrix.kronecker(&rhs.matrix),
            dims: [self.dims.as_slice(), rhs.dims.as_slice()].concat(),
        }
    }
}

impl Tensor for UnitaryMatrix {
    type Output = UnitaryMatrix;
    fn tensor(&self, rhs: &UnitaryMatrix) -> UnitaryMatrix {
        UnitaryMatrix(self.0.kronecker(&rhs.0))
    }
}

pub fn tensor<T: Tensor>(a: &T, b: &T) -> T::Output {
    a.tensor(b)
}

/// Digits of `index` in the mixed radix given by `dims` (first digit slowest).
pub(crate) fn unravel(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; dims.len()];
    for (slot, &d) in digits.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    digits
}

pub(crate) fn ravel(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

fn validate_keep(dims: &[usize], keep: &[usize]) -> Result<Vec<usize>> {
    if keep.is_empty() {
        return Err(Error::InvalidArgument("partial trace needs a nonempty keep set".into()));
    }
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != keep.len() {
        return Err(Error::InvalidArgument(format!("duplicate subsystem in keep set {keep:?}")));
    }
    if let Some(&bad) = sorted.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::InvalidArgument(format!(
            "subsystem {bad} out of range for {} subsystems",
            dims.len()
        )));
    }
    Ok(sorted)
}

/// Partial trace of an arbitrary (not necessarily normalized) square matrix.
pub fn partial_trace_matrix(m: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    check_dims(dims, m.nrows())?;
    let keep = validate_keep(dims, keep)?;
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let keep_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let dk: usize = keep_dims.iter().product();
    let dt: usize = traced_dims.iter().product();

    let full_index = |kept: usize, tr: usize| {
        let kd = unravel(kept, &keep_dims);
        let td = unravel(tr, &traced_dims);
        let mut digits = vec![0; dims.len()];
        for (pos, &k) in keep.iter().enumerate() {
            digits[k] = kd[pos];
        }
        for (pos, &t) in traced.iter().enumerate() {
            digits[t] = td[pos];
        }
        ravel(&digits, dims)
    };

    let mut out = CMatrix::zeros(dk, dk);
    for a in 0..dk {
        for b in 0..dk {
            let mut acc = ZERO;
            for t in 0..dt {
                acc += m[(full_index(a, t), full_index(b, t))];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// Reduced state on the subsystems listed in `keep` (kept in original order).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let matrix = partial_trace_matrix(&rho.matrix, &rho.dims, keep)?;
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    Ok(DensityMatrix {
        matrix,
        dims: sorted.iter().map(|&k| rho.dims[k]).collect(),
    })
}

/// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²`.
///
/// Fails with [`Error::InvalidState`] when either argument has an eigenvalue
/// below `-SPECTRAL_TOL`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            actual: sigma.dim(),
        });
    }
    let (rho_values, rho_vectors) = hermitian_eigen(&rho.matrix);
    for (name, min) in [
        ("first", rho_values[0]),
        ("second", hermitian_eigen(&sigma.matrix).0[0]),
    ] {
        if min < -SPECTRAL_TOL {
            return Err(Error::InvalidState(format!(
                "{name} argument of fidelity has eigenvalue {min:.3e}"
            )));
        }
    }
    let sqrt_rho = spectral_map(&rho_values, &rho_vectors, |x| x.max(0.0).sqrt());
    let inner = &sqrt_rho * hermitian_part(&sigma.matrix) * &sqrt_rho;
    let root_trace: f64 = hermitian_eigen(&inner).0.iter().map(|&x| x.max(0.0).sqrt()).sum();
    Ok((root_trace * root_trace).clamp(0.0, 1.0))
}

/// The three diagnostics checked for a density matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    /// `max |ρ - ρ†|` entrywise.
    pub hermiticity_residual: f64,
    /// `|Tr ρ - 1|`.
    pub trace_deviation: f64,
    /// Smallest eigenvalue of the Hermitian part.
    pub min_eigenvalue: f64,
}

impl DensityReport {
    pub fn is_valid(&self, tol: &Tolerances) -> bool {
        self.hermiticity_residual <= tol.structural
            && self.trace_deviation <= tol.structural
            && self.min_eigenvalue >= -tol.spectral
    }
}

impl std::fmt::Display for DensityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "hermiticity residual {:.3e}, trace deviation {:.3e}, min eigenvalue {:.3e}",
            self.hermiticity_residual, self.trace_deviation, self.min_eigenvalue
        )
    }
}

fn density_report(m: &CMatrix) -> DensityReport {
    DensityReport {
        hermiticity_residual: hermiticity_residual(m),
        trace_deviation: (m.trace() - ONE).norm(),
        min_eigenvalue: hermitian_eigen(m).0.first().copied().unwrap_or(0.0),
    }
}

/// Hermiticity, trace and positivity diagnostics of a square matrix.
pub fn validate_density(m: &CMatrix) -> Result<DensityReport> {
    if !m.is_square() || m.nrows() == 0 {
        return Err(Error::InvalidArgument(format!(
            "expected a nonempty square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(density_report(m))
}

/// Structured-text form of a matrix: row-major real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub dims: Vec<usize>,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixRecord {
    pub fn from_matrix(m: &CMatrix, dims: &[usize]) -> Self {
        let rows = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| f(&m[(i, j)])).collect())
                .collect()
        };
        Self {
            dims: dims.to_vec(),
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.re.len();
        let ncols = self.re.first().map_or(0, Vec::len);
        let ragged = self.im.len() != n
            || self.re.iter().chain(&self.im).any(|row| row.len() != ncols);
        if ragged {
            return Err(Error::Parse("real and imaginary parts must be rectangular and equal-shaped".into()));
        }
        Ok(CMatrix::from_fn(n, ncols, |i, j| c(self.re[i][j], self.im[i][j])))
    }
}

impl Serialize for DensityMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRecord::from_matrix(&self.matrix, &self.dims).serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let record = MatrixRecord::deserialize(d)?;
        let matrix = record.to_matrix().map_err(serde::de::Error::custom)?;
        DensityMatrix::from_matrix_unchecked(matrix, record.dims).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct VectorRecord {
    dims: Vec<usize>,
    re: Vec<f64>,
    im: Vec<f64>,
}

impl Serialize for PureState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VectorRecord {
            dims: self.dims.clone(),
            re: self.amplitudes.iter().map(|z| z.re).collect(),
            im: self.amplitudes.iter().map(|z| z.im).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PureState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let record = VectorRecord::deserialize(d)?;
        if record.re.len() != record.im.len() {
            return Err(serde::de::Error::custom("re and im lengths differ"));
        }
        let amps = record.re.iter().zip(&record.im).map(|(&a, &b)| c(a, b)).collect();
        PureState::new(amps, record.dims).map_err(serde::de::Error::custom)
    }
}
