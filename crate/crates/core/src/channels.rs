// Copyright 2026 The krausloom Authors
// SPDX-License-Identifier: Apache-2.0

//! Kraus-formalism engine: channel constructors, application, and extraction
//! of Kraus operators from a system–environment unitary.

use serde::{Deserialize, Serialize};

use crate::error::{check_finite, check_probability, Error, Result};
use crate::qmath::{
    c, max_abs_diff, r, CMatrix, DensityMatrix, MatrixRecord, UnitaryMatrix, C64,
    ARITHMETIC_TOL, I, ONE, STRUCTURAL_TOL, ZERO,
};

/// A list of equally shaped square operators with labels.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    operators: Vec<CMatrix>,
    labels: Vec<String>,
}

impl KrausSet {
    /// Rejects sets whose completeness residual exceeds [`STRUCTURAL_TOL`].
    pub fn new(operators: Vec<CMatrix>, labels: Vec<String>) -> Result<Self> {
        let set = Self::unchecked(operators, labels)?;
        set.check_complete(STRUCTURAL_TOL)?;
        Ok(set)
    }

    /// Shape checks only; completeness is not enforced.
    pub fn unchecked(operators: Vec<CMatrix>, labels: Vec<String>) -> Result<Self> {
        let Some(first) = operators.first() else {
            return Err(Error::InvalidChannel("a Kraus set needs at least one operator".into()));
        };
        let d = first.nrows();
        if d == 0 {
            return Err(Error::InvalidChannel("Kraus operators must be nonempty".into()));
        }
        if let Some(bad) = operators.iter().find(|m| m.nrows() != d || m.ncols() != d) {
            return Err(Error::InvalidChannel(format!(
                "Kraus operators must all be {d}x{d}, found {}x{}",
                bad.nrows(),
                bad.ncols()
            )));
        }
        if labels.len() != operators.len() {
            return Err(Error::InvalidChannel(format!(
                "{} labels for {} operators",
                labels.len(),
                operators.len()
            )));
        }
        if operators.iter().flat_map(|m| m.iter()).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidChannel("non-finite operator entry".into()));
        }
        Ok(Self { operators, labels })
    }

    /// Single operator `I`.
    pub fn identity(dim: usize) -> Self {
        Self {
            operators: vec![CMatrix::identity(dim, dim)],
            labels: vec!["I".into()],
        }
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.operators[0].nrows()
    }

    pub fn get(&self, label: &str) -> Option<&CMatrix> {
        self.labels.iter().position(|l| l == label).map(|k| &self.operators[k])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &CMatrix)> {
        self.labels.iter().map(String::as_str).zip(&self.operators)
    }

    fn check_complete(&self, tol: f64) -> Result<()> {
        let residual = completeness_residual(self);
        if residual > tol {
            return Err(Error::InvalidChannel(format!(
                "completeness residual {residual:.3e} exceeds {tol:.1e}"
            )));
        }
        Ok(())
    }

    /// `Σ M m M†` for an arbitrary square `m`.
    pub fn map(&self, m: &CMatrix) -> Result<CMatrix> {
        if m.nrows() != self.dim() || m.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: m.nrows(),
            });
        }
        Ok(self
            .operators
            .iter()
            .fold(CMatrix::zeros(m.nrows(), m.ncols()), |acc, k| acc + k * m * k.adjoint()))
    }

    /// `other ∘ self`: apply `self` first.
    pub fn then(&self, other: &KrausSet) -> Result<KrausSet> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        let mut operators = Vec::with_capacity(self.len() * other.len());
        let mut labels = Vec::with_capacity(self.len() * other.len());
        for (lb, b) in other.iter() {
            for (la, a) in self.iter() {
                operators.push(b * a);
                labels.push(format!("{lb}*{la}"));
            }
        }
        Ok(KrausSet { operators, labels })
    }
}

/// Frobenius norm of `Σ M†M - I`.
pub fn completeness_residual(k: &KrausSet) -> f64 {
    let d = k.dim();
    let sum = k
        .operators
        .iter()
        .fold(CMatrix::zeros(d, d), |acc, m| acc + m.adjoint() * m);
    (sum - CMatrix::identity(d, d)).norm()
}

/// `Λ(ρ) = Σ M ρ M†`.
pub fn kraus_apply(rho: &DensityMatrix, k: &KrausSet) -> Result<DensityMatrix> {
    k.check_complete(STRUCTURAL_TOL)?;
    DensityMatrix::from_matrix_unchecked(k.map(rho.matrix())?, rho.dims().to_vec())
}

/// Largest entrywise difference between the actions of two channels on the
/// matrix units `|i⟩⟨j|`. Zero iff the channels are equal.
pub fn action_distance(a: &KrausSet, b: &KrausSet) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            actual: b.dim(),
        });
    }
    let d = a.dim();
    let mut worst: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            let mut unit = CMatrix::zeros(d, d);
            unit[(i, j)] = ONE;
            worst = worst.max(max_abs_diff(&a.map(&unit)?, &b.map(&unit)?));
        }
    }
    Ok(worst)
}

/// `(Tr ρσx, Tr ρσy, Tr ρσz)`.
pub fn bloch_vector(rho: &DensityMatrix) -> Result<[f64; 3]> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: rho.dim(),
        });
    }
    let m = rho.matrix();
    let x = m[(0, 1)] + m[(1, 0)];
    let y = I * (m[(0, 1)] - m[(1, 0)]);
    let z = m[(0, 0)] - m[(1, 1)];
    Ok([x.re, y.re, z.re])
}

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

fn qubit(entries: [C64; 4]) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &entries)
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// `M0 = diag(1, √(1-p))`, `M1 = diag(0, √p)`.
pub fn dephasing_kraus(p: f64) -> Result<KrausSet> {
    let p = check_probability("p", p)?;
    KrausSet::new(
        vec![
            qubit([ONE, ZERO, ZERO, r((1.0 - p).sqrt())]),
            qubit([ZERO, ZERO, ZERO, r(p.sqrt())]),
        ],
        labels(&["M0", "M1"]),
    )
}

/// Generalized amplitude damping with bath ground-state weight `alpha2_sq`.
///
/// Labels follow the environment transition `M{in}{out}`.
pub fn gad_kraus(p: f64, alpha2_sq: f64) -> Result<KrausSet> {
    let p = check_probability("p", p)?;
    let a = check_probability("alpha2_sq", alpha2_sq)?.sqrt();
    let b = (1.0 - alpha2_sq).sqrt();
    let (keep, jump) = ((1.0 - p).sqrt(), p.sqrt());
    KrausSet::new(
        vec![
            qubit([r(a), ZERO, ZERO, r(a * keep)]),
            qubit([ZERO, r(a * jump), ZERO, ZERO]),
            qubit([ZERO, ZERO, r(b * jump), ZERO]),
            qubit([r(b * keep), ZERO, ZERO, r(b)]),
        ],
        labels(&["M00", "M01", "M10", "M11"]),
    )
}

/// Parameters of the squeezed generalized amplitude damping channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SgadParams {
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub nu: f64,
    pub phi: f64,
    pub lambda: f64,
    pub alpha2_sq: f64,
}

impl SgadParams {
    /// The parameter choice under which SGAD reduces to GAD(p).
    pub fn gad_reduction(p: f64, alpha2_sq: f64) -> Self {
        Self {
            alpha: 0.0,
            beta: p,
            mu: p,
            nu: 0.0,
            phi: 0.0,
            lambda: 0.0,
            alpha2_sq,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_probability("alpha", self.alpha)?;
        check_probability("beta", self.beta)?;
        check_probability("mu", self.mu)?;
        check_probability("nu", self.nu)?;
        check_finite("phi", self.phi)?;
        check_finite("lambda", self.lambda)?;
        check_probability("alpha2_sq", self.alpha2_sq)?;
        Ok(())
    }
}

fn phase(angle: f64) -> C64 {
    c(angle.cos(), angle.sin())
}

/// The four printed SGAD operators, including the phases `e^{-iφ}` and `e^{-iλ}`.
pub fn sgad_kraus(params: &SgadParams) -> Result<KrausSet> {
    params.validate()?;
    let SgadParams {
        alpha,
        beta,
        mu,
        nu,
        phi,
        lambda,
        alpha2_sq,
    } = *params;
    let a = alpha2_sq.sqrt();
    let b = (1.0 - alpha2_sq).sqrt();
    let s = f64::sqrt;
    KrausSet::new(
        vec![
            qubit([r(a * s(1.0 - alpha)), ZERO, ZERO, r(a * s(1.0 - beta))]),
            qubit([ZERO, r(a * s(beta)), phase(-phi) * (a * s(alpha)), ZERO]),
            qubit([ZERO, r(b * s(nu)), phase(-lambda) * (b * s(mu)), ZERO]),
            qubit([r(b * s(1.0 - mu)), ZERO, ZERO, r(b * s(1.0 - nu))]),
        ],
        labels(&["M00", "M01", "M10", "M11"]),
    )
}

/// Checks `q1 + q2 + q3 = 1` and each weight in `[0, 1]`.
pub(crate) fn check_pauli_weights(p: f64, q: [f64; 3]) -> Result<()> {
    check_probability("p", p)?;
    for (name, value) in ["q1", "q2", "q3"].into_iter().zip(q) {
        check_probability(name, value)?;
    }
    let sum: f64 = q.iter().sum();
    if (sum - 1.0).abs() > ARITHMETIC_TOL {
        return Err(Error::InvalidArgument(format!("q1 + q2 + q3 = {sum}, expected 1")));
    }
    Ok(())
}

/// `{√(1-p) I, √(p q1) σx, √(p q2) σy, √(p q3) σz}`.
pub fn pauli_kraus(p: f64, q1: f64, q2: f64, q3: f64) -> Result<KrausSet> {
    check_pauli_weights(p, [q1, q2, q3])?;
    let scale = |m: CMatrix, w: f64| m * r(w.sqrt());
    KrausSet::new(
        vec![
            scale(CMatrix::identity(2, 2), 1.0 - p),
            scale(pauli_x(), p * q1),
            scale(pauli_y(), p * q2),
            scale(pauli_z(), p * q3),
        ],
        labels(&["I", "X", "Y", "Z"]),
    )
}

fn check_weights(gamma: &[f64]) -> Result<()> {
    if gamma.is_empty() {
        return Err(Error::InvalidArgument("environment weights are empty".into()));
    }
    for &g in gamma {
        check_probability("env_weight", g)?;
    }
    let sum: f64 = gamma.iter().sum();
    if (sum - 1.0).abs() > ARITHMETIC_TOL {
        return Err(Error::InvalidArgument(format!("environment weights sum to {sum}, expected 1")));
    }
    Ok(())
}

/// Kraus operators of a system–environment evolution whose unitary may depend
/// on the initial environment basis state: `M_ij = √γ_j ⟨i|_E W_j |j⟩_E`.
///
/// `branches[j]` acts on `S ⊗ E` with `dim E = gamma.len()`. Labels are
/// `M{i}{j}` (environment output first).
pub fn kraus_from_branches(branches: &[UnitaryMatrix], gamma: &[f64]) -> Result<KrausSet> {
    check_weights(gamma)?;
    let de = gamma.len();
    if branches.len() != de {
        return Err(Error::DimensionMismatch {
            expected: de,
            actual: branches.len(),
        });
    }
    let dim = branches[0].dim();
    if !dim.is_multiple_of(de) || dim / de == 0 {
        return Err(Error::DimensionMismatch {
            expected: de,
            actual: dim,
        });
    }
    let ds = dim / de;
    let mut operators = Vec::with_capacity(de * de);
    let mut names = Vec::with_capacity(de * de);
    for (j, (w, &g)) in branches.iter().zip(gamma).enumerate() {
        if w.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: w.dim(),
            });
        }
        let residual = w.residual();
        if residual > STRUCTURAL_TOL {
            return Err(Error::NotUnitary(residual));
        }
        let u = w.matrix();
        let weight = g.sqrt();
        for i in 0..de {
            let m = CMatrix::from_fn(ds, ds, |out, inp| u[(out * de + i, inp * de + j)] * weight);
            operators.push(m);
            names.push(format!("M{i}{j}"));
        }
    }
    // order by label so the output-major convention reads naturally
    let mut order: Vec<usize> = (0..operators.len()).collect();
    order.sort_by(|&a, &b| names[a].cmp(&names[b]));
    let operators = order.iter().map(|&k| operators[k].clone()).collect();
    let names = order.iter().map(|&k| names[k].clone()).collect();
    KrausSet::new(operators, names)
}

/// `M_ij = √γ_j ⟨i|U|j⟩` for a single unitary on `S ⊗ E`.
pub fn kraus_from_unitary(u: &UnitaryMatrix, gamma: &[f64]) -> Result<KrausSet> {
    let branches = vec![u.clone(); gamma.len()];
    kraus_from_branches(&branches, gamma)
}

/// The four named channel families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Dephasing,
    Gad,
    Sgad,
    Pauli,
}

impl std::str::FromStr for ChannelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dephasing" => Ok(Self::Dephasing),
            "gad" => Ok(Self::Gad),
            "sgad" => Ok(Self::Sgad),
            "pauli" => Ok(Self::Pauli),
            other => Err(Error::InvalidArgument(format!("unknown channel kind `{other}`"))),
        }
    }
}

impl std::fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Dephasing => "dephasing",
            Self::Gad => "gad",
            Self::Sgad => "sgad",
            Self::Pauli => "pauli",
        })
    }
}

/// Channel family together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "channel", rename_all = "lowercase")]
pub enum ChannelParams {
    Dephasing { p: f64 },
    Gad { p: f64, alpha2_sq: f64 },
    Sgad(SgadParams),
    Pauli { p: f64, q1: f64, q2: f64, q3: f64 },
}

impl ChannelParams {
    pub fn kind(&self) -> ChannelKind {
        match self {
            Self::Dephasing { .. } => ChannelKind::Dephasing,
            Self::Gad { .. } => ChannelKind::Gad,
            Self::Sgad(_) => ChannelKind::Sgad,
            Self::Pauli { .. } => ChannelKind::Pauli,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.kraus().map(|_| ())
    }

    pub fn kraus(&self) -> Result<KrausSet> {
        match *self {
            Self::Dephasing { p } => dephasing_kraus(p),
            Self::Gad { p, alpha2_sq } => gad_kraus(p, alpha2_sq),
            Self::Sgad(ref s) => sgad_kraus(s),
            Self::Pauli { p, q1, q2, q3 } => pauli_kraus(p, q1, q2, q3),
        }
    }

    /// Ground-state weight of the environment qubit (zero temperature for
    /// the channels that have no bath parameter).
    pub fn alpha2_sq(&self) -> f64 {
        match *self {
            Self::Gad { alpha2_sq, .. } => alpha2_sq,
            Self::Sgad(s) => s.alpha2_sq,
            Self::Dephasing { .. } | Self::Pauli { .. } => 1.0,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct KrausRecord {
    labels: Vec<String>,
    operators: Vec<MatrixRecord>,
}

impl Serialize for KrausSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let d = self.dim();
        KrausRecord {
            labels: self.labels.clone(),
            operators: self
                .operators
                .iter()
                .map(|m| MatrixRecord::from_matrix(m, &[d]))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for KrausSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let record = KrausRecord::deserialize(d)?;
        let operators = record
            .operators
            .iter()
            .map(MatrixRecord::to_matrix)
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        KrausSet::new(operators, record.labels).map_err(serde::de::Error::custom)
    }
}

/// Pure-state density matrix of `a|0⟩ + b|1⟩` (no normalization check).
pub fn qubit_density(a: C64, b: C64) -> CMatrix {
    let v = [a, b];
    CMatrix::from_fn(2, 2, |i, j| v[i] * v[j].conj())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{matrix_from_rows, real_diagonal, Tensor};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn plus() -> DensityMatrix {
        DensityMatrix::new(CMatrix::from_element(2, 2, r(0.5)), vec![2]).unwrap()
    }

    fn qubit_rho(m: CMatrix) -> DensityMatrix {
        DensityMatrix::new(m, vec![2]).unwrap()
    }

    #[test]
    fn identity_channel_leaves_state() {
        let rho = plus();
        assert_eq!(kraus_apply(&rho, &KrausSet::identity(2)).unwrap(), rho);
    }

    #[test]
    fn dephasing_examples() {
        let out = kraus_apply(&plus(), &dephasing_kraus(1.0).unwrap()).unwrap();
        assert!(max_abs_diff(out.matrix(), &real_diagonal(&[0.5, 0.5])) < 1e-15);

        let k = dephasing_kraus(0.0).unwrap();
        assert_eq!(k.operators()[0], CMatrix::identity(2, 2));
        assert_eq!(k.operators()[1], CMatrix::zeros(2, 2));

        let k = dephasing_kraus(0.5).unwrap();
        assert!(max_abs_diff(&k.operators()[0], &real_diagonal(&[1.0, FRAC_1_SQRT_2])) < 1e-15);
        assert!(max_abs_diff(&k.operators()[1], &real_diagonal(&[0.0, FRAC_1_SQRT_2])) < 1e-15);

        assert!(matches!(dephasing_kraus(1.2), Err(Error::OutOfRange { name: "p", .. })));
    }

    #[test]
    fn gad_full_damping_reaches_thermal_state() {
        let k = gad_kraus(1.0, 0.7).unwrap();
        for rho in [plus(), qubit_rho(real_diagonal(&[0.0, 1.0])), qubit_rho(real_diagonal(&[1.0, 0.0]))] {
            let out = kraus_apply(&rho, &k).unwrap();
            assert!(max_abs_diff(out.matrix(), &real_diagonal(&[0.7, 0.3])) < 1e-15);
        }
    }

    #[test]
    fn gad_at_zero_temperature_is_amplitude_damping() {
        let p = 0.35;
        let out = kraus_apply(&qubit_rho(real_diagonal(&[0.0, 1.0])), &gad_kraus(p, 1.0).unwrap()).unwrap();
        assert!(max_abs_diff(out.matrix(), &real_diagonal(&[p, 1.0 - p])) < 1e-15);
        let id = gad_kraus(0.0, 0.4).unwrap();
        assert!(action_distance(&id, &KrausSet::identity(2)).unwrap() < 1e-15);
    }

    #[test]
    fn completeness_examples() {
        assert_eq!(completeness_residual(&KrausSet::identity(2)), 0.0);
        assert!(completeness_residual(&gad_kraus(0.3, 0.8).unwrap()) < 1e-12);
        let doubled = KrausSet::unchecked(
            vec![CMatrix::identity(2, 2), CMatrix::identity(2, 2)],
            labels(&["A", "B"]),
        )
        .unwrap();
        assert!((completeness_residual(&doubled) - 2f64.sqrt()).abs() < 1e-15);
        assert!(matches!(kraus_apply(&plus(), &doubled), Err(Error::InvalidChannel(_))));
        assert!(KrausSet::new(vec![CMatrix::identity(2, 2)], vec![]).is_err());
        assert!(KrausSet::new(vec![], vec![]).is_err());
    }

    #[test]
    fn pauli_examples() {
        let flip = kraus_apply(&plus(), &pauli_kraus(1.0, 0.0, 0.0, 1.0).unwrap()).unwrap();
        let expected = CMatrix::from_row_slice(2, 2, &[r(0.5), r(-0.5), r(-0.5), r(0.5)]);
        assert!(max_abs_diff(flip.matrix(), &expected) < 1e-15);
        assert!(action_distance(&pauli_kraus(0.0, 0.2, 0.3, 0.5).unwrap(), &KrausSet::identity(2)).unwrap() < 1e-15);
        assert!(matches!(pauli_kraus(0.5, 0.5, 0.5, 0.5), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn sgad_examples() {
        let zero = SgadParams {
            alpha: 0.0,
            beta: 0.0,
            mu: 0.0,
            nu: 0.0,
            phi: 0.4,
            lambda: 1.1,
            alpha2_sq: 0.6,
        };
        assert!(action_distance(&sgad_kraus(&zero).unwrap(), &KrausSet::identity(2)).unwrap() < 1e-15);
        let reduced = sgad_kraus(&SgadParams::gad_reduction(0.3, 0.6)).unwrap();
        assert!(action_distance(&reduced, &gad_kraus(0.3, 0.6).unwrap()).unwrap() < 1e-15);
    }

    #[test]
    fn bloch_vector_examples() {
        assert_eq!(bloch_vector(&DensityMatrix::maximally_mixed(vec![2])).unwrap(), [0.0, 0.0, 0.0]);
        assert_eq!(bloch_vector(&qubit_rho(real_diagonal(&[1.0, 0.0]))).unwrap(), [0.0, 0.0, 1.0]);
        assert_eq!(bloch_vector(&plus()).unwrap(), [1.0, 0.0, 0.0]);
        let r_state = qubit_rho(qubit_density(r(FRAC_1_SQRT_2), I * FRAC_1_SQRT_2));
        let b = bloch_vector(&r_state).unwrap();
        assert!((b[1] - 1.0).abs() < 1e-15);
        assert!(bloch_vector(&DensityMatrix::maximally_mixed(vec![4])).is_err());
    }

    #[test]
    fn extraction_from_identity_and_swap() {
        let id = UnitaryMatrix::identity(4);
        let k = kraus_from_unitary(&id, &[1.0, 0.0]).unwrap();
        assert_eq!(k.get("M00").unwrap(), &CMatrix::identity(2, 2));
        for label in ["M01", "M10", "M11"] {
            assert_eq!(k.get(label).unwrap(), &CMatrix::zeros(2, 2));
        }

        let swap = UnitaryMatrix::new(matrix_from_rows(&[
            &[ONE, ZERO, ZERO, ZERO],
            &[ZERO, ZERO, ONE, ZERO],
            &[ZERO, ONE, ZERO, ZERO],
            &[ZERO, ZERO, ZERO, ONE],
        ]))
        .unwrap();
        let k = kraus_from_unitary(&swap, &[1.0, 0.0]).unwrap();
        // ⟨i|_E SWAP |0⟩_E = |0⟩⟨i|
        let ket0_bra0 = matrix_from_rows(&[&[ONE, ZERO], &[ZERO, ZERO]]);
        let ket0_bra1 = matrix_from_rows(&[&[ZERO, ONE], &[ZERO, ZERO]]);
        assert_eq!(k.get("M00").unwrap(), &ket0_bra0);
        assert_eq!(k.get("M10").unwrap(), &ket0_bra1);
        // reset channel: every input goes to |0⟩⟨0|
        let out = kraus_apply(&plus(), &k).unwrap();
        assert!(max_abs_diff(out.matrix(), &ket0_bra0) < 1e-15);

        assert!(kraus_from_unitary(&id, &[0.5, 0.6]).is_err());
        let wide = UnitaryMatrix::identity(2).tensor(&UnitaryMatrix::identity(4));
        assert_eq!(kraus_from_unitary(&wide, &[0.25; 4]).unwrap().len(), 16);
    }

    #[test]
    fn kraus_set_json_round_trip() {
        let k = sgad_kraus(&SgadParams {
            alpha: 0.1,
            beta: 0.2,
            mu: 0.3,
            nu: 0.4,
            phi: 0.5,
            lambda: 0.6,
            alpha2_sq: 0.7,
        })
        .unwrap();
        let text = serde_json::to_string(&k).unwrap();
        let back: KrausSet = serde_json::from_str(&text).unwrap();
        assert_eq!(back, k);
        let params = ChannelParams::Gad { p: 0.2, alpha2_sq: 0.9 };
        let text = serde_json::to_string(&params).unwrap();
        assert_eq!(text, r#"{"channel":"gad","p":0.2,"alpha2_sq":0.9}"#);
        assert_eq!(serde_json::from_str::<ChannelParams>(&text).unwrap(), params);
    }
}
