//! Value types shared by every module: dense complex matrices, qubit states,
//! measurement settings and the correlation tensor.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = [f64; 3];

/// Default tolerance for Hermiticity, trace and positivity checks.
pub const DENSITY_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm_sq(a: &Vec3) -> f64 {
    dot(a, a)
}

/// Square dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    /// Builds a `dim × dim` matrix from row-major entries.
    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if dim == 0 {
            return Err(Error::domain("matrix dimension must be positive"));
        }
        if entries.len() != dim * dim {
            return Err(Error::domain(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(Self(DMatrix::from_row_slice(dim, dim, entries)))
    }

    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || m.nrows() == 0 {
            return Err(Error::domain(format!(
                "matrix must be square and non-empty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self(m))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    /// Projector |ψ⟩⟨ψ| for a (not necessarily normalized) amplitude vector.
    pub fn outer(psi: &[Complex64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|a| a.norm_sqr()).sum();
        if psi.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::domain("state vector must be non-zero and finite"));
        }
        let d = psi.len();
        let m = DMatrix::from_fn(d, d, |r, c| psi[r] * psi[c].conj() / norm);
        Ok(Self(m))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn to_row_major(&self) -> Vec<Complex64> {
        let d = self.dim();
        (0..d * d).map(|k| self.0[(k / d, k % d)]).collect()
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        Self(self.0.kronecker(&other.0))
    }

    pub fn scale(&self, s: f64) -> ComplexMatrix {
        Self(&self.0 * Complex64::new(s, 0.0))
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::domain("dimension mismatch in matrix sum"));
        }
        Ok(Self(&self.0 + &other.0))
    }

    /// tr(self · other) without forming the product.
    pub fn trace_product(&self, other: &ComplexMatrix) -> Complex64 {
        let d = self.dim();
        let mut acc = ZERO;
        for r in 0..d {
            for c in 0..d {
                acc += self.0[(r, c)] * other.0[(c, r)];
            }
        }
        acc
    }

    /// Largest entrywise |A − A†|.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0_f64;
        for r in 0..d {
            for c in r..d {
                worst = worst.max((self.0[(r, c)] - self.0[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues of the Hermitian part (A + A†)/2, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let h = (&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0);
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// A density-matrix property that failed validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "property", rename_all = "kebab-case")]
pub enum DensityViolation {
    NotHermitian { max_deviation: f64 },
    TraceNotOne { trace_re: f64, trace_im: f64 },
    NotPositive { min_eigenvalue: f64 },
}

impl fmt::Display for DensityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DensityViolation::NotHermitian { max_deviation } => {
                write!(f, "not Hermitian (max |A-A†| = {max_deviation:e})")
            }
            DensityViolation::TraceNotOne { trace_re, trace_im } => {
                write!(f, "trace {trace_re}+{trace_im}i is not 1")
            }
            DensityViolation::NotPositive { min_eigenvalue } => {
                write!(
                    f,
                    "not positive semidefinite (min eigenvalue {min_eigenvalue:e})"
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DensityVerdict {
    pub violations: Vec<DensityViolation>,
}

impl DensityVerdict {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for DensityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Checks Hermiticity, unit trace and positive semidefiniteness, each within `tol`.
pub fn validate_density_matrix(m: &ComplexMatrix, tol: f64) -> DensityVerdict {
    let mut violations = Vec::new();
    let herm = m.hermiticity_defect();
    if herm > tol {
        violations.push(DensityViolation::NotHermitian {
            max_deviation: herm,
        });
    }
    let tr = m.trace();
    if (tr - ONE).norm() > tol {
        violations.push(DensityViolation::TraceNotOne {
            trace_re: tr.re,
            trace_im: tr.im,
        });
    }
    let min_ev = m.hermitian_eigenvalues().first().copied().unwrap_or(0.0);
    if min_ev < -tol {
        violations.push(DensityViolation::NotPositive {
            min_eigenvalue: min_ev,
        });
    }
    DensityVerdict { violations }
}

/// Pauli matrices σ_x, σ_y, σ_z.
pub fn pauli(axis: usize) -> ComplexMatrix {
    let e = match axis {
        0 => [ZERO, ONE, ONE, ZERO],
        1 => [ZERO, -I, I, ZERO],
        2 => [ONE, ZERO, ZERO, -ONE],
        _ => panic!("Pauli axis must be 0, 1 or 2"),
    };
    ComplexMatrix(DMatrix::from_row_slice(2, 2, &e))
}

/// Spin observable n·σ as a 2×2 matrix.
pub fn spin_observable(n: &Vec3) -> ComplexMatrix {
    let e = [
        Complex64::new(n[2], 0.0),
        Complex64::new(n[0], -n[1]),
        Complex64::new(n[0], n[1]),
        Complex64::new(-n[2], 0.0),
    ];
    ComplexMatrix(DMatrix::from_row_slice(2, 2, &e))
}

/// Single-qubit density matrix together with its Bloch vector.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitState {
    rho: ComplexMatrix,
    bloch: Vec3,
}

impl QubitState {
    pub fn new(rho: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(rho, DENSITY_TOL)
    }

    pub fn with_tolerance(rho: ComplexMatrix, tol: f64) -> Result<Self> {
        if rho.dim() != 2 {
            return Err(Error::domain(format!(
                "qubit density matrix must be 2x2, got {0}x{0}",
                rho.dim()
            )));
        }
        let verdict = validate_density_matrix(&rho, tol);
        if !verdict.is_valid() {
            return Err(Error::InvalidDensity(verdict));
        }
        let bloch = bloch_of(&rho);
        Ok(Self { rho, bloch })
    }

    /// ρ = (I + b·σ)/2; requires |b| ≤ 1 within [`DENSITY_TOL`].
    pub fn from_bloch(b: Vec3) -> Result<Self> {
        if b.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("Bloch vector must be finite"));
        }
        let n2 = norm_sq(&b);
        if n2 > 1.0 + DENSITY_TOL {
            return Err(Error::domain(format!(
                "Bloch vector norm {} lies outside the Bloch ball",
                n2.sqrt()
            )));
        }
        let rho = ComplexMatrix::identity(2)
            .add(&spin_observable(&b))
            .expect("2x2")
            .scale(0.5);
        Ok(Self { rho, bloch: b })
    }

    /// Pure state from (unnormalized) amplitudes α|0⟩ + β|1⟩.
    pub fn pure(alpha: Complex64, beta: Complex64) -> Result<Self> {
        Self::new(ComplexMatrix::outer(&[alpha, beta])?)
    }

    /// Pure state whose Bloch vector points along n(θ, φ).
    pub fn pure_along(theta: f64, phi: f64) -> Self {
        let alpha = Complex64::new((theta / 2.0).cos(), 0.0);
        let beta = Complex64::from_polar((theta / 2.0).sin(), phi);
        Self::pure(alpha, beta).expect("unit amplitudes")
    }

    pub fn zero() -> Self {
        Self::pure(ONE, ZERO).expect("|0>")
    }

    pub fn maximally_mixed() -> Self {
        Self::from_bloch([0.0; 3]).expect("origin of the Bloch ball")
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn bloch(&self) -> Vec3 {
        self.bloch
    }

    pub fn bloch_norm_sq(&self) -> f64 {
        norm_sq(&self.bloch)
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        (self.bloch_norm_sq() - 1.0).abs() <= tol
    }

    /// (1 − p)ρ + p·I/2.
    pub fn depolarize(&self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain("depolarizing weight must lie in [0, 1]"));
        }
        Self::from_bloch(self.bloch.map(|x| (1.0 - p) * x))
    }
}

/// Bloch vector (tr ρσ_x, tr ρσ_y, tr ρσ_z) of a validated qubit state.
pub fn bloch_vector(q: &QubitState) -> Vec3 {
    q.bloch
}

/// Bloch vector of an arbitrary 2×2 matrix after density validation.
pub fn bloch_vector_checked(rho: &ComplexMatrix, tol: f64) -> Result<Vec3> {
    Ok(QubitState::with_tolerance(rho.clone(), tol)?.bloch)
}

fn bloch_of(rho: &ComplexMatrix) -> Vec3 {
    [0, 1, 2].map(|axis| rho.trace_product(&pauli(axis)).re)
}

/// Ordered list of single-qubit states ρ₁ ⊗ ⋯ ⊗ ρ_N.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    parties: Vec<QubitState>,
}

impl ProductState {
    pub fn new(parties: Vec<QubitState>) -> Result<Self> {
        if parties.is_empty() {
            return Err(Error::domain("a product state needs at least one party"));
        }
        Ok(Self { parties })
    }

    pub fn parties(&self) -> &[QubitState] {
        &self.parties
    }

    pub fn n_parties(&self) -> usize {
        self.parties.len()
    }

    /// Dense joint density matrix, first party most significant.
    pub fn joint_rho(&self) -> ComplexMatrix {
        let mut it = self.parties.iter();
        let first = it.next().expect("non-empty").rho.clone();
        it.fold(first, |acc, q| acc.kron(&q.rho))
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        self.parties.iter().all(|q| q.is_pure(tol))
    }
}

/// Spherical measurement direction, θ ∈ [0, π], φ ∈ [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Setting {
    theta: f64,
    phi: f64,
}

impl Setting {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::domain(format!("theta = {theta} outside [0, π]")));
        }
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::domain(format!("phi = {phi} outside [0, 2π)")));
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Direction cosines (sinθ cosφ, sinθ sinφ, cosθ).
    pub fn unit_vector(&self) -> Vec3 {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

pub fn setting_to_unit_vector(s: &Setting) -> Vec3 {
    s.unit_vector()
}

/// The 3^N array T_{i₁…i_N} of joint Pauli expectations, stored with the
/// first party's index most significant and axes ordered x, y, z.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTensor {
    n_parties: usize,
    values: Vec<f64>,
}

impl CorrelationTensor {
    pub fn new(n_parties: usize, values: Vec<f64>) -> Result<Self> {
        if n_parties == 0 {
            return Err(Error::domain("correlation tensor needs at least one party"));
        }
        let expected = 3usize
            .checked_pow(n_parties as u32)
            .ok_or_else(|| Error::domain("too many parties"))?;
        if values.len() != expected {
            return Err(Error::domain(format!(
                "expected {expected} tensor entries for N = {n_parties}, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("tensor entries must be finite"));
        }
        Ok(Self { n_parties, values })
    }

    /// Outer product of per-party vectors.
    pub fn outer_product(vectors: &[Vec3]) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::domain("outer product needs at least one vector"));
        }
        let mut values = vec![1.0];
        for v in vectors {
            values = values
                .iter()
                .flat_map(|a| v.iter().map(move |b| a * b))
                .collect();
        }
        Self::new(vectors.len(), values)
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Entry at a multi-index with components in 0..3.
    pub fn get(&self, index: &[usize]) -> f64 {
        assert_eq!(index.len(), self.n_parties, "multi-index length");
        let flat = index.iter().fold(0usize, |acc, &i| {
            assert!(i < 3, "axis index out of range");
            acc * 3 + i
        });
        self.values[flat]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Σ T² with compensated summation in flat index order.
    pub fn sum_of_squares(&self) -> f64 {
        compensated_sum(self.values.iter().map(|v| v * v))
    }
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum in iteration order.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = CompensatedSum::default();
    values.into_iter().for_each(|v| acc.add(v));
    acc.value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn unit_vector_axes() {
        let pole = Setting::new(0.0, 0.0).unwrap().unit_vector();
        assert_eq!(pole, [0.0, 0.0, 1.0]);
        let x = Setting::new(PI / 2.0, 0.0).unwrap().unit_vector();
        assert_abs_diff_eq!(x[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x[2], 0.0, epsilon = 1e-15);
        let y = Setting::new(PI / 2.0, PI / 2.0).unwrap().unit_vector();
        assert_abs_diff_eq!(y[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(y[1], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(y[2], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn setting_rejects_out_of_range() {
        assert!(Setting::new(-0.1, 0.0).is_err());
        assert!(Setting::new(PI + 1e-9, 0.0).is_err());
        assert!(Setting::new(1.0, 2.0 * PI).is_err());
        assert!(Setting::new(1.0, -1e-12).is_err());
        assert!(Setting::new(f64::NAN, 0.0).is_err());
        assert!(Setting::new(PI, 0.0).is_ok());
    }

    #[test]
    fn bloch_of_basis_states() {
        assert_eq!(QubitState::zero().bloch(), [0.0, 0.0, 1.0]);
        assert_eq!(QubitState::maximally_mixed().bloch(), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn bloch_of_plus_state_matches_direct_trace() {
        let plus = QubitState::pure(c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)).unwrap();
        // direct 2x2 trace: tr(ρσ) = Σ_rc ρ_rc σ_cr
        let rho = plus.rho().to_row_major();
        let oracle: Vec<f64> = (0..3)
            .map(|a| {
                let s = pauli(a).to_row_major();
                (rho[0] * s[0] + rho[1] * s[2] + rho[2] * s[1] + rho[3] * s[3]).re
            })
            .collect();
        let b = plus.bloch();
        for k in 0..3 {
            assert_abs_diff_eq!(b[k], oracle[k], epsilon = 1e-15);
        }
        assert_abs_diff_eq!(b[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b[1], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b[2], 0.0, epsilon = 1e-15);
    }

    #[test]
    fn validate_accepts_valid_states() {
        let half = ComplexMatrix::identity(2).scale(0.5);
        assert!(validate_density_matrix(&half, DENSITY_TOL).is_valid());
        let zero = QubitState::zero();
        assert!(validate_density_matrix(zero.rho(), DENSITY_TOL).is_valid());
    }

    #[test]
    fn validate_flags_negative_eigenvalue() {
        let m = ComplexMatrix::from_row_major(2, &[c(1.5), c(0.0), c(0.0), c(-0.5)]).unwrap();
        let v = validate_density_matrix(&m, DENSITY_TOL);
        assert_eq!(
            v.violations,
            vec![DensityViolation::NotPositive {
                min_eigenvalue: -0.5
            }]
        );
    }

    #[test]
    fn validate_lists_every_failure() {
        let m = ComplexMatrix::from_row_major(2, &[c(2.0), c(1.0), c(0.0), c(-1.0)]).unwrap();
        let v = validate_density_matrix(&m, DENSITY_TOL);
        assert_eq!(v.violations.len(), 2);
        assert!(matches!(
            v.violations[0],
            DensityViolation::NotHermitian { .. }
        ));
        assert!(matches!(
            v.violations[1],
            DensityViolation::NotPositive { .. }
        ));

        let m = ComplexMatrix::identity(2);
        let v = validate_density_matrix(&m, DENSITY_TOL);
        assert!(matches!(
            v.violations[..],
            [DensityViolation::TraceNotOne { .. }]
        ));
    }

    #[test]
    fn qubit_rejects_bad_input() {
        assert!(matches!(
            QubitState::new(ComplexMatrix::identity(2)),
            Err(Error::InvalidDensity(_))
        ));
        assert!(QubitState::new(ComplexMatrix::identity(4).scale(0.25)).is_err());
        assert!(QubitState::from_bloch([1.0, 1.0, 0.0]).is_err());
        assert!(QubitState::pure(c(0.0), c(0.0)).is_err());
    }

    #[test]
    fn bloch_round_trip_and_purity() {
        let q = QubitState::from_bloch([0.0, 0.0, 0.5]).unwrap();
        assert_abs_diff_eq!(q.rho().get(0, 0).re, 0.75, epsilon = 1e-15);
        assert!(!q.is_pure(1e-12));
        let p = QubitState::pure_along(1.1, 4.0);
        assert!(p.is_pure(1e-12));
        let n = Setting::new(1.1, 4.0).unwrap().unit_vector();
        for (b, m) in p.bloch().iter().zip(n) {
            assert_abs_diff_eq!(*b, m, epsilon = 1e-14);
        }
    }

    #[test]
    fn matrix_from_row_major_checks_length() {
        assert!(ComplexMatrix::from_row_major(2, &[c(1.0); 3]).is_err());
        assert!(ComplexMatrix::from_row_major(0, &[]).is_err());
    }

    #[test]
    fn tensor_shape_checks() {
        assert!(CorrelationTensor::new(2, vec![0.0; 8]).is_err());
        assert!(CorrelationTensor::new(0, vec![]).is_err());
        let t = CorrelationTensor::outer_product(&[[1.0, 2.0, 3.0], [0.0, 1.0, 0.0]]).unwrap();
        assert_eq!(t.get(&[2, 1]), 3.0);
        assert_eq!(t.get(&[1, 0]), 0.0);
        assert_eq!(t.sum_of_squares(), 14.0);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let v = [1e16, 1.0, -1e16];
        assert_eq!(compensated_sum(v), 1.0);
    }
}
