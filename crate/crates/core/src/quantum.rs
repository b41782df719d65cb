//! Quantum correlation functions, the correlation tensor and the
//! separable-state bound on the scalar product.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{
    norm_sq, pauli, spin_observable, validate_density_matrix, ComplexMatrix, CorrelationTensor,
    ProductState, QubitState, Setting, DENSITY_TOL,
};

/// Default tolerance on Σ T² ≤ 1 for the separability check.
pub const SEPARABILITY_TOL: f64 = 1e-9;

/// Largest party count accepted for dense joint states.
pub const MAX_DENSE_PARTIES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JointKind {
    ProductOfPure,
    ProductOfMixed,
    General,
}

/// An N-qubit density matrix, optionally remembering its product factors.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    n_parties: usize,
    rho: ComplexMatrix,
    kind: JointKind,
    factors: Option<ProductState>,
}

impl JointState {
    pub fn product(state: ProductState) -> Self {
        let kind = if state.is_pure(1e-12) {
            JointKind::ProductOfPure
        } else {
            JointKind::ProductOfMixed
        };
        Self {
            n_parties: state.n_parties(),
            rho: state.joint_rho(),
            kind,
            factors: Some(state),
        }
    }

    /// A general joint state; `rho` must be a valid 2^N × 2^N density matrix.
    pub fn general(n_parties: usize, rho: ComplexMatrix) -> Result<Self> {
        Self::general_with_tolerance(n_parties, rho, DENSITY_TOL)
    }

    pub fn general_with_tolerance(n_parties: usize, rho: ComplexMatrix, tol: f64) -> Result<Self> {
        if n_parties == 0 || n_parties > MAX_DENSE_PARTIES {
            return Err(Error::domain(format!(
                "party count must lie in 1..={MAX_DENSE_PARTIES}, got {n_parties}"
            )));
        }
        if rho.dim() != 1 << n_parties {
            return Err(Error::domain(format!(
                "{n_parties} qubits need a {0}x{0} matrix, got {1}x{1}",
                1 << n_parties,
                rho.dim()
            )));
        }
        let verdict = validate_density_matrix(&rho, tol);
        if !verdict.is_valid() {
            return Err(Error::InvalidDensity(verdict));
        }
        Ok(Self {
            n_parties,
            rho,
            kind: JointKind::General,
            factors: None,
        })
    }

    /// (|0…0⟩ + |1…1⟩)/√2.
    pub fn ghz(n_parties: usize) -> Result<Self> {
        if !(2..=MAX_DENSE_PARTIES).contains(&n_parties) {
            return Err(Error::domain(format!(
                "GHZ state needs 2..={MAX_DENSE_PARTIES} parties, got {n_parties}"
            )));
        }
        let dim = 1usize << n_parties;
        let mut psi = vec![Complex64::new(0.0, 0.0); dim];
        psi[0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        psi[dim - 1] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self::general(n_parties, ComplexMatrix::outer(&psi)?)
    }

    /// (|00⟩ + |11⟩)/√2.
    pub fn bell() -> Self {
        Self::ghz(2).expect("two-party GHZ")
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn kind(&self) -> JointKind {
        self.kind
    }

    pub fn factors(&self) -> Option<&ProductState> {
        self.factors.as_ref()
    }
}

fn check_party_count(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::domain(format!(
            "expected {expected} settings, got {got}"
        )));
    }
    Ok(())
}

/// E_Sep = tr[ρ (n₁·σ) ⊗ ⋯ ⊗ (n_N·σ)], evaluated on the dense joint matrix.
pub fn e_sep(state: &JointState, settings: &[Setting]) -> Result<f64> {
    check_party_count(state.n_parties, settings.len())?;
    let mut it = settings.iter().map(|s| spin_observable(&s.unit_vector()));
    let first = it.next().expect("at least one party");
    let observable = it.fold(first, |acc, o| acc.kron(&o));
    Ok(state.rho.trace_product(&observable).re)
}

/// tr[ρ σ_{a₁} ⊗ ⋯ ⊗ σ_{a_N}] using the one-nonzero-per-row structure of
/// Pauli strings.
fn pauli_string_expectation(rho: &ComplexMatrix, axes: &[usize]) -> f64 {
    let n = axes.len();
    let dim = rho.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for row in 0..dim {
        let mut col = row;
        let mut phase = Complex64::new(1.0, 0.0);
        for (k, &axis) in axes.iter().enumerate() {
            let bit = (row >> (n - 1 - k)) & 1;
            match axis {
                0 => col ^= 1 << (n - 1 - k),
                1 => {
                    col ^= 1 << (n - 1 - k);
                    // σ_y: ⟨0|σ_y|1⟩ = −i, ⟨1|σ_y|0⟩ = i
                    phase *= if bit == 0 {
                        Complex64::new(0.0, -1.0)
                    } else {
                        Complex64::new(0.0, 1.0)
                    };
                }
                _ => {
                    if bit == 1 {
                        phase = -phase;
                    }
                }
            }
        }
        acc += rho.get(col, row) * phase;
    }
    acc.re
}

/// All 3^N Pauli-string expectations of the joint density matrix.
pub fn correlation_tensor(state: &JointState) -> CorrelationTensor {
    let n = state.n_parties;
    let len = 3usize.pow(n as u32);
    let mut axes = vec![0usize; n];
    let values = (0..len)
        .map(|flat| {
            let mut rest = flat;
            for k in (0..n).rev() {
                axes[k] = rest % 3;
                rest /= 3;
            }
            pauli_string_expectation(&state.rho, &axes)
        })
        .collect();
    CorrelationTensor::new(n, values).expect("3^N entries")
}

/// Same tensor through explicit Kronecker products of Pauli matrices and a
/// dense trace. Quadratically more work per entry; serves as a cross-check.
pub fn correlation_tensor_dense(state: &JointState) -> CorrelationTensor {
    let n = state.n_parties;
    let values = (0..3usize.pow(n as u32))
        .map(|flat| {
            let mut axes = vec![0usize; n];
            let mut rest = flat;
            for k in (0..n).rev() {
                axes[k] = rest % 3;
                rest /= 3;
            }
            let mut p = pauli(axes[0]);
            for &a in &axes[1..] {
                p = p.kron(&pauli(a));
            }
            state.rho.trace_product(&p).re
        })
        .collect();
    CorrelationTensor::new(n, values).expect("3^N entries")
}

/// Product-state fast path: T is the outer product of the Bloch vectors.
pub fn product_correlation_tensor(state: &ProductState) -> CorrelationTensor {
    let blochs: Vec<_> = state.parties().iter().map(QubitState::bloch).collect();
    CorrelationTensor::outer_product(&blochs).expect("non-empty product")
}

/// Full contraction Σ T_{i₁…i_N} c₁^{i₁} ⋯ c_N^{i_N}.
pub fn e_sep_from_tensor(t: &CorrelationTensor, settings: &[Setting]) -> Result<f64> {
    check_party_count(t.n_parties(), settings.len())?;
    let mut current: Vec<f64> = t.values().to_vec();
    // contract the last axis first; the last index is least significant
    for s in settings.iter().rev() {
        let c = s.unit_vector();
        current = current
            .chunks_exact(3)
            .map(|v| v[0] * c[0] + v[1] * c[1] + v[2] * c[2])
            .collect();
    }
    Ok(current[0])
}

/// (4π/3)^N.
pub fn separable_maximum(n_parties: usize) -> f64 {
    (4.0 * PI / 3.0).powi(n_parties as i32)
}

/// (E_Sep, E_Sep) in closed form: (4π/3)^N · Σ T².
pub fn scalar_product_exact(t: &CorrelationTensor) -> f64 {
    separable_maximum(t.n_parties()) * t.sum_of_squares()
}

/// Π_j |b_j|².
pub fn bloch_norm_product(state: &ProductState) -> f64 {
    state
        .parties()
        .iter()
        .map(|q| norm_sq(&q.bloch()))
        .product()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Separability {
    Satisfied,
    Violated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityVerdict {
    pub status: Separability,
    pub sum_of_squares: f64,
}

impl SeparabilityVerdict {
    pub fn is_violated(&self) -> bool {
        self.status == Separability::Violated
    }
}

/// Satisfied iff Σ T² ≤ 1 + tol.
pub fn separability_check(t: &CorrelationTensor, tol: f64) -> SeparabilityVerdict {
    let sum_of_squares = t.sum_of_squares();
    let status = if sum_of_squares <= 1.0 + tol {
        Separability::Satisfied
    } else {
        Separability::Violated
    };
    SeparabilityVerdict {
        status,
        sum_of_squares,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Independent oracle: build the Pauli string densely with Kronecker
    /// products and take tr(ρP).
    fn dense_oracle(rho: &ComplexMatrix, axes: &[usize]) -> f64 {
        let mut p = pauli(axes[0]);
        for &a in &axes[1..] {
            p = p.kron(&pauli(a));
        }
        (rho.as_matrix() * p.as_matrix()).trace().re
    }

    fn dense_tensor_oracle(state: &JointState) -> Vec<f64> {
        let n = state.n_parties();
        (0..3usize.pow(n as u32))
            .map(|flat| {
                let mut axes = vec![0; n];
                let mut rest = flat;
                for k in (0..n).rev() {
                    axes[k] = rest % 3;
                    rest /= 3;
                }
                dense_oracle(state.rho(), &axes)
            })
            .collect()
    }

    fn s(theta: f64, phi: f64) -> Setting {
        Setting::new(theta, phi).unwrap()
    }

    fn zero_zero() -> JointState {
        JointState::product(
            ProductState::new(vec![QubitState::zero(), QubitState::zero()]).unwrap(),
        )
    }

    #[test]
    fn e_sep_examples() {
        let one = JointState::product(ProductState::new(vec![QubitState::zero()]).unwrap());
        assert_abs_diff_eq!(e_sep(&one, &[s(0.0, 0.0)]).unwrap(), 1.0, epsilon = 1e-15);

        let zz = zero_zero();
        let settings = [s(0.0, 0.0), s(PI / 2.0, 0.0)];
        let got = e_sep(&zz, &settings).unwrap();
        // 4x4 oracle: σ_z ⊗ σ_x on |00⟩
        let obs = pauli(2).kron(&pauli(0));
        let oracle = (zz.rho().as_matrix() * obs.as_matrix()).trace().re;
        assert_abs_diff_eq!(got, oracle, epsilon = 1e-15);
        assert_abs_diff_eq!(got, 0.0, epsilon = 1e-15);

        let mixed =
            JointState::product(ProductState::new(vec![QubitState::maximally_mixed(); 2]).unwrap());
        assert_eq!(e_sep(&mixed, &[s(0.3, 1.0), s(2.0, 5.0)]).unwrap(), 0.0);
    }

    #[test]
    fn e_sep_rejects_wrong_length() {
        assert!(matches!(
            e_sep(&zero_zero(), &[s(0.0, 0.0)]),
            Err(Error::Domain(_))
        ));
        let t = correlation_tensor(&zero_zero());
        assert!(e_sep_from_tensor(&t, &[s(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn tensor_of_single_zero() {
        let one = JointState::product(ProductState::new(vec![QubitState::zero()]).unwrap());
        assert_eq!(correlation_tensor(&one).values(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn tensor_of_zero_zero_matches_oracle() {
        let zz = zero_zero();
        let t = correlation_tensor(&zz);
        let oracle = dense_tensor_oracle(&zz);
        for (a, b) in t.values().iter().zip(&oracle) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
        assert_eq!(t.get(&[2, 2]), 1.0);
        assert_abs_diff_eq!(t.sum_of_squares(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn tensor_of_bell_matches_oracle() {
        let bell = JointState::bell();
        let t = correlation_tensor(&bell);
        let oracle = dense_tensor_oracle(&bell);
        for (a, b) in t.values().iter().zip(&oracle) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
        let expected = [1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0];
        for (a, b) in t.values().iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn contraction_examples() {
        let t = CorrelationTensor::new(1, vec![0.0, 0.0, 1.0]).unwrap();
        assert_eq!(e_sep_from_tensor(&t, &[s(0.0, 0.0)]).unwrap(), 1.0);

        let bell = JointState::bell();
        let tb = correlation_tensor(&bell);
        let xx = [s(PI / 2.0, 0.0), s(PI / 2.0, 0.0)];
        let oracle = e_sep(&bell, &xx).unwrap();
        assert_abs_diff_eq!(oracle, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            e_sep_from_tensor(&tb, &xx).unwrap(),
            oracle,
            epsilon = 1e-15
        );

        // only the z slice of party 1 is nonzero; an equatorial setting kills it
        let tz = CorrelationTensor::outer_product(&[[0.0, 0.0, 1.0], [0.3, -0.2, 0.5]]).unwrap();
        let v = e_sep_from_tensor(&tz, &[s(PI / 2.0, 1.3), s(0.7, 2.0)]).unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn exact_scalar_products() {
        let pure = CorrelationTensor::new(1, vec![0.0, 0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(scalar_product_exact(&pure), 4.0 * PI / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(scalar_product_exact(&pure), 4.18879, epsilon = 1e-5);
        let mixed = CorrelationTensor::new(1, vec![0.0; 3]).unwrap();
        assert_eq!(scalar_product_exact(&mixed), 0.0);
        let bell = correlation_tensor(&JointState::bell());
        let v = scalar_product_exact(&bell);
        assert_abs_diff_eq!(v, 3.0 * (4.0 * PI / 3.0).powi(2), epsilon = 1e-12);
        assert_abs_diff_eq!(v, 52.638, epsilon = 1e-3);
    }

    #[test]
    fn bloch_norm_product_examples() {
        for n in 1..=4 {
            let st = ProductState::new(vec![QubitState::zero(); n]).unwrap();
            assert_eq!(bloch_norm_product(&st), 1.0);
        }
        let st = ProductState::new(vec![
            QubitState::maximally_mixed(),
            QubitState::zero(),
            QubitState::pure_along(1.0, 2.0),
        ])
        .unwrap();
        assert_eq!(bloch_norm_product(&st), 0.0);

        let rho = ComplexMatrix::from_row_major(
            2,
            &[0.75, 0.0, 0.0, 0.25].map(|x| Complex64::new(x, 0.0)),
        )
        .unwrap();
        let q = QubitState::new(rho).unwrap();
        assert_abs_diff_eq!(q.bloch()[2], 0.5, epsilon = 1e-15);
        let st = ProductState::new(vec![q]).unwrap();
        assert_abs_diff_eq!(bloch_norm_product(&st), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn separability_examples() {
        let st = ProductState::new(vec![
            QubitState::pure_along(0.4, 1.0),
            QubitState::pure_along(2.2, 5.0),
        ])
        .unwrap();
        let v = separability_check(
            &correlation_tensor(&JointState::product(st)),
            SEPARABILITY_TOL,
        );
        assert_eq!(v.status, Separability::Satisfied);
        assert_abs_diff_eq!(v.sum_of_squares, 1.0, epsilon = 1e-12);

        let v = separability_check(&correlation_tensor(&JointState::bell()), SEPARABILITY_TOL);
        assert!(v.is_violated());
        assert_abs_diff_eq!(v.sum_of_squares, 3.0, epsilon = 1e-12);

        let ghz = JointState::ghz(3).unwrap();
        let t = correlation_tensor(&ghz);
        let oracle: f64 = dense_tensor_oracle(&ghz).iter().map(|x| x * x).sum();
        let v = separability_check(&t, SEPARABILITY_TOL);
        assert!(v.is_violated());
        assert_abs_diff_eq!(v.sum_of_squares, oracle, epsilon = 1e-12);
        assert_abs_diff_eq!(v.sum_of_squares, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn ghz_family_matches_oracle() {
        for n in 2..=6 {
            let ghz = JointState::ghz(n).unwrap();
            let oracle: f64 = dense_tensor_oracle(&ghz).iter().map(|x| x * x).sum();
            let got = correlation_tensor(&ghz).sum_of_squares();
            assert_abs_diff_eq!(got, oracle, epsilon = 1e-12);
            let even = if n % 2 == 0 { 1.0 } else { 0.0 };
            assert_abs_diff_eq!(got, (1u32 << (n - 1)) as f64 + even, epsilon = 1e-12);
        }
    }

    #[test]
    fn general_state_validation() {
        assert!(JointState::general(2, ComplexMatrix::identity(2).scale(0.5)).is_err());
        assert!(JointState::general(2, ComplexMatrix::identity(4)).is_err());
        assert!(JointState::general(0, ComplexMatrix::identity(1)).is_err());
        let ok = JointState::general(2, ComplexMatrix::identity(4).scale(0.25)).unwrap();
        assert_eq!(ok.kind(), JointKind::General);
        assert!(JointState::ghz(1).is_err());
    }

    #[test]
    fn product_kind_tags() {
        assert_eq!(zero_zero().kind(), JointKind::ProductOfPure);
        let m = JointState::product(
            ProductState::new(vec![QubitState::zero(), QubitState::maximally_mixed()]).unwrap(),
        );
        assert_eq!(m.kind(), JointKind::ProductOfMixed);
        let f = m.factors().unwrap();
        assert!(f.joint_rho().max_abs_diff(m.rho()) <= 1e-12);
    }
}
