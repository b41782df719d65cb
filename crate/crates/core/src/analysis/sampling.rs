//! Seeded random states, settings and hidden-variable models for the
//! randomized scenarios and property suites.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::lhv::{EnsembleMember, LhvModel, Outcome, ResponseFunction, SignTable};
use crate::quadrature::SphereGrid;
use crate::types::{ComplexMatrix, ProductState, QubitState, Setting, Vec3};

/// Independent reproducible stream per scenario.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform on the sphere.
pub fn random_setting(rng: &mut impl Rng) -> Setting {
    let cos_theta: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..2.0 * PI);
    Setting::new(cos_theta.acos(), phi).expect("sampled in range")
}

pub fn random_unit_vector(rng: &mut impl Rng) -> Vec3 {
    random_setting(rng).unit_vector()
}

/// Uniform in the unit ball.
pub fn random_bloch_vector(rng: &mut impl Rng) -> Vec3 {
    let r = rng.random::<f64>().cbrt();
    random_unit_vector(rng).map(|x| r * x)
}

fn random_amplitude(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Pure qubit from random complex amplitudes.
pub fn random_pure_qubit(rng: &mut impl Rng) -> QubitState {
    loop {
        let (a, b) = (random_amplitude(rng), random_amplitude(rng));
        if a.norm_sqr() + b.norm_sqr() > 1e-6 {
            return QubitState::pure(a, b).expect("non-zero amplitudes");
        }
    }
}

/// ρ = G G† / tr(G G†) for a random complex G.
pub fn random_density_matrix(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let entries: Vec<Complex64> = (0..dim * dim).map(|_| random_amplitude(rng)).collect();
    let g = ComplexMatrix::from_row_major(dim, &entries).expect("square");
    let gg = g.as_matrix() * g.as_matrix().adjoint();
    let tr = gg.trace().re;
    ComplexMatrix::from_matrix(gg / Complex64::new(tr, 0.0)).expect("square")
}

pub fn random_mixed_qubit(rng: &mut impl Rng) -> QubitState {
    QubitState::new(random_density_matrix(rng, 2)).expect("G G† is a density matrix")
}

pub fn random_pure_product(rng: &mut impl Rng, n: usize) -> ProductState {
    ProductState::new((0..n).map(|_| random_pure_qubit(rng)).collect()).expect("n ≥ 1")
}

pub fn random_mixed_product(rng: &mut impl Rng, n: usize) -> ProductState {
    ProductState::new((0..n).map(|_| random_mixed_qubit(rng)).collect()).expect("n ≥ 1")
}

pub fn random_outcome(rng: &mut impl Rng) -> Outcome {
    if rng.random::<bool>() {
        Outcome::Plus
    } else {
        Outcome::Minus
    }
}

/// A random response from the full vocabulary; sign tables are sampled on `grid`.
pub fn random_response(rng: &mut impl Rng, grid: &SphereGrid) -> ResponseFunction {
    match rng.random_range(0..5) {
        0 => ResponseFunction::constant(random_outcome(rng)),
        1 => ResponseFunction::SignCosTheta,
        2 => ResponseFunction::SignDot {
            vector: random_unit_vector(rng),
        },
        3 => ResponseFunction::Threshold {
            bloch: random_bloch_vector(rng),
            lambda: rng.random(),
        },
        _ => {
            let signs = (0..grid.len()).map(|_| random_outcome(rng)).collect();
            ResponseFunction::SignTable {
                table: Arc::new(SignTable::from_signs(grid, signs).expect("sized to grid")),
            }
        }
    }
}

pub fn random_deterministic_model(rng: &mut impl Rng, n: usize, grid: &SphereGrid) -> LhvModel {
    LhvModel::deterministic((0..n).map(|_| random_response(rng, grid)).collect()).expect("n ≥ 1")
}

/// Ensemble of 1..=`max_members` members with random positive weights.
pub fn random_ensemble_model(
    rng: &mut impl Rng,
    n: usize,
    max_members: usize,
    grid: &SphereGrid,
) -> LhvModel {
    let k = rng.random_range(1..=max_members);
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let ensemble = raw
        .iter()
        .map(|w| EnsembleMember {
            weight: w / total,
            responses: (0..n).map(|_| random_response(rng, grid)).collect(),
        })
        .collect();
    LhvModel::new(n, ensemble).expect("normalized weights")
}
