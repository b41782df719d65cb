//! Scalar products of N-qubit correlation functions over the full sphere of
//! measurement settings, for separable quantum states and for local
//! hidden-variable models.
//!
//! For a pure product state the scalar product ∫dΩ₁⋯∫dΩ_N E² equals
//! (4π/3)^N, while a deterministic hidden-variable model reaches (4π)^N, a
//! ratio of 3^N. The crate computes both sides in closed form and through
//! independent quadrature, and bundles the checks into reproducible scenarios.

pub mod analysis;
pub mod error;
pub mod lhv;
pub mod quadrature;
pub mod quantum;
pub mod types;

pub use error::{Error, Result};
pub use lhv::{
    e_lr, lhv_upper_bound, saturating_model, scalar_product_lhv, single_qubit_simulator_model,
    LhvModel, Outcome, ResponseFunction,
};
pub use quadrature::{
    build_grid, integrate_sphere, orthogonality_residual, scalar_product_numeric, SphereGrid,
};
pub use quantum::{
    bloch_norm_product, correlation_tensor, e_sep, e_sep_from_tensor, scalar_product_exact,
    separability_check, JointState, Separability,
};
pub use types::{
    bloch_vector, setting_to_unit_vector, validate_density_matrix, ComplexMatrix,
    CorrelationTensor, ProductState, QubitState, Setting,
};
