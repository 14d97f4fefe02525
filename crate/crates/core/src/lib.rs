//! Finite-dimensional model spaces for finite Blaschke products, and
//! executable characterizations of asymmetric truncated Toeplitz operators.
//!
//! ```
//! use atto_core::prelude::*;
//!
//! let alpha = BlaschkeProduct::monomial(2).unwrap();
//! let beta = BlaschkeProduct::monomial(3).unwrap();
//! let nodes = default_node_count(alpha.degree(), beta.degree());
//! let (dom, cod) = (tm_basis(&alpha, nodes).unwrap(), tm_basis(&beta, nodes).unwrap());
//!
//! // A_z : K_{z^2} -> K_{z^3}
//! let a = atto_matrix(&dom, &cod, &dom.grid().sample(|z| z)).unwrap();
//! let zero = Complex64::new(0.0, 0.0);
//! let result = membership(&a, Variant::T1, DEFAULT_TOLERANCE, zero, zero).unwrap();
//! assert!(result.verdict);
//! ```

pub mod blaschke;
pub mod characterize;
pub mod error;
pub mod model_space;
pub mod operators;
pub mod sampling;

pub use num_complex::Complex64;

/// Tolerance for construction-time invariants (Gram matrix, conjugation).
pub const CONSTRUCTION_TOL: f64 = 1e-10;

/// Default relative tolerance for membership verdicts.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

pub mod prelude {
    pub use crate::blaschke::BlaschkeProduct;
    pub use crate::characterize::{
        defect_c2, defect_c3, defect_t1, equivalence_suite, membership, rank2_fit, recover_symbol,
        series_partial_sum, shift_invariance_test, DecompositionResult, ShiftForm, Variant,
    };
    pub use crate::error::{Error, Result};
    pub use crate::model_space::{
        boundary_inner_product, conjugate_kernel_coeffs, conjugation_matrix, default_node_count,
        kernel_coeffs, project, tm_basis, CoeffVector, ConjugationMatrix, ModelSpace,
    };
    pub use crate::operators::{
        atto_matrix, compressed_shift, conjugate_flip, modified_shift, rank_one,
        symbol_defect_pair, OperatorMatrix, SymbolPair,
    };
    pub use crate::{Complex64, DEFAULT_TOLERANCE};
}

/// Largest entry modulus of a complex matrix or vector.
pub(crate) fn max_modulus<R, C, S>(m: &nalgebra::Matrix<Complex64, R, C, S>) -> f64
where
    R: nalgebra::Dim,
    C: nalgebra::Dim,
    S: nalgebra::RawStorage<Complex64, R, C>,
{
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}
