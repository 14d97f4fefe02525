use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{DecompositionResult, Variant};
use crate::error::{Error, Result};
use crate::model_space::{conjugate_kernel_coeffs, project, CoeffVector, ModelSpace};
use crate::operators::OperatorMatrix;

/// Allowed loss of norm when multiplying a constrained vector by `z`.
const LEAK_TOL: f64 = 1e-8;

/// Orthonormal basis (as columns) of `{f in K : z f in K} = K ⊖ span{k~_0}`.
///
/// Built from the Householder reflector that maps `e_0` onto the direction of
/// `k~_0`; its remaining columns span the complement.
pub fn shift_stable_subspace(space: &ModelSpace) -> Result<DMatrix<Complex64>> {
    let kt0 = conjugate_kernel_coeffs(space, Complex64::new(0.0, 0.0))?;
    let n = space.dimension();
    let u = kt0.coords() / Complex64::from(kt0.norm());
    let phase = if u[0].norm() > 0.0 {
        u[0] / u[0].norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let mut w = u.clone();
    w[0] += phase;
    let reflector =
        DMatrix::identity(n, n) - &w * w.adjoint() * Complex64::from(2.0 / w.norm_squared());
    Ok(reflector.columns(1, n - 1).into_owned())
}

/// Columns `z f_i` projected back onto the space, after checking that
/// multiplication by `z` lost no norm (so `z f_i` really lies in the space).
fn shifted_images(space: &ModelSpace, basis: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let mut images = DMatrix::zeros(basis.nrows(), basis.ncols());
    for (i, col) in basis.column_iter().enumerate() {
        let f = CoeffVector::new(space.clone(), col.into_owned())?;
        let nodes = space.grid().nodes();
        let zf = f
            .boundary_samples()
            .zip_map(&nalgebra::DVector::from_column_slice(nodes), |v, z| v * z);
        let projected = project(space, &zf)?;
        let leak = (zf.norm_squared() / nodes.len() as f64 - projected.norm().powi(2)).abs();
        if leak > LEAK_TOL {
            return Err(Error::ToleranceExceeded {
                what: "z f stays in the model space",
                deviation: leak,
            });
        }
        images.set_column(i, projected.coords());
    }
    Ok(images)
}

/// Checks `<A S f, S g> = <A f, g>` on orthonormal bases of the constrained
/// subspaces. The residual is the largest discrepancy divided by
/// `max(1, ||A||_F)`.
///
/// When either space is one-dimensional the constrained subspace is `{0}`; the
/// result is then vacuously true and marked as such.
pub fn shift_invariance_test(a: &OperatorMatrix, tolerance: f64) -> Result<DecompositionResult> {
    super::check_tolerance(tolerance)?;
    let domain = a.domain();
    let codomain = a.codomain();
    let mut result = DecompositionResult {
        variant: Variant::SI,
        verdict: true,
        residual: 0.0,
        psi: CoeffVector::zeros(codomain),
        chi: CoeffVector::zeros(domain),
        shift_params: None,
        vacuous: false,
    };
    if domain.dimension() == 1 || codomain.dimension() == 1 {
        result.vacuous = true;
        return Ok(result);
    }
    let f = shift_stable_subspace(domain)?;
    let g = shift_stable_subspace(codomain)?;
    let sf = shifted_images(domain, &f)?;
    let sg = shifted_images(codomain, &g)?;
    let lhs = sg.adjoint() * a.entries() * &sf;
    let rhs = g.adjoint() * a.entries() * &f;
    let discrepancy = crate::max_modulus(&(lhs - rhs));
    result.residual = discrepancy / a.frobenius_norm().max(1.0);
    result.verdict = result.residual <= tolerance;
    Ok(result)
}
