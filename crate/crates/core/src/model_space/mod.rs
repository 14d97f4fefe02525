//! The model space `K_alpha = H^2 ⊖ alpha H^2` of a finite Blaschke product,
//! realized as a finite-dimensional inner-product space.
//!
//! Every function is stored by coordinates in the Takenaka–Malmquist basis.
//! Boundary integrals use the trapezoid rule on roots of unity.

mod basis;
mod conjugation;
mod grid;
mod vector;

use nalgebra::DVector;
use num_complex::Complex64;

pub use basis::{tm_basis, ModelSpace, OrthonormalBasis};
pub use conjugation::{conjugation_matrix, ConjugationMatrix};
pub use grid::{boundary_inner_product, default_node_count, BoundaryGrid, MIN_NODE_COUNT};
pub use vector::{CoeffJson, CoeffVector};

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};

/// Points closer than this to the unit circle are rejected as kernel centers.
pub const BOUNDARY_MARGIN: f64 = 1e-9;

fn check_open_disk(w: Complex64) -> Result<()> {
    if !w.is_finite() {
        return Err(Error::NonFinite("kernel center"));
    }
    if w.norm() >= 1.0 - BOUNDARY_MARGIN {
        return Err(Error::PointOnBoundary { modulus: w.norm() });
    }
    Ok(())
}

/// Reproducing kernel `k_w`, with coordinates `conj(e_j(w))`.
pub fn kernel_coeffs(space: &ModelSpace, w: Complex64) -> Result<CoeffVector> {
    check_open_disk(w)?;
    let values = space.eval_basis(w)?;
    CoeffVector::new(space.clone(), values.conjugate())
}

/// Conjugate kernel `(alpha(z) - alpha(w)) / (z - w)`, projected onto the basis
/// from its boundary samples.
pub fn conjugate_kernel_coeffs(space: &ModelSpace, w: Complex64) -> Result<CoeffVector> {
    check_open_disk(w)?;
    let alpha = space.alpha();
    let samples = space.grid().sample(|z| conjugate_kernel_value(alpha, w, z));
    project(space, &samples)
}

/// Orthogonal projection of boundary samples onto `K_alpha`.
pub fn project(space: &ModelSpace, h_samples: &DVector<Complex64>) -> Result<CoeffVector> {
    let coords = space.project_samples(h_samples)?;
    CoeffVector::new(space.clone(), coords)
}

pub fn eval_function(v: &CoeffVector, z: Complex64) -> Result<Complex64> {
    v.eval(z)
}

/// Closed form `k_w(z) = (1 - conj(alpha(w)) alpha(z)) / (1 - conj(w) z)`.
pub fn kernel_value(alpha: &BlaschkeProduct, w: Complex64, z: Complex64) -> Complex64 {
    let den = 1.0 - w.conj() * z;
    if den.norm() < 1e-12 {
        // only reachable for |w| = |z| = 1; k_w(w) = ||k_w||^2 limit
        return Complex64::new(0.0, 0.0);
    }
    (1.0 - alpha.eval_unchecked(w).conj() * alpha.eval_unchecked(z)) / den
}

/// Closed form of the conjugate kernel, with `alpha'(w)` at the removable
/// singularity `z = w`.
pub fn conjugate_kernel_value(alpha: &BlaschkeProduct, w: Complex64, z: Complex64) -> Complex64 {
    if (z - w).norm() < 1e-12 {
        return derivative(alpha, w);
    }
    (alpha.eval_unchecked(z) - alpha.eval_unchecked(w)) / (z - w)
}

/// `alpha'(z)` by the product rule over the Blaschke factors.
pub fn derivative(alpha: &BlaschkeProduct, z: Complex64) -> Complex64 {
    let zeros = alpha.zeros();
    let mut total = Complex64::new(0.0, 0.0);
    for (k, &a) in zeros.iter().enumerate() {
        let d = (1.0 - a.norm_sqr()) / (1.0 - a.conj() * z).powu(2);
        let rest: Complex64 = zeros
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, &b)| crate::blaschke::factor(b, z))
            .product();
        total += d * rest;
    }
    alpha.constant() * total
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn monomial_space(n: usize) -> ModelSpace {
        tm_basis(&BlaschkeProduct::monomial(n).unwrap(), 512).unwrap()
    }

    fn random_space(rng: &mut ChaCha8Rng, deg: usize) -> ModelSpace {
        let zeros = (0..deg)
            .map(|_| {
                Complex64::from_polar(0.9 * rng.random::<f64>().sqrt(), rng.random_range(0.0..6.3))
            })
            .collect();
        let alpha = BlaschkeProduct::new(
            zeros,
            Complex64::from_polar(1.0, rng.random_range(0.0..6.3)),
        )
        .unwrap();
        tm_basis(&alpha, default_node_count(deg, deg)).unwrap()
    }

    fn random_vector(rng: &mut ChaCha8Rng, space: &ModelSpace) -> CoeffVector {
        let coords: Vec<_> = (0..space.dimension())
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        CoeffVector::from_slice(space, &coords).unwrap()
    }

    #[test]
    fn kernel_of_z_squared() {
        let s = monomial_space(2);
        let k0 = kernel_coeffs(&s, c(0.0, 0.0)).unwrap();
        assert!((k0.coords()[0] - 1.0).norm() < 1e-15);
        assert!(k0.coords()[1].norm() < 1e-15);

        let w = c(0.3, 0.2);
        let kw = kernel_coeffs(&s, w).unwrap();
        assert!((kw.coords()[1] - w.conj()).norm() < 1e-15);
        let z = c(-0.4, 0.5);
        assert!((kw.eval(z).unwrap() - (1.0 + w.conj() * z)).norm() < 1e-14);
    }

    #[test]
    fn kernel_norm_reproduces_diagonal() {
        // <k_w, k_w> = k_w(w) = 1 + |w|^2 for alpha = z^2
        let s = monomial_space(2);
        let w = c(0.3, 0.0);
        let kw = kernel_coeffs(&s, w).unwrap();
        let samples = kw.boundary_samples();
        let ip = boundary_inner_product(samples.as_slice(), samples.as_slice()).unwrap();
        assert!((ip - 1.09).norm() < 1e-12);
    }

    #[test]
    fn conjugate_kernel_of_monomials() {
        for n in 1..6 {
            let s = monomial_space(n);
            let kt = conjugate_kernel_coeffs(&s, c(0.0, 0.0)).unwrap();
            let expected = CoeffVector::unit(&s, n - 1);
            assert!(kt.distance_max(&expected).unwrap() < 1e-13);
        }
    }

    #[test]
    fn kernel_rejects_boundary_points() {
        let s = monomial_space(2);
        assert!(matches!(
            kernel_coeffs(&s, c(1.0, 0.0)),
            Err(Error::PointOnBoundary { .. })
        ));
        assert!(matches!(
            conjugate_kernel_coeffs(&s, c(0.0, 1.0)),
            Err(Error::PointOnBoundary { .. })
        ));
    }

    #[test]
    fn kernel_expansion_matches_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let deg = rng.random_range(1..7);
            let s = random_space(&mut rng, deg);
            let w = Complex64::from_polar(0.9 * rng.random::<f64>(), rng.random_range(0.0..6.3));
            let kw = kernel_coeffs(&s, w).unwrap();
            let ktw = conjugate_kernel_coeffs(&s, w).unwrap();
            for _ in 0..10 {
                let z = Complex64::from_polar(rng.random::<f64>(), rng.random_range(0.0..6.3));
                let alpha = s.alpha();
                assert!((kw.eval(z).unwrap() - kernel_value(alpha, w, z)).norm() < 1e-10);
                assert!(
                    (ktw.eval(z).unwrap() - conjugate_kernel_value(alpha, w, z)).norm() < 1e-10
                );
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let alpha = BlaschkeProduct::new(vec![c(0.3, 0.1), c(-0.5, 0.2), c(0.3, 0.1)], c(0.0, 1.0))
            .unwrap();
        let z = c(0.1, -0.2);
        let h = 1e-6;
        let fd = (alpha.eval_unchecked(z + h) - alpha.eval_unchecked(z - h)) / (2.0 * h);
        assert!((derivative(&alpha, z) - fd).norm() < 1e-8);
    }

    #[test]
    fn projection_examples() {
        let s = monomial_space(2);
        let e0 = CoeffVector::unit(&s, 0);
        let p = project(&s, &e0.boundary_samples()).unwrap();
        assert!(p.distance_max(&e0).unwrap() < 1e-15);

        let zbar = s.grid().sample(|z| z.conj());
        assert!(project(&s, &zbar).unwrap().norm() < 1e-15);
        let zz = s.grid().sample(|z| z * z);
        assert!(project(&s, &zz).unwrap().norm() < 1e-15);

        assert!(matches!(
            project(&s, &DVector::zeros(7)),
            Err(Error::GridMismatch { .. })
        ));
    }

    #[test]
    fn projection_is_self_adjoint_against_model_space() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = random_space(&mut rng, 4);
        let h = s.grid().sample(|z| {
            c(0.3, -1.0) * z.conj().powu(2)
                + c(2.0, 0.5) * z.powu(7)
                + (z - c(0.2, 0.0)).inv() * 0.1
        });
        let ph = project(&s, &h).unwrap();
        let idem = project(&s, &ph.boundary_samples()).unwrap();
        assert!(idem.distance_max(&ph).unwrap() < 1e-12);
        for _ in 0..10 {
            let f = random_vector(&mut rng, &s);
            let lhs = ph.inner(&f).unwrap();
            let rhs =
                boundary_inner_product(h.as_slice(), f.boundary_samples().as_slice()).unwrap();
            assert!((lhs - rhs).norm() < 1e-10);
        }
    }

    #[test]
    fn conjugation_of_monomial_space_is_antidiagonal() {
        for n in 1..7 {
            let s = monomial_space(n);
            let cm = conjugation_matrix(&s).unwrap();
            for k in 0..n {
                for j in 0..n {
                    let expected = if j + k == n - 1 { 1.0 } else { 0.0 };
                    assert!((cm.entries()[(k, j)] - expected).norm() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn conjugation_invariants_and_kernel_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let deg = rng.random_range(1..7);
            let s = random_space(&mut rng, deg);
            let cm = conjugation_matrix(&s).unwrap();
            assert!(cm.unitary_deviation() <= 1e-10);
            assert!(cm.symmetry_deviation() <= 1e-10);
            assert!(cm.involution_deviation() <= 1e-10);

            let w = Complex64::from_polar(0.85 * rng.random::<f64>(), rng.random_range(0.0..6.3));
            let ck = cm.apply(&kernel_coeffs(&s, w).unwrap()).unwrap();
            let kt = conjugate_kernel_coeffs(&s, w).unwrap();
            assert!(ck.distance_max(&kt).unwrap() <= 1e-10);

            let f = random_vector(&mut rng, &s);
            let g = random_vector(&mut rng, &s);
            let cf = cm.apply(&f).unwrap();
            let cg = cm.apply(&g).unwrap();
            assert!((cf.inner(&cg).unwrap() - g.inner(&f).unwrap()).norm() <= 1e-10);
            assert!(cm.apply(&cf).unwrap().distance_max(&f).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn vectors_from_other_spaces_are_rejected() {
        let a = monomial_space(2);
        let b = monomial_space(3);
        let cm = conjugation_matrix(&a).unwrap();
        assert!(matches!(
            cm.apply(&CoeffVector::zeros(&b)),
            Err(Error::SpaceMismatch)
        ));
        assert!(CoeffVector::zeros(&a)
            .inner(&CoeffVector::zeros(&b))
            .is_err());
        // an independently built copy of the same space is accepted
        let a2 = monomial_space(2);
        assert!(!Arc::ptr_eq(&a, &a2));
        assert!(CoeffVector::zeros(&a)
            .inner(&CoeffVector::zeros(&a2))
            .is_ok());
    }
}
