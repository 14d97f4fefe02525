use nalgebra::DMatrix;
use num_complex::Complex64;

use super::basis::ModelSpace;
use super::vector::CoeffVector;
use crate::error::{Error, Result};
use crate::CONSTRUCTION_TOL;

/// The conjugation `C_alpha f = alpha * conj(z) * conj(f)` on `K_alpha`.
///
/// It is antilinear, so the matrix acts on conjugated coordinates:
/// `coords(C f) = entries * conj(coords(f))`.
#[derive(Debug, Clone)]
pub struct ConjugationMatrix {
    space: ModelSpace,
    entries: DMatrix<Complex64>,
}

/// `entries[k][j] = <C_alpha e_j, e_k>` by quadrature, then checked to be
/// unitary, symmetric and involutive.
pub fn conjugation_matrix(space: &ModelSpace) -> Result<ConjugationMatrix> {
    let grid = space.grid();
    let alpha = space.alpha();
    let weights = grid.sample(|z| alpha.eval_unchecked(z) * z.conj());
    let t = space.samples();
    // (1/N) sum_node w(node) conj(e_j(node)) conj(e_k(node))
    let mut scaled = t.conjugate();
    for (mut col, w) in scaled.column_iter_mut().zip(weights.iter()) {
        col *= *w;
    }
    let entries = t.conjugate() * scaled.transpose() / Complex64::from(grid.node_count() as f64);
    let c = ConjugationMatrix {
        space: space.clone(),
        entries,
    };
    c.check_invariants(CONSTRUCTION_TOL)?;
    Ok(c)
}

impl ConjugationMatrix {
    pub fn space(&self) -> &ModelSpace {
        &self.space
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn apply(&self, f: &CoeffVector) -> Result<CoeffVector> {
        if !self.space.same_space(f.space()) {
            return Err(Error::SpaceMismatch);
        }
        CoeffVector::new(self.space.clone(), &self.entries * f.coords().conjugate())
    }

    pub fn unitary_deviation(&self) -> f64 {
        let n = self.entries.nrows();
        crate::max_modulus(&(self.entries.adjoint() * &self.entries - DMatrix::identity(n, n)))
    }

    pub fn symmetry_deviation(&self) -> f64 {
        crate::max_modulus(&(&self.entries - self.entries.transpose()))
    }

    pub fn involution_deviation(&self) -> f64 {
        let n = self.entries.nrows();
        crate::max_modulus(&(&self.entries * self.entries.conjugate() - DMatrix::identity(n, n)))
    }

    fn check_invariants(&self, tol: f64) -> Result<()> {
        let checks = [
            ("conjugation unitarity", self.unitary_deviation()),
            ("conjugation symmetry", self.symmetry_deviation()),
            ("conjugation involution", self.involution_deviation()),
        ];
        for (what, deviation) in checks {
            if deviation.is_nan() || deviation > tol {
                return Err(Error::ToleranceExceeded { what, deviation });
            }
        }
        Ok(())
    }
}
