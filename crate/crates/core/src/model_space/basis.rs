use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::grid::BoundaryGrid;
use crate::blaschke::{check_closed_disk, factor, BlaschkeProduct};
use crate::error::{Error, Result};
use crate::CONSTRUCTION_TOL;

/// Takenaka–Malmquist orthonormal basis of `K_alpha`, together with its
/// samples on a boundary grid.
///
/// `e_k(z) = sqrt(1 - |a_k|^2) / (1 - conj(a_k) z) * prod_{j<k} (z - a_j) / (1 - conj(a_j) z)`
#[derive(Debug, Clone)]
pub struct OrthonormalBasis {
    alpha: BlaschkeProduct,
    grid: BoundaryGrid,
    /// `dimension x node_count`, row `k` holds `e_k` on the grid.
    samples: DMatrix<Complex64>,
}

/// Shared handle to a model space. Vectors and operators hold one of these.
pub type ModelSpace = Arc<OrthonormalBasis>;

/// Builds the basis and checks its Gram matrix against the identity.
pub fn tm_basis(alpha: &BlaschkeProduct, node_count: usize) -> Result<ModelSpace> {
    OrthonormalBasis::new(alpha.clone(), node_count).map(Arc::new)
}

impl OrthonormalBasis {
    pub fn new(alpha: BlaschkeProduct, node_count: usize) -> Result<Self> {
        let grid = BoundaryGrid::new(node_count)?;
        let dim = alpha.degree();
        let mut samples = DMatrix::zeros(dim, node_count);
        for (col, &z) in grid.nodes().iter().enumerate() {
            let values = basis_values(alpha.zeros(), z);
            samples.column_mut(col).copy_from(&values);
        }
        let basis = Self {
            alpha,
            grid,
            samples,
        };
        let deviation = basis.gram_deviation();
        if deviation.is_nan() || deviation > CONSTRUCTION_TOL {
            return Err(Error::GramTolExceeded { deviation });
        }
        Ok(basis)
    }

    pub fn alpha(&self) -> &BlaschkeProduct {
        &self.alpha
    }

    pub fn dimension(&self) -> usize {
        self.alpha.degree()
    }

    pub fn grid(&self) -> &BoundaryGrid {
        &self.grid
    }

    pub fn node_count(&self) -> usize {
        self.grid.node_count()
    }

    pub fn samples(&self) -> &DMatrix<Complex64> {
        &self.samples
    }

    /// Quadrature Gram matrix `G[j][k] = <e_j, e_k>`.
    pub fn gram(&self) -> DMatrix<Complex64> {
        &self.samples * self.samples.adjoint() / Complex64::from(self.node_count() as f64)
    }

    pub fn gram_deviation(&self) -> f64 {
        let g = self.gram();
        let n = self.dimension();
        crate::max_modulus(&(g - DMatrix::<Complex64>::identity(n, n)))
    }

    /// Values `(e_0(z), ..., e_{d-1}(z))` at a point of the closed disk.
    pub fn eval_basis(&self, z: Complex64) -> Result<DVector<Complex64>> {
        check_closed_disk(z)?;
        Ok(basis_values(self.alpha.zeros(), z))
    }

    /// Two bases describe the same space on the same grid.
    pub fn same_space(&self, other: &OrthonormalBasis) -> bool {
        std::ptr::eq(self, other)
            || (self.alpha == other.alpha && self.node_count() == other.node_count())
    }

    /// Coordinates of the boundary function `h` projected onto `K_alpha`:
    /// `coords_j = <h, e_j>`.
    pub(crate) fn project_samples(&self, h: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        if h.len() != self.node_count() {
            return Err(Error::GridMismatch {
                expected: self.node_count(),
                got: h.len(),
            });
        }
        Ok(self.samples.conjugate() * h / Complex64::from(self.node_count() as f64))
    }

    /// Boundary samples of `sum coords_j e_j`.
    pub(crate) fn synthesize(&self, coords: &DVector<Complex64>) -> DVector<Complex64> {
        self.samples.transpose() * coords
    }
}

pub(crate) fn basis_values(zeros: &[Complex64], z: Complex64) -> DVector<Complex64> {
    let mut prefix = Complex64::new(1.0, 0.0);
    DVector::from_iterator(
        zeros.len(),
        zeros.iter().map(|&a| {
            let e = (1.0 - a.norm_sqr()).sqrt() / (1.0 - a.conj() * z) * prefix;
            prefix *= factor(a, z);
            e
        }),
    )
}
