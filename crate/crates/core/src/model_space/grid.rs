use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MIN_NODE_COUNT: usize = 512;

/// The `N`-th roots of unity with equal weights `1/N`.
///
/// The trapezoid rule on these nodes integrates trigonometric polynomials of
/// degree `< N` exactly and converges geometrically for rational integrands
/// whose poles stay away from the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryGrid {
    nodes: Vec<Complex64>,
}

impl BoundaryGrid {
    pub fn new(node_count: usize) -> Result<Self> {
        if node_count < MIN_NODE_COUNT || !node_count.is_power_of_two() {
            return Err(Error::InvalidNodeCount(node_count));
        }
        let step = std::f64::consts::TAU / node_count as f64;
        let nodes = (0..node_count)
            .map(|k| Complex64::from_polar(1.0, step * k as f64))
            .collect();
        Ok(Self { nodes })
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.nodes.len() as f64
    }

    /// Boundary samples of `f`.
    pub fn sample<F: Fn(Complex64) -> Complex64>(&self, f: F) -> DVector<Complex64> {
        DVector::from_iterator(self.nodes.len(), self.nodes.iter().map(|&z| f(z)))
    }

    pub fn inner_product(&self, f: &[Complex64], g: &[Complex64]) -> Result<Complex64> {
        for v in [f, g] {
            if v.len() != self.node_count() {
                return Err(Error::GridMismatch {
                    expected: self.node_count(),
                    got: v.len(),
                });
            }
        }
        boundary_inner_product(f, g)
    }
}

/// `(1/N) * sum f(node) * conj(g(node))`.
pub fn boundary_inner_product(f: &[Complex64], g: &[Complex64]) -> Result<Complex64> {
    if f.len() != g.len() {
        return Err(Error::GridMismatch {
            expected: f.len(),
            got: g.len(),
        });
    }
    if f.is_empty() {
        return Err(Error::GridMismatch {
            expected: MIN_NODE_COUNT,
            got: 0,
        });
    }
    let sum: Complex64 = f.iter().zip(g).map(|(a, b)| a * b.conj()).sum();
    Ok(sum / f.len() as f64)
}

/// `max(512, next power of two >= 64 * (deg_alpha + deg_beta + 4))`.
pub fn default_node_count(deg_alpha: usize, deg_beta: usize) -> usize {
    (64 * (deg_alpha + deg_beta + 4))
        .next_power_of_two()
        .max(MIN_NODE_COUNT)
}
