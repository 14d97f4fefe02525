use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};

use super::basis::ModelSpace;
use crate::error::{Error, Result};

/// An element of a model space, stored by its coordinates in the space's
/// orthonormal basis.
#[derive(Debug, Clone)]
pub struct CoeffVector {
    space: ModelSpace,
    coords: DVector<Complex64>,
}

/// Wire form `{"coords": [[re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoeffJson {
    pub coords: Vec<Complex64>,
}

impl CoeffVector {
    pub fn new(space: ModelSpace, coords: DVector<Complex64>) -> Result<Self> {
        if coords.len() != space.dimension() {
            return Err(Error::ShapeMismatch(format!(
                "{} coordinates for a space of dimension {}",
                coords.len(),
                space.dimension()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("coordinates"));
        }
        Ok(Self { space, coords })
    }

    pub fn from_slice(space: &ModelSpace, coords: &[Complex64]) -> Result<Self> {
        Self::new(space.clone(), DVector::from_column_slice(coords))
    }

    pub fn from_json(space: &ModelSpace, raw: &CoeffJson) -> Result<Self> {
        Self::from_slice(space, &raw.coords)
    }

    pub fn zeros(space: &ModelSpace) -> Self {
        Self {
            space: space.clone(),
            coords: DVector::zeros(space.dimension()),
        }
    }

    /// The `j`-th basis function.
    pub fn unit(space: &ModelSpace, j: usize) -> Self {
        let mut v = Self::zeros(space);
        v.coords[j] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn space(&self) -> &ModelSpace {
        &self.space
    }

    pub fn coords(&self) -> &DVector<Complex64> {
        &self.coords
    }

    pub fn into_coords(self) -> DVector<Complex64> {
        self.coords
    }

    pub fn to_json(&self) -> CoeffJson {
        CoeffJson {
            coords: self.coords.iter().copied().collect(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }

    /// `sum coords_j e_j(z)`.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.space.eval_basis(z)?.dot(&self.coords))
    }

    pub fn boundary_samples(&self) -> DVector<Complex64> {
        self.space.synthesize(&self.coords)
    }

    /// Coordinate inner product `<self, other>`, linear in `self`.
    pub fn inner(&self, other: &CoeffVector) -> Result<Complex64> {
        self.check_same_space(other)?;
        Ok(other.coords.dotc(&self.coords))
    }

    pub fn scaled(&self, s: Complex64) -> CoeffVector {
        Self {
            space: self.space.clone(),
            coords: &self.coords * s,
        }
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: Complex64, other: &CoeffVector) -> Result<CoeffVector> {
        self.check_same_space(other)?;
        Ok(Self {
            space: self.space.clone(),
            coords: &self.coords + &other.coords * s,
        })
    }

    /// Maximum coordinate-wise distance.
    pub fn distance_max(&self, other: &CoeffVector) -> Result<f64> {
        self.check_same_space(other)?;
        Ok(crate::max_modulus(&(&self.coords - &other.coords)))
    }

    pub(crate) fn check_same_space(&self, other: &CoeffVector) -> Result<()> {
        if Arc::ptr_eq(&self.space, &other.space) || self.space.same_space(&other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }
}

impl Serialize for CoeffVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}
