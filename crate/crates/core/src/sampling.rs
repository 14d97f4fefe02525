//! Seeded random instances: Blaschke products, vectors, symbols and operators.
//!
//! Zeros are uniform in a disk of radius [`ZERO_RADIUS`]; coefficients are
//! standard complex normal (`E|c|^2 = 1`).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::blaschke::BlaschkeProduct;
use crate::error::Result;
use crate::model_space::{CoeffVector, ModelSpace};
use crate::operators::{OperatorMatrix, SymbolPair};

pub const ZERO_RADIUS: f64 = 0.9;

pub fn random_disk_point<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Complex64 {
    let r = radius * rng.random::<f64>().sqrt();
    Complex64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
}

pub fn random_unimodular<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_blaschke<R: Rng + ?Sized>(rng: &mut R, degree: usize) -> Result<BlaschkeProduct> {
    let zeros = (0..degree)
        .map(|_| random_disk_point(rng, ZERO_RADIUS))
        .collect();
    BlaschkeProduct::new(zeros, random_unimodular(rng))
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, space: &ModelSpace) -> CoeffVector {
    let coords = DVector::from_fn(space.dimension(), |_, _| complex_normal(rng));
    CoeffVector::new(space.clone(), coords).expect("dimension matches")
}

pub fn random_symbol<R: Rng + ?Sized>(
    rng: &mut R,
    domain: &ModelSpace,
    codomain: &ModelSpace,
) -> Result<SymbolPair> {
    let chi = random_vector(rng, domain);
    let psi = random_vector(rng, codomain);
    SymbolPair::new(chi, psi)
}

/// An operator with independent standard complex normal entries.
pub fn random_operator<R: Rng + ?Sized>(
    rng: &mut R,
    domain: &ModelSpace,
    codomain: &ModelSpace,
) -> OperatorMatrix {
    let entries = DMatrix::from_fn(codomain.dimension(), domain.dimension(), |_, _| {
        complex_normal(rng)
    });
    OperatorMatrix::new(domain.clone(), codomain.clone(), entries).expect("shape matches")
}
