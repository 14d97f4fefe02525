#![allow(dead_code)]

use atto_core::prelude::*;
use atto_core::sampling::random_blaschke;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const ORIGIN: Complex64 = Complex64::new(0.0, 0.0);

pub fn space_pair(
    rng: &mut ChaCha8Rng,
    deg_alpha: usize,
    deg_beta: usize,
) -> (ModelSpace, ModelSpace) {
    let nodes = default_node_count(deg_alpha, deg_beta);
    let alpha = random_blaschke(rng, deg_alpha).unwrap();
    let beta = random_blaschke(rng, deg_beta).unwrap();
    (
        tm_basis(&alpha, nodes).unwrap(),
        tm_basis(&beta, nodes).unwrap(),
    )
}

pub fn random_space_pair(
    rng: &mut ChaCha8Rng,
    min_deg: usize,
    max_deg: usize,
) -> (ModelSpace, ModelSpace) {
    let da = rng.random_range(min_deg..=max_deg);
    let db = rng.random_range(min_deg..=max_deg);
    space_pair(rng, da, db)
}

/// Closed-form `k_w` sampled on the grid.
pub fn kernel_samples(space: &ModelSpace, w: Complex64) -> Vec<Complex64> {
    let alpha = space.alpha();
    space
        .grid()
        .nodes()
        .iter()
        .map(|&z| atto_core::model_space::kernel_value(alpha, w, z))
        .collect()
}

pub fn third_singular_value(m: &OperatorMatrix) -> f64 {
    m.singular_values().get(2).copied().unwrap_or(0.0)
}
