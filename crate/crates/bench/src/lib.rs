//! Fixed instances shared by the benchmarks in `benches/`.

use atto_core::blaschke::BlaschkeProduct;
use atto_core::model_space::{default_node_count, tm_basis, ModelSpace};
use atto_core::operators::OperatorMatrix;
use atto_core::sampling::{random_blaschke, random_symbol};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const DEGREES: [usize; 4] = [2, 4, 8, 16];

pub struct Instance {
    pub alpha: BlaschkeProduct,
    pub nodes: usize,
    pub domain: ModelSpace,
    pub codomain: ModelSpace,
    /// A symbol-built member `K_alpha -> K_beta`.
    pub member: OperatorMatrix,
}

/// Spaces of degree `d` on both sides, seeded by `d`.
pub fn instance(d: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(d as u64);
    let nodes = default_node_count(d, d);
    let alpha = random_blaschke(&mut rng, d).expect("zeros inside the cap");
    let beta = random_blaschke(&mut rng, d).expect("zeros inside the cap");
    let domain = tm_basis(&alpha, nodes).expect("well-conditioned basis");
    let codomain = tm_basis(&beta, nodes).expect("well-conditioned basis");
    let member = random_symbol(&mut rng, &domain, &codomain)
        .expect("shared grid")
        .operator();
    Instance {
        alpha,
        nodes,
        domain,
        codomain,
        member,
    }
}
