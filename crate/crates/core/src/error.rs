use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Blaschke zero {zero} has modulus {modulus} above the cap {cap}")]
    ZeroOutsideCap {
        zero: String,
        modulus: f64,
        cap: f64,
    },

    #[error("a Blaschke product needs at least one zero")]
    EmptyZeroList,

    #[error("unimodular constant has modulus {modulus}")]
    NonUnimodularConstant { modulus: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("point with modulus {modulus} lies outside the closed unit disk")]
    PointOutsideClosedDisk { modulus: f64 },

    #[error("point with modulus {modulus} is on (or too close to) the unit circle")]
    PointOnBoundary { modulus: f64 },

    #[error("quadrature node count {0} must be a power of two >= 512")]
    InvalidNodeCount(usize),

    #[error(
        "Gram matrix deviates from identity by {deviation:e}; increase the quadrature node count"
    )]
    GramTolExceeded { deviation: f64 },

    #[error("sample vector of length {got} does not match a grid of {expected} nodes")]
    GridMismatch { expected: usize, got: usize },

    #[error("vector or operator belongs to a different model space")]
    SpaceMismatch,

    #[error("operator shapes are inconsistent: {0}")]
    ShapeMismatch(String),

    #[error("{what} check failed: deviation {deviation:e}")]
    ToleranceExceeded { what: &'static str, deviation: f64 },

    #[error("frame vector has norm {norm:e}")]
    ZeroFrame { norm: f64 },

    #[error("operator is not in the truncated Toeplitz class: residual {residual:e} exceeds tolerance {tolerance:e}")]
    NotAMember { residual: f64, tolerance: f64 },

    #[error("series input requires psi(0) = 0, got |psi(0)| = {value:e}")]
    PsiNotNormalized { value: f64 },

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
}
