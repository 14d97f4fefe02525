//! Matrices of linear maps `K_alpha -> K_beta` in the two orthonormal bases.
//!
//! Orientation: `entries[(k, j)] = <A e_j^alpha, e_k^beta>`, so rows index the
//! codomain. Adjoints are conjugate transposes.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};
use crate::model_space::{
    conjugate_kernel_coeffs, kernel_coeffs, project, tm_basis, CoeffJson, CoeffVector,
    ConjugationMatrix, ModelSpace,
};

#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    domain: ModelSpace,
    codomain: ModelSpace,
    entries: DMatrix<Complex64>,
}

/// Wire form `{"alpha": ..., "beta": ..., "matrix": [[[re, im], ...], ...]}`,
/// row-major with rows indexing the codomain.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorJson {
    pub alpha: BlaschkeProduct,
    pub beta: BlaschkeProduct,
    pub matrix: Vec<Vec<Complex64>>,
}

impl OperatorMatrix {
    pub fn new(
        domain: ModelSpace,
        codomain: ModelSpace,
        entries: DMatrix<Complex64>,
    ) -> Result<Self> {
        if entries.shape() != (codomain.dimension(), domain.dimension()) {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix for a map from dimension {} to dimension {}",
                entries.nrows(),
                entries.ncols(),
                domain.dimension(),
                codomain.dimension()
            )));
        }
        if entries.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("operator entries"));
        }
        Ok(Self {
            domain,
            codomain,
            entries,
        })
    }

    pub fn zeros(domain: &ModelSpace, codomain: &ModelSpace) -> Self {
        Self {
            domain: domain.clone(),
            codomain: codomain.clone(),
            entries: DMatrix::zeros(codomain.dimension(), domain.dimension()),
        }
    }

    pub fn identity(space: &ModelSpace) -> Self {
        let n = space.dimension();
        Self {
            domain: space.clone(),
            codomain: space.clone(),
            entries: DMatrix::identity(n, n),
        }
    }

    /// Rebuilds both bases on a grid of `node_count` nodes.
    pub fn from_json(raw: &OperatorJson, node_count: usize) -> Result<Self> {
        let domain = tm_basis(&raw.alpha, node_count)?;
        let codomain = if raw.beta == raw.alpha {
            domain.clone()
        } else {
            tm_basis(&raw.beta, node_count)?
        };
        let rows = raw.matrix.len();
        let cols = raw.matrix.first().map_or(0, Vec::len);
        if raw.matrix.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged matrix rows".into()));
        }
        let entries = DMatrix::from_fn(rows, cols, |k, j| raw.matrix[k][j]);
        Self::new(domain, codomain, entries)
    }

    pub fn to_json(&self) -> OperatorJson {
        OperatorJson {
            alpha: self.domain.alpha().clone(),
            beta: self.codomain.alpha().clone(),
            matrix: self
                .entries
                .row_iter()
                .map(|r| r.iter().copied().collect())
                .collect(),
        }
    }

    pub fn domain(&self) -> &ModelSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &ModelSpace {
        &self.codomain
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.norm()
    }

    pub fn apply(&self, f: &CoeffVector) -> Result<CoeffVector> {
        if !self.domain.same_space(f.space()) {
            return Err(Error::SpaceMismatch);
        }
        CoeffVector::new(self.codomain.clone(), &self.entries * f.coords())
    }

    /// `<A f, g>`.
    pub fn form(&self, f: &CoeffVector, g: &CoeffVector) -> Result<Complex64> {
        self.apply(f)?.inner(g)
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        Self {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            entries: self.entries.adjoint(),
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &OperatorMatrix) -> Result<OperatorMatrix> {
        if !inner.codomain.same_space(&self.domain) {
            return Err(Error::ShapeMismatch(
                "inner operator's codomain differs from outer operator's domain".into(),
            ));
        }
        Ok(Self {
            domain: inner.domain.clone(),
            codomain: self.codomain.clone(),
            entries: &self.entries * &inner.entries,
        })
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, s: Complex64, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check_same_spaces(other)?;
        Ok(Self {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            entries: &self.entries + &other.entries * s,
        })
    }

    pub fn sub(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.add_scaled(Complex64::new(-1.0, 0.0), other)
    }

    pub fn scaled(&self, s: Complex64) -> OperatorMatrix {
        Self {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            entries: &self.entries * s,
        }
    }

    /// Frobenius distance to another operator between the same spaces.
    pub fn distance(&self, other: &OperatorMatrix) -> Result<f64> {
        self.check_same_spaces(other)?;
        Ok((&self.entries - &other.entries).norm())
    }

    /// Singular values in decreasing order.
    pub fn singular_values(&self) -> Vec<f64> {
        singular_values(&self.entries)
    }

    pub(crate) fn check_same_spaces(&self, other: &OperatorMatrix) -> Result<()> {
        if self.domain.same_space(&other.domain) && self.codomain.same_space(&other.codomain) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(
                "operators act between different spaces".into(),
            ))
        }
    }
}

impl Serialize for OperatorMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

pub fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

fn check_common_grid(domain: &ModelSpace, codomain: &ModelSpace) -> Result<()> {
    if domain.node_count() != codomain.node_count() {
        return Err(Error::GridMismatch {
            expected: codomain.node_count(),
            got: domain.node_count(),
        });
    }
    Ok(())
}

/// `entries[(k, j)] = <w e_j^alpha, e_k^beta>` for boundary weights `w`.
fn compress(
    domain: &ModelSpace,
    codomain: &ModelSpace,
    weights: &DVector<Complex64>,
) -> Result<DMatrix<Complex64>> {
    check_common_grid(domain, codomain)?;
    if weights.len() != domain.node_count() {
        return Err(Error::GridMismatch {
            expected: domain.node_count(),
            got: weights.len(),
        });
    }
    let mut weighted = domain.samples().clone();
    for (mut col, w) in weighted.column_iter_mut().zip(weights.iter()) {
        col *= *w;
    }
    Ok(codomain.samples().conjugate() * weighted.transpose()
        / Complex64::from(domain.node_count() as f64))
}

/// Truncated Toeplitz operator `f -> P_beta(phi f)` from boundary samples of
/// the symbol.
pub fn atto_matrix(
    domain: &ModelSpace,
    codomain: &ModelSpace,
    phi_samples: &DVector<Complex64>,
) -> Result<OperatorMatrix> {
    let entries = compress(domain, codomain, phi_samples)?;
    OperatorMatrix::new(domain.clone(), codomain.clone(), entries)
}

/// `S_alpha = A_z^alpha`.
pub fn compressed_shift(space: &ModelSpace) -> OperatorMatrix {
    let z = space.grid().sample(|z| z);
    atto_matrix(space, space, &z).expect("a space always shares its own grid")
}

/// `u ⊗ v : f -> <f, v> u`, i.e. the matrix `u v^H`.
pub fn rank_one(u: &CoeffVector, v: &CoeffVector) -> OperatorMatrix {
    OperatorMatrix {
        domain: v.space().clone(),
        codomain: u.space().clone(),
        entries: u.coords() * v.coords().adjoint(),
    }
}

/// `S_alpha + a (k_0 ⊗ k~_0)`.
pub fn modified_shift(space: &ModelSpace, a: Complex64) -> Result<OperatorMatrix> {
    let origin = Complex64::new(0.0, 0.0);
    let k0 = kernel_coeffs(space, origin)?;
    let kt0 = conjugate_kernel_coeffs(space, origin)?;
    compressed_shift(space).add_scaled(a, &rank_one(&k0, &kt0))
}

/// `B = C_beta A C_alpha`. With antilinear action `f -> C conj(f)` the
/// composition is linear with matrix `C_beta conj(A) conj(C_alpha)`.
pub fn conjugate_flip(
    a: &OperatorMatrix,
    c_dom: &ConjugationMatrix,
    c_cod: &ConjugationMatrix,
) -> Result<OperatorMatrix> {
    if !c_dom.space().same_space(&a.domain) || !c_cod.space().same_space(&a.codomain) {
        return Err(Error::SpaceMismatch);
    }
    let entries = c_cod.entries() * a.entries.conjugate() * c_dom.entries().conjugate();
    OperatorMatrix::new(a.domain.clone(), a.codomain.clone(), entries)
}

/// A symbol `phi = conj(chi) + psi` with `chi` in `K_alpha` and `psi` in `K_beta`.
#[derive(Debug, Clone)]
pub struct SymbolPair {
    pub chi: CoeffVector,
    pub psi: CoeffVector,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymbolJson {
    pub chi: CoeffJson,
    pub psi: CoeffJson,
}

impl SymbolPair {
    pub fn new(chi: CoeffVector, psi: CoeffVector) -> Result<Self> {
        check_common_grid(chi.space(), psi.space())?;
        Ok(Self { chi, psi })
    }

    pub fn from_json(domain: &ModelSpace, codomain: &ModelSpace, raw: &SymbolJson) -> Result<Self> {
        Self::new(
            CoeffVector::from_json(domain, &raw.chi)?,
            CoeffVector::from_json(codomain, &raw.psi)?,
        )
    }

    pub fn to_json(&self) -> SymbolJson {
        SymbolJson {
            chi: self.chi.to_json(),
            psi: self.psi.to_json(),
        }
    }

    pub fn domain(&self) -> &ModelSpace {
        self.chi.space()
    }

    pub fn codomain(&self) -> &ModelSpace {
        self.psi.space()
    }

    /// Samples of `conj(chi) + psi` on the common grid.
    pub fn boundary_samples(&self) -> DVector<Complex64> {
        self.chi.boundary_samples().conjugate() + self.psi.boundary_samples()
    }

    pub fn operator(&self) -> OperatorMatrix {
        atto_matrix(self.domain(), self.codomain(), &self.boundary_samples())
            .expect("symbol pair spaces share a grid")
    }
}

impl Serialize for SymbolPair {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

/// `chi = P_alpha(conj(phi))`, `psi = S_beta P_beta(conj(z) phi)`: the pair
/// with `A_phi - S_beta A_phi S_alpha^* = psi ⊗ k_0^alpha + k_0^beta ⊗ chi`.
pub fn symbol_defect_pair(
    domain: &ModelSpace,
    codomain: &ModelSpace,
    phi_samples: &DVector<Complex64>,
) -> Result<SymbolPair> {
    check_common_grid(domain, codomain)?;
    let chi = project(domain, &phi_samples.conjugate())?;
    let nodes = codomain.grid().nodes();
    if phi_samples.len() != nodes.len() {
        return Err(Error::GridMismatch {
            expected: nodes.len(),
            got: phi_samples.len(),
        });
    }
    let shifted = DVector::from_iterator(
        nodes.len(),
        nodes
            .iter()
            .zip(phi_samples.iter())
            .map(|(z, p)| z.conj() * p),
    );
    let inner = project(codomain, &shifted)?;
    let psi = compressed_shift(codomain).apply(&inner)?;
    SymbolPair::new(chi, psi)
}
