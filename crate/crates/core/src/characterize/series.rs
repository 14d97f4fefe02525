use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model_space::kernel_coeffs;
use crate::operators::{compressed_shift, rank_one, OperatorMatrix, SymbolPair};

/// Largest `|psi(0)|` accepted as normalized.
pub const PSI_ORIGIN_TOL: f64 = 1e-9;

/// Telescoping terms `S_beta^n (psi ⊗ k_0 + k_0 ⊗ chi) S_alpha^{*n}`, `n = 0, 1, ...`.
struct Terms {
    term: OperatorMatrix,
    s_alpha_adj: OperatorMatrix,
    s_beta: OperatorMatrix,
}

impl Terms {
    fn new(pair: &SymbolPair) -> Result<Self> {
        let origin = Complex64::new(0.0, 0.0);
        let value = pair.psi.eval(origin)?.norm();
        if value > PSI_ORIGIN_TOL {
            return Err(Error::PsiNotNormalized { value });
        }
        let k0_alpha = kernel_coeffs(pair.domain(), origin)?;
        let k0_beta = kernel_coeffs(pair.codomain(), origin)?;
        let term = rank_one(&pair.psi, &k0_alpha)
            .add_scaled(Complex64::new(1.0, 0.0), &rank_one(&k0_beta, &pair.chi))?;
        Ok(Self {
            term,
            s_alpha_adj: compressed_shift(pair.domain()).adjoint(),
            s_beta: compressed_shift(pair.codomain()),
        })
    }
}

impl Iterator for Terms {
    type Item = OperatorMatrix;

    fn next(&mut self) -> Option<OperatorMatrix> {
        let next = self
            .s_beta
            .compose(&self.term)
            .and_then(|t| t.compose(&self.s_alpha_adj))
            .expect("shift shapes match the term");
        Some(std::mem::replace(&mut self.term, next))
    }
}

/// Partial sum over `n = 0..=terms` of the telescoping series for
/// `A_{conj(chi) + psi}`. Requires `psi(0) = 0`.
///
/// The sum starts at `n = 0`; the `n = 0` term is the defect itself.
pub fn series_partial_sum(pair: &SymbolPair, terms: usize) -> Result<OperatorMatrix> {
    let mut sum = OperatorMatrix::zeros(pair.domain(), pair.codomain());
    for term in Terms::new(pair)?.take(terms + 1) {
        sum = sum.add_scaled(Complex64::new(1.0, 0.0), &term)?;
    }
    Ok(sum)
}

/// `||partial_sum(N) - A_phi||_F` for `N = 0..=max_terms`.
pub fn series_errors(pair: &SymbolPair, max_terms: usize) -> Result<Vec<f64>> {
    let target = pair.operator();
    let mut sum = OperatorMatrix::zeros(pair.domain(), pair.codomain());
    let mut errors = Vec::with_capacity(max_terms + 1);
    for term in Terms::new(pair)?.take(max_terms + 1) {
        sum = sum.add_scaled(Complex64::new(1.0, 0.0), &term)?;
        errors.push(sum.distance(&target)?);
    }
    Ok(errors)
}
