use crate::error::{Error, Result};
use crate::model_space::CoeffVector;
use crate::operators::OperatorMatrix;

const MIN_FRAME_NORM: f64 = 1e-12;

/// Best approximation `D ≈ psi ⊗ frame_dom + frame_cod ⊗ chi`.
#[derive(Debug, Clone)]
pub struct Rank2Fit {
    pub psi: CoeffVector,
    pub chi: CoeffVector,
    /// Absolute Frobenius norm of `D - psi ⊗ frame_dom - frame_cod ⊗ chi`.
    pub misfit: f64,
}

/// Least-squares fit of `D` by `psi frame_dom^H + frame_cod chi^H`.
///
/// With `P_f`, `P_g` the orthogonal projections onto `frame_dom`, `frame_cod`
/// and `Q = I - P`, the matrices of this form are exactly the kernel of
/// `M -> Q_g M Q_f`, an orthogonal projection in the Frobenius inner product.
/// Hence the best fit is `D - Q_g D Q_f` and the misfit is `||Q_g D Q_f||_F`.
/// The pair is not unique (shift along `(frame_cod, -frame_dom)`); the one
/// returned has `psi ⊥ frame_cod`, i.e. `psi = Q_g D f / ||f||^2` and
/// `chi = D^H g / ||g||^2`. For the `k_0` frames this is `psi(0) = 0`.
pub fn rank2_fit(
    d: &OperatorMatrix,
    frame_dom: &CoeffVector,
    frame_cod: &CoeffVector,
) -> Result<Rank2Fit> {
    if !frame_dom.space().same_space(d.domain()) || !frame_cod.space().same_space(d.codomain()) {
        return Err(Error::SpaceMismatch);
    }
    for frame in [frame_dom, frame_cod] {
        if frame.norm() < MIN_FRAME_NORM {
            return Err(Error::ZeroFrame { norm: frame.norm() });
        }
    }
    let a = d.entries();
    let f = frame_dom.coords();
    let g = frame_cod.coords();
    let ff = f.norm_squared();
    let gg = g.norm_squared();

    let df = a * f;
    let psi = &df - g * (g.dotc(&df) / gg);
    let psi = psi.unscale(ff);
    let chi = (a.adjoint() * g).unscale(gg);

    let fitted = &psi * f.adjoint() + g * chi.adjoint();
    let misfit = (a - fitted).norm();
    Ok(Rank2Fit {
        psi: CoeffVector::new(d.codomain().clone(), psi)?,
        chi: CoeffVector::new(d.domain().clone(), chi)?,
        misfit,
    })
}
