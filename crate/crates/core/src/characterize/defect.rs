use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::{modified_shift, OperatorMatrix};

/// Which side the adjoint sits on in a modified-shift defect.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftForm {
    /// `A - S_{beta,b} A S_{alpha,a}^*`
    A,
    /// `A - S_{beta,b}^* A S_{alpha,a}`
    B,
}

fn check_shapes(
    a: &OperatorMatrix,
    s_beta: &OperatorMatrix,
    s_alpha: &OperatorMatrix,
) -> Result<()> {
    let ok = s_alpha.domain().same_space(a.domain())
        && s_alpha.codomain().same_space(a.domain())
        && s_beta.domain().same_space(a.codomain())
        && s_beta.codomain().same_space(a.codomain());
    if ok {
        Ok(())
    } else {
        Err(Error::ShapeMismatch(
            "shift operators must act on the operator's domain and codomain".into(),
        ))
    }
}

/// `A - S_beta A S_alpha^*`.
pub fn defect_t1(
    a: &OperatorMatrix,
    s_beta: &OperatorMatrix,
    s_alpha: &OperatorMatrix,
) -> Result<OperatorMatrix> {
    check_shapes(a, s_beta, s_alpha)?;
    let entries = a.entries() - s_beta.entries() * a.entries() * s_alpha.entries().adjoint();
    OperatorMatrix::new(a.domain().clone(), a.codomain().clone(), entries)
}

/// `A - S_beta^* A S_alpha`.
pub fn defect_c2(
    a: &OperatorMatrix,
    s_beta: &OperatorMatrix,
    s_alpha: &OperatorMatrix,
) -> Result<OperatorMatrix> {
    check_shapes(a, s_beta, s_alpha)?;
    let entries = a.entries() - s_beta.entries().adjoint() * a.entries() * s_alpha.entries();
    OperatorMatrix::new(a.domain().clone(), a.codomain().clone(), entries)
}

/// Defect with the modified shifts `S_{alpha,a}` and `S_{beta,b}`.
pub fn defect_c3(
    op: &OperatorMatrix,
    a: Complex64,
    b: Complex64,
    form: ShiftForm,
) -> Result<OperatorMatrix> {
    let s_alpha = modified_shift(op.domain(), a)?;
    let s_beta = modified_shift(op.codomain(), b)?;
    match form {
        ShiftForm::A => defect_t1(op, &s_beta, &s_alpha),
        ShiftForm::B => defect_c2(op, &s_beta, &s_alpha),
    }
}
