//! Decision procedures for membership in the class of truncated Toeplitz
//! operators `K_alpha -> K_beta`.
//!
//! An operator `A` is a member iff its defect `A - S_beta A S_alpha^*` has the
//! form `psi ⊗ k_0^alpha + k_0^beta ⊗ chi`. Four more variants test the same
//! property through different defects (starred shifts, modified shifts) or
//! through shift invariance of the sesquilinear form. All five must agree.

mod defect;
mod fit;
mod invariance;
mod series;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

pub use defect::{defect_c2, defect_c3, defect_t1, ShiftForm};
pub use fit::{rank2_fit, Rank2Fit};
pub use invariance::{shift_invariance_test, shift_stable_subspace};
pub use series::{series_errors, series_partial_sum, PSI_ORIGIN_TOL};

use crate::error::{Error, Result};
use crate::model_space::{conjugate_kernel_coeffs, kernel_coeffs, CoeffVector};
use crate::operators::{compressed_shift, OperatorMatrix, SymbolPair};
use crate::sampling::random_disk_point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Variant {
    /// `A - S_beta A S_alpha^*` against the `k_0` frames.
    T1,
    /// `A - S_beta^* A S_alpha` against the `k~_0` frames.
    C2,
    /// `A - S_{beta,b} A S_{alpha,a}^*` against the `k_0` frames.
    C3a,
    /// `A - S_{beta,b}^* A S_{alpha,a}` against the `k~_0` frames.
    C3b,
    /// `<A S f, S g> = <A f, g>` whenever `S f`, `S g` stay in the spaces.
    SI,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::T1,
        Variant::C2,
        Variant::C3a,
        Variant::C3b,
        Variant::SI,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::T1 => "T1",
            Variant::C2 => "C2",
            Variant::C3a => "C3a",
            Variant::C3b => "C3b",
            Variant::SI => "SI",
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "t1" => Ok(Variant::T1),
            "c2" => Ok(Variant::C2),
            "c3a" => Ok(Variant::C3a),
            "c3b" => Ok(Variant::C3b),
            "si" => Ok(Variant::SI),
            other => Err(format!("unknown variant '{other}'")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DecompositionResult {
    pub variant: Variant,
    pub verdict: bool,
    /// Fit misfit (or, for SI, largest form discrepancy) over `max(1, ||A||_F)`.
    pub residual: f64,
    pub psi: CoeffVector,
    pub chi: CoeffVector,
    /// `(a, b)` for the modified-shift variants.
    pub shift_params: Option<(Complex64, Complex64)>,
    /// SI on a one-dimensional space, where the constraint set is `{0}`.
    pub vacuous: bool,
}

#[derive(Serialize)]
struct DecompositionJson<'a> {
    variant: Variant,
    verdict: bool,
    residual: f64,
    psi: &'a CoeffVector,
    chi: &'a CoeffVector,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<Complex64>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    vacuous: bool,
}

impl Serialize for DecompositionResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        DecompositionJson {
            variant: self.variant,
            verdict: self.verdict,
            residual: self.residual,
            psi: &self.psi,
            chi: &self.chi,
            a: self.shift_params.map(|p| p.0),
            b: self.shift_params.map(|p| p.1),
            vacuous: self.vacuous,
        }
        .serialize(serializer)
    }
}

pub(crate) fn check_tolerance(tolerance: f64) -> Result<()> {
    if tolerance.is_finite() && tolerance > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tolerance))
    }
}

/// Runs one variant. `a` and `b` only matter for C3a/C3b.
pub fn membership(
    op: &OperatorMatrix,
    variant: Variant,
    tolerance: f64,
    a: Complex64,
    b: Complex64,
) -> Result<DecompositionResult> {
    check_tolerance(tolerance)?;
    let origin = Complex64::new(0.0, 0.0);
    let (defect, tilde_frames) = match variant {
        Variant::SI => return shift_invariance_test(op, tolerance),
        Variant::T1 => (
            defect_t1(
                op,
                &compressed_shift(op.codomain()),
                &compressed_shift(op.domain()),
            )?,
            false,
        ),
        Variant::C2 => (
            defect_c2(
                op,
                &compressed_shift(op.codomain()),
                &compressed_shift(op.domain()),
            )?,
            true,
        ),
        Variant::C3a => (defect_c3(op, a, b, ShiftForm::A)?, false),
        Variant::C3b => (defect_c3(op, a, b, ShiftForm::B)?, true),
    };
    let (frame_dom, frame_cod) = if tilde_frames {
        (
            conjugate_kernel_coeffs(op.domain(), origin)?,
            conjugate_kernel_coeffs(op.codomain(), origin)?,
        )
    } else {
        (
            kernel_coeffs(op.domain(), origin)?,
            kernel_coeffs(op.codomain(), origin)?,
        )
    };
    let fit = rank2_fit(&defect, &frame_dom, &frame_cod)?;
    let residual = fit.misfit / op.frobenius_norm().max(1.0);
    Ok(DecompositionResult {
        variant,
        verdict: residual <= tolerance,
        residual,
        psi: fit.psi,
        chi: fit.chi,
        shift_params: matches!(variant, Variant::C3a | Variant::C3b).then_some((a, b)),
        vacuous: false,
    })
}

/// The normalized pair `(chi, psi)` with `psi(0) = 0` and
/// `A = A_{conj(chi) + psi}`.
pub fn recover_symbol(op: &OperatorMatrix, tolerance: f64) -> Result<SymbolPair> {
    let origin = Complex64::new(0.0, 0.0);
    let result = membership(op, Variant::T1, tolerance, origin, origin)?;
    if !result.verdict {
        return Err(Error::NotAMember {
            residual: result.residual,
            tolerance,
        });
    }
    SymbolPair::new(result.chi, result.psi)
}

/// Number of random `(a, b)` draws per modified-shift variant.
pub const SHIFT_DRAWS: usize = 3;
/// Radius of the disk the `(a, b)` draws come from.
pub const SHIFT_PARAM_RADIUS: f64 = 2.0;

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub results: Vec<DecompositionResult>,
    pub agree: bool,
    pub verdict: bool,
}

/// Runs T1, C2, C3a and C3b (each at `a = b = 0` and at [`SHIFT_DRAWS`]
/// seeded draws) and SI, and reports whether all verdicts agree.
pub fn equivalence_suite(
    op: &OperatorMatrix,
    tolerance: f64,
    seed: u64,
) -> Result<EquivalenceReport> {
    let origin = Complex64::new(0.0, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut params = vec![(origin, origin)];
    for _ in 0..SHIFT_DRAWS {
        let a = random_disk_point(&mut rng, SHIFT_PARAM_RADIUS);
        let b = random_disk_point(&mut rng, SHIFT_PARAM_RADIUS);
        params.push((a, b));
    }
    let mut results = vec![
        membership(op, Variant::T1, tolerance, origin, origin)?,
        membership(op, Variant::C2, tolerance, origin, origin)?,
    ];
    for variant in [Variant::C3a, Variant::C3b] {
        for &(a, b) in &params {
            results.push(membership(op, variant, tolerance, a, b)?);
        }
    }
    results.push(shift_invariance_test(op, tolerance)?);
    let first = results[0].verdict;
    let agree = results.iter().all(|r| r.verdict == first);
    Ok(EquivalenceReport {
        results,
        agree,
        verdict: first && agree,
    })
}
