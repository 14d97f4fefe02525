//! Finite Blaschke products `c * prod (z - a_j) / (1 - conj(a_j) z)`.
//!
//! The zero list is kept in construction order because it fixes the order
//! of the Takenaka–Malmquist basis built on top of it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest zero modulus accepted by [`BlaschkeProduct::new`].
pub const DEFAULT_ZERO_CAP: f64 = 0.95;

/// Slack on `|z| <= 1` for evaluation points.
pub const DISK_SLACK: f64 = 1e-12;

const CONSTANT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlaschkeJson", into = "BlaschkeJson")]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
    constant: Complex64,
}

/// Wire form: `{"zeros": [[re, im], ...], "const": [re, im]}`. A missing
/// `const` means 1.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlaschkeJson {
    pub zeros: Vec<Complex64>,
    #[serde(rename = "const", default = "one")]
    pub constant: Complex64,
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

impl TryFrom<BlaschkeJson> for BlaschkeProduct {
    type Error = Error;

    fn try_from(raw: BlaschkeJson) -> Result<Self> {
        BlaschkeProduct::new(raw.zeros, raw.constant)
    }
}

impl From<BlaschkeProduct> for BlaschkeJson {
    fn from(b: BlaschkeProduct) -> Self {
        BlaschkeJson {
            zeros: b.zeros,
            constant: b.constant,
        }
    }
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<Complex64>, constant: Complex64) -> Result<Self> {
        Self::with_cap(zeros, constant, DEFAULT_ZERO_CAP)
    }

    /// Like [`BlaschkeProduct::new`] with a caller-chosen zero-modulus cap.
    /// Caps must stay strictly below 1.
    pub fn with_cap(zeros: Vec<Complex64>, constant: Complex64, cap: f64) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::EmptyZeroList);
        }
        if !(cap.is_finite() && cap > 0.0 && cap < 1.0) {
            return Err(Error::NonFinite("zero cap"));
        }
        if !constant.is_finite() {
            return Err(Error::NonFinite("unimodular constant"));
        }
        for &a in &zeros {
            if !a.is_finite() {
                return Err(Error::NonFinite("Blaschke zero"));
            }
            if a.norm() > cap {
                return Err(Error::ZeroOutsideCap {
                    zero: format!("{a}"),
                    modulus: a.norm(),
                    cap,
                });
            }
        }
        let modulus = constant.norm();
        if (modulus - 1.0).abs() > CONSTANT_TOL {
            return Err(Error::NonUnimodularConstant { modulus });
        }
        Ok(Self {
            zeros,
            constant: constant / modulus,
        })
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Result<Self> {
        Self::new(vec![Complex64::new(0.0, 0.0); n], one())
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn constant(&self) -> Complex64 {
        self.constant
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn max_zero_modulus(&self) -> f64 {
        self.zeros.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        check_closed_disk(z)?;
        Ok(self.eval_unchecked(z))
    }

    /// Factor-by-factor evaluation without the domain check.
    pub(crate) fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        self.zeros
            .iter()
            .fold(self.constant, |acc, &a| acc * factor(a, z))
    }

    /// Zeros of `other` are appended after those of `self`.
    pub fn multiply(&self, other: &BlaschkeProduct) -> Result<BlaschkeProduct> {
        let mut zeros = self.zeros.clone();
        zeros.extend_from_slice(&other.zeros);
        let cap = self
            .max_zero_modulus()
            .max(other.max_zero_modulus())
            .max(DEFAULT_ZERO_CAP);
        BlaschkeProduct::with_cap(zeros, self.constant * other.constant, cap)
    }
}

/// Single Blaschke factor `(z - a) / (1 - conj(a) z)`.
#[inline]
pub(crate) fn factor(a: Complex64, z: Complex64) -> Complex64 {
    (z - a) / (1.0 - a.conj() * z)
}

pub(crate) fn check_closed_disk(z: Complex64) -> Result<()> {
    if !z.is_finite() {
        return Err(Error::NonFinite("evaluation point"));
    }
    if z.norm() > 1.0 + DISK_SLACK {
        return Err(Error::PointOutsideClosedDisk { modulus: z.norm() });
    }
    Ok(())
}
