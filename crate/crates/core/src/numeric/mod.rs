//! Arbitrary-precision numerics: Hurwitz and Riemann zeta, Gamma, the
//! exponential sum `F(s, a)`, Gauss–Legendre quadrature and the numerical
//! check of the integral representation.

mod intrep;
mod quad;
mod real;
mod zeta;

pub use intrep::{integral_rep_check, integral_rep_check_with, integrand_quadrature, IntRepReport, DEFAULT_NODES};
pub use quad::{simplex_points, GaussLegendre};

pub use real::{format_decimal, Complex, Real};
pub use zeta::{apostol_check, gamma, hurwitz_zeta, hurwitz_zeta_real, lerch_f, riemann_zeta, ExpSumReport};

use crate::error::{Error, Result};

/// Decimal digits requested by the caller and carried internally.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Precision {
    pub target_digits: u32,
    pub working_digits: u32,
}

impl Precision {
    pub const GUARD: u32 = 10;

    pub fn new(target_digits: u32) -> Self {
        Self { target_digits, working_digits: target_digits + 2 * Self::GUARD }
    }

    pub fn with_working(target_digits: u32, working_digits: u32) -> Result<Self> {
        if working_digits < target_digits + Self::GUARD {
            return Err(Error::InvalidArgument(format!(
                "working precision {working_digits} must exceed target {target_digits} by at least {}",
                Self::GUARD
            )));
        }
        Ok(Self { target_digits, working_digits })
    }

    /// Mantissa bits for the working precision.
    pub fn bits(&self) -> usize {
        (f64::from(self.working_digits) * std::f64::consts::LOG2_10).ceil() as usize + 8
    }
}

impl Default for Precision {
    fn default() -> Self {
        Self::new(30)
    }
}

/// A value with an absolute error bound.
#[derive(Debug, Clone)]
pub struct Approx<T> {
    pub value: T,
    pub error: f64,
}
