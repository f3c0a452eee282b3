//! Exact and high-precision computations around Witten zeta functions of
//! root systems.
//!
//! * [`linalg`]: exact matrices, Smith normal form, levels, lattice quotients.
//! * [`poly`]: Bernoulli polynomials, multivariate rational polynomials,
//!   truncated log series, exact simplex integration.
//! * [`roots`]: irreducible root systems, weight/coroot pairings, Weyl groups.
//! * [`lattice`]: the level sets `D`, exponent sets `E`, highest-root
//!   coefficient sets `H` and the rational set `T`.
//! * [`triangulation`]: simplices, barycentric subdivision and the integral
//!   band triangulation of the unit cube.
//! * [`witten`]: exact values at positive even integers, the multiple-sum
//!   oracle, the A2 pole coefficients and the rank-2 Bernoulli identities.
//! * [`numeric`]: arbitrary-precision Hurwitz zeta, Gamma, the exponential
//!   sum `F(s, a)` and quadrature of the integral representation.
//!
//! Data-parallel loops run on rayon when the `parallel` feature is enabled
//! (the default) and sequentially otherwise; see [`par`].

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod lattice;
pub mod linalg;
pub mod numeric;
pub mod par;
pub mod poly;
pub mod roots;
pub mod triangulation;
pub mod witten;

pub use error::{Error, Result};

/// Arbitrary-precision rational used throughout.
pub type Rational = num_rational::BigRational;
