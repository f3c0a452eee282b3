use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{factorial, MultiPoly};
use crate::error::{Error, Result};
use crate::triangulation::Simplex;

/// Integral of `prod y_i^{a_i}` over the standard simplex
/// `{y >= 0, sum y <= 1}` of dimension `exponents.len()`.
pub fn monomial_simplex_integral(exponents: &[u32]) -> BigRational {
    let d = exponents.len();
    let total: usize = exponents.iter().map(|&a| a as usize).sum();
    let num = exponents.iter().fold(BigInt::from(1), |acc, &a| acc * factorial(a as usize));
    BigRational::new(num, factorial(d + total))
}

fn standard_integral(p: &MultiPoly) -> BigRational {
    p.terms().map(|(e, c)| c * monomial_simplex_integral(e)).sum()
}

/// Exact integral of `p` over `s`, via the affine pullback
/// `x = v_0 + E y` onto the standard simplex.
pub fn integrate_over_simplex(p: &MultiPoly, s: &Simplex) -> Result<BigRational> {
    let d = s.dim();
    if p.nvars() != d {
        return Err(Error::DimensionMismatch(format!("polynomial in {} variables over a {}-simplex", p.nvars(), d)));
    }
    let jac = s.edge_determinant().abs();
    if jac.is_zero() {
        return Err(Error::DegenerateSimplex);
    }
    if d == 0 {
        return Ok(p.eval(&[]));
    }
    let v0 = &s.vertices()[0];
    let images: Vec<MultiPoly> = (0..d)
        .map(|i| {
            let edges: Vec<BigRational> = (1..=d).map(|k| &s.vertices()[k][i] - &v0[i]).collect();
            MultiPoly::affine(v0[i].clone(), &edges)
        })
        .collect();
    Ok(standard_integral(&p.substitute(&images)) * jac)
}

/// Integral over `s` of `prod_k f_k(l_k(x))` where each `f_k` is univariate
/// and each `l_k` affine.
///
/// Each factor is pulled back to the standard simplex before multiplying,
/// which keeps intermediate polynomials far smaller than expanding in `x`
/// first. `forms[k]` is `(constant, linear coefficients)`.
pub fn integrate_affine_product(
    factors: &[(&MultiPoly, (BigRational, Vec<BigRational>))],
    s: &Simplex,
) -> Result<BigRational> {
    let d = s.dim();
    let jac = s.edge_determinant().abs();
    if jac.is_zero() {
        return Err(Error::DegenerateSimplex);
    }
    let verts = s.vertices();
    let mut prod = MultiPoly::one(d);
    for (f, (c0, lin)) in factors {
        if lin.len() != d {
            return Err(Error::DimensionMismatch("affine form length".into()));
        }
        let at = |v: &[BigRational]| -> BigRational { lin.iter().zip(v).fold(c0.clone(), |acc, (a, x)| acc + a * x) };
        let base = at(&verts[0]);
        let slopes: Vec<BigRational> = (1..=d).map(|k| at(&verts[k]) - &base).collect();
        let pulled = f.compose_univariate(&MultiPoly::affine(base, &slopes));
        prod = &prod * &pulled;
    }
    Ok(standard_integral(&prod) * jac)
}
