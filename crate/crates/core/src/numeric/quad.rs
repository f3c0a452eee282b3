//! Gauss–Legendre rules on intervals and triangles, in `Real` arithmetic.

use num_rational::BigRational;

use super::Real;
use crate::error::{Error, Result};
use crate::triangulation::Simplex;

/// An `n`-point Gauss–Legendre rule on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<Real>,
    pub weights: Vec<Real>,
}

impl GaussLegendre {
    pub fn new(n: usize, bits: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("rule needs at least one node".into()));
        }
        let one = Real::one(bits);
        let two = Real::from_i64(2, bits);
        let tol = &one / Real::from_i64(2, bits).powi(bits.saturating_sub(8));
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 1..=n {
            let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut x = Real::from_f64(guess, bits);
            let mut dp;
            for _ in 0..100 {
                let (p, q) = legendre(n, &x, bits);
                dp = Real::from_i64(n as i64, bits) * (&x * &p - q) / (&x * &x - &one);
                let dx = p / &dp;
                x = &x - &dx;
                if dx.abs() < tol {
                    break;
                }
            }
            let (p, q) = legendre(n, &x, bits);
            dp = Real::from_i64(n as i64, bits) * (&x * &p - q) / (&x * &x - &one);
            let w = &two / ((&one - &x * &x) * &dp * &dp);
            nodes.push((&one + &x) / &two);
            weights.push(w / &two);
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

// (P_n(x), P_{n-1}(x))
fn legendre(n: usize, x: &Real, bits: usize) -> (Real, Real) {
    let mut p0 = Real::one(bits);
    let mut p1 = x.clone();
    if n == 0 {
        return (p0, Real::zero(bits));
    }
    for k in 1..n {
        let kk = k as i64;
        let p2 = (Real::from_i64(2 * kk + 1, bits) * x * &p1 - Real::from_i64(kk, bits) * &p0)
            / Real::from_i64(kk + 1, bits);
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// Quadrature points and weights for a 1- or 2-simplex.
///
/// Intervals are split at the midpoint and graded towards both ends by
/// `t = u^4`, which absorbs endpoint behaviour like `t^{s-1}`. Triangles use
/// the collapsed (Duffy) product rule.
pub fn simplex_points(s: &Simplex, rule: &GaussLegendre, bits: usize) -> Result<Vec<(Vec<Real>, Real)>> {
    let conv = |v: &[BigRational]| -> Vec<Real> { v.iter().map(|c| Real::from_rational(c, bits)).collect() };
    let verts: Vec<Vec<Real>> = s.vertices().iter().map(|v| conv(v)).collect();
    match s.dim() {
        1 => {
            let (a, b) = (&verts[0][0], &verts[1][0]);
            let half = (b - a) / Real::from_i64(2, bits);
            let four = Real::from_i64(4, bits);
            let mut out = Vec::with_capacity(2 * rule.len());
            for (u, w) in rule.nodes.iter().zip(&rule.weights) {
                let u3 = u.powi(3);
                let t = &u3 * u;
                let jw = w * &four * &u3 * half.abs();
                out.push((vec![a + &half * &t], jw.clone()));
                out.push((vec![b - &half * &t], jw));
            }
            Ok(out)
        }
        2 => {
            let e1: Vec<Real> = (0..2).map(|i| &verts[1][i] - &verts[0][i]).collect();
            let e2: Vec<Real> = (0..2).map(|i| &verts[2][i] - &verts[0][i]).collect();
            let jac = (&e1[0] * &e2[1] - &e1[1] * &e2[0]).abs();
            let one = Real::one(bits);
            let mut out = Vec::with_capacity(rule.len() * rule.len());
            for (u, wu) in rule.nodes.iter().zip(&rule.weights) {
                for (v, wv) in rule.nodes.iter().zip(&rule.weights) {
                    let a = u * (&one - v);
                    let b = u * v;
                    let p = (0..2).map(|i| &verts[0][i] + &a * &e1[i] + &b * &e2[i]).collect();
                    out.push((p, wu * wv * u * &jac));
                }
            }
            Ok(out)
        }
        d => Err(Error::DimensionUnsupported { dim: d, max: 2 }),
    }
}
