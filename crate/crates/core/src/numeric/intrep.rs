//! Numerical check of `P(s) xi(s) = ((2 pi i)^s / Gamma(s))^r I(s)` in rank 2.

use num_traits::ToPrimitive;

use super::quad::{simplex_points, GaussLegendre};
use super::{gamma, hurwitz_zeta_real, Approx, Complex, Precision, Real};
use crate::error::{Error, Result};
use crate::par::Exec;
use crate::roots::{poincare_from_degrees, RootSystem};
use crate::witten::{integrand_spec, numeric_multisum_with, MultisumResult};

/// Default Gauss–Legendre order per cell.
pub const DEFAULT_NODES: usize = 16;

#[derive(Debug, Clone)]
pub struct IntRepReport {
    pub phi: String,
    pub s: f64,
    /// `P(s) K^{-s} zeta_Phi(s)`, with `zeta_Phi` from the multiple sum.
    pub lhs: Complex,
    /// `((2 pi i)^s / Gamma(s))^r I(s)`.
    pub rhs: Complex,
    /// `|lhs - rhs| / (|W| |xi(s)|)`; `P(s)` itself can vanish, as for A2 at odd `s`.
    pub residual: f64,
    /// Quadrature value of `I(s)` with the `n` versus `2n` node difference.
    pub integral: Approx<Real>,
    pub multisum: MultisumResult,
    pub cells: usize,
    pub nodes: usize,
}

fn cutoff_for_rank(rank: usize) -> u64 {
    if rank <= 2 {
        3000
    } else {
        150
    }
}

/// Quadrature of `I_Phi(s)` over the band triangulation.
pub fn integrand_quadrature(
    rs: &RootSystem,
    s: f64,
    nodes: usize,
    prec: Precision,
    exec: Exec,
) -> Result<(Approx<Real>, usize)> {
    if s.is_nan() || s <= 1.0 {
        return Err(Error::NotConvergent(format!("integral representation needs s > 1, got {s}")));
    }
    let spec = integrand_spec(rs);
    if spec.dim == 0 || spec.dim > 2 {
        return Err(Error::DimensionUnsupported { dim: spec.dim, max: 2 });
    }
    let bits = prec.bits();
    let tri = spec.triangulate(exec)?;
    let one_minus_s = Real::one(bits) - Real::from_f64(s, bits);
    let forms: Vec<Vec<Real>> =
        spec.forms.iter().map(|f| f.coeffs.iter().map(|&c| Real::from_i64(c, bits)).collect()).collect();

    let run = |n: usize| -> Result<(Real, Real)> {
        let rule = GaussLegendre::new(n, bits)?;
        let mut points = Vec::new();
        for cell in &tri.cells {
            for (p, w) in simplex_points(&cell.simplex, &rule, bits)? {
                points.push((p, w, cell.bands.clone()));
            }
        }
        let values = exec.map(points, |(p, w, bands)| -> Result<Real> {
            let mut f = w;
            for (form, &band) in forms.iter().zip(&bands) {
                let mut y = Real::from_i64(-band, bits);
                for (c, x) in form.iter().zip(&p) {
                    y = y + c * x;
                }
                f = f * hurwitz_zeta_real(&one_minus_s, &y, prec)?.value;
            }
            Ok(f)
        });
        let mut total = Real::zero(bits);
        let mut l1 = Real::zero(bits);
        for v in values {
            let v = v?;
            l1 = l1 + v.abs();
            total = total + v;
        }
        Ok((total, l1))
    };
    let (coarse, _) = run(nodes)?;
    let (fine, l1) = run(2 * nodes)?;
    let err = (&fine - &coarse).abs().to_f64();
    let tol = 1e-7 * l1.to_f64().max(f64::MIN_POSITIVE);
    if err > tol {
        return Err(Error::QuadratureFailure(format!("error estimate {err:.3e} exceeds {tol:.3e}")));
    }
    Ok((Approx { value: fine, error: err }, tri.cells.len()))
}

pub fn integral_rep_check(rs: &RootSystem, s: f64, nodes: usize, prec: Precision) -> Result<IntRepReport> {
    integral_rep_check_with(rs, s, nodes, prec, Exec::default())
}

pub fn integral_rep_check_with(
    rs: &RootSystem,
    s: f64,
    nodes: usize,
    prec: Precision,
    exec: Exec,
) -> Result<IntRepReport> {
    let bits = prec.bits();
    let (integral, cells) = integrand_quadrature(rs, s, nodes, prec, exec)?;
    let multisum = numeric_multisum_with(rs, s, cutoff_for_rank(rs.rank()), exec)?;
    let r = rs.num_positive_roots();
    let pi = Real::pi(bits);
    let sr = Real::from_f64(s, bits);

    // P(s) = sum_k c_k e^{i pi k s}
    let poincare = poincare_from_degrees(&rs.weyl_degrees());
    let mut p = Complex::zero(bits);
    for (k, c) in poincare.iter().enumerate() {
        let phase = Complex::cis(&(&pi * &sr * Real::from_i64(k as i64, bits)));
        p = p + phase.scale(&Real::from_bigint(c, bits));
    }
    let kphi = rs.k_phi().to_f64().unwrap_or(f64::INFINITY);
    let xi = Real::from_f64(multisum.value / kphi.powf(s), bits);
    let lhs = p.scale(&xi);

    // ((2 pi)^s / Gamma(s))^r e^{i pi r s / 2} I(s)
    let two_pi = &pi * Real::from_i64(2, bits);
    let g = gamma(&sr, prec)?.value;
    let modulus = (two_pi.pow(&sr) / g).powi(r);
    let phase = Complex::cis(&(&pi * &sr * Real::from_i64(r as i64, bits) / Real::from_i64(2, bits)));
    let rhs = phase.scale(&(modulus * &integral.value));

    let w = Real::from_bigint(&rs.weyl_order(), bits);
    let residual = ((&lhs - &rhs).norm() / (w * xi.abs())).to_f64();
    Ok(IntRepReport { phi: rs.label(), s, lhs, rhs, residual, integral, multisum, cells, nodes })
}
