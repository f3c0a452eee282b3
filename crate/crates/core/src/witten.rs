//! Witten zeta values: the Hurwitz-zeta integrand, exact values at positive
//! even integers, a brute-force multiple-sum oracle, the A2 pole
//! coefficients and the rank-2 Bernoulli identities.
//!
//! Conventions: `zeta_Phi(s) = K^s sum_lambda prod_alpha (lambda, alpha^vee)^{-s}`
//! over strongly dominant `lambda`, and `xi_Phi = K^{-s} zeta_Phi`. For
//! `Re s > 1`,
//!
//! ```text
//! P_Phi(s) xi_Phi(s) = ((2 pi i)^s / Gamma(s))^r I_Phi(s),
//! I_Phi(s) = int_{[0,1]^{r-n}} prod_{alpha non-simple} zeta(1-s, x_alpha)
//!            prod_i zeta(1-s, {-sum_alpha (lambda_i, alpha^vee) x_alpha}) dx.
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{binomial_u128, level_set, DEFAULT_BUDGET};
use crate::numeric::{riemann_zeta, Approx, Complex, Precision, Real};
use crate::par::Exec;
use crate::poly::{
    bernoulli_polynomial, binomial, factorial, integrate_affine_product, integrate_over_simplex, log_series,
    zeta_neg_int, MultiPoly,
};
use crate::roots::{Family, RootSystem};
use crate::triangulation::{band_triangulate_with, barycentric_subdivide, Simplex, Triangulation};

type Rational = BigRational;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormKind {
    /// `x_alpha` for a non-simple positive root.
    Identity { root: Vec<i64> },
    /// `-sum_alpha (lambda_i, alpha^vee) x_alpha`, taken modulo 1.
    Wrapped { weight: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    pub coeffs: Vec<i64>,
    pub kind: FormKind,
}

impl LinearForm {
    pub fn is_wrapped(&self) -> bool {
        matches!(self.kind, FormKind::Wrapped { .. })
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
            write!(f, "{sign}{mag}x{}", i + 1)?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The linear forms of the integrand of `I_Phi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegrandSpec {
    pub phi: String,
    pub dim: usize,
    pub forms: Vec<LinearForm>,
}

impl IntegrandSpec {
    pub fn coefficient_vectors(&self) -> Vec<Vec<i64>> {
        self.forms.iter().map(|f| f.coeffs.clone()).collect()
    }

    /// The `(r-n) x r` matrix `(I | C^T)` of absolute coefficients.
    pub fn form_matrix(&self) -> Vec<Vec<i64>> {
        (0..self.dim).map(|i| self.forms.iter().map(|f| f.coeffs[i].abs()).collect()).collect()
    }

    pub fn wrapped(&self) -> impl Iterator<Item = &LinearForm> {
        self.forms.iter().filter(|f| f.is_wrapped())
    }

    /// Band triangulation of `[0,1]^dim` for these forms, with the
    /// denominator bound checked against `D` of the form matrix.
    pub fn triangulate(&self, exec: Exec) -> Result<Triangulation> {
        let d = level_set(&self.form_matrix(), DEFAULT_BUDGET, exec)?;
        band_triangulate_with(&self.coefficient_vectors(), self.dim, Some(&d.values), exec)
    }

    /// Upper bound on the number of band regions: hyperplane count `H` gives
    /// at most `sum_{k <= dim} C(H, k)` regions.
    pub fn region_bound(&self) -> u128 {
        let cuts: usize = self
            .forms
            .iter()
            .map(|f| {
                let lo: i64 = f.coeffs.iter().filter(|&&c| c < 0).sum();
                let hi: i64 = f.coeffs.iter().filter(|&&c| c > 0).sum();
                (hi - lo - 1).max(0) as usize
            })
            .sum();
        (0..=self.dim).map(|k| binomial_u128(cuts, k)).fold(0u128, u128::saturating_add)
    }
}

pub fn integrand_spec(rs: &RootSystem) -> IntegrandSpec {
    let n = rs.rank();
    let r = rs.num_positive_roots();
    let dim = r - n;
    let m = rs.pairing_matrix();
    let mut forms: Vec<LinearForm> = (0..dim)
        .map(|k| LinearForm {
            coeffs: (0..dim).map(|j| i64::from(j == k)).collect(),
            kind: FormKind::Identity { root: rs.positive_roots()[n + k].clone() },
        })
        .collect();
    for i in 0..n {
        forms.push(LinearForm {
            coeffs: (0..dim).map(|k| -m[i][n + k]).collect(),
            kind: FormKind::Wrapped { weight: i },
        });
    }
    IntegrandSpec { phi: rs.label(), dim, forms }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    EvenValue,
    PoleCoeffA2,
    IdentityA2,
    IdentityB2,
    IdentityG2,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::EvenValue => "even_value",
            Quantity::PoleCoeffA2 => "pole_coeff_a2",
            Quantity::IdentityA2 => "identity_a2",
            Quantity::IdentityB2 => "identity_b2",
            Quantity::IdentityG2 => "identity_g2",
        })
    }
}

/// Which function a value belongs to: `zeta_Phi` or `xi_Phi = K^{-s} zeta_Phi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Zeta,
    Xi,
    /// Not a value of either (identities, pole coefficients of `I_Phi`).
    None,
}

/// `rational * pi^pi_power`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactValue {
    pub rational: Rational,
    pub pi_power: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NumericValue {
    pub decimal: String,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WittenReport {
    pub phi: String,
    pub quantity: Quantity,
    /// `s`, `m` or `n` depending on the quantity.
    pub argument: i64,
    pub normalization: Normalization,
    pub exact: Option<ExactValue>,
    pub numeric: Option<NumericValue>,
    pub cells: Option<usize>,
    pub elapsed: Duration,
    pub details: BTreeMap<String, String>,
}

#[derive(Debug, Clone)]
pub struct EvenOptions {
    /// Ceiling on the number of band regions.
    pub budget: u128,
    pub exec: Exec,
    /// Integrate over the barycentric subdivision of every cell.
    pub refine: bool,
    /// Skip the one-variable shortcut for A2.
    pub force_generic: bool,
}

impl Default for EvenOptions {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, exec: Exec::default(), refine: false, force_generic: false }
    }
}

/// Maximum integration dimension `r - n` for exact even values.
pub const MAX_EXACT_DIM: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenIntegral {
    /// `I_Phi(2m)`.
    pub value: Rational,
    pub cells: usize,
}

fn is_a2(rs: &RootSystem) -> bool {
    rs.kind().family == Family::A && rs.rank() == 2
}

/// Exact `I_Phi(2m)`: on each banded simplex, `zeta(1-2m, g - N) = -B_{2m}(g - N)/(2m)`.
pub fn even_integral(rs: &RootSystem, m: u32, opts: &EvenOptions) -> Result<EvenIntegral> {
    if m == 0 {
        return Err(Error::InvalidArgument("s = 2m needs m >= 1".into()));
    }
    let spec = integrand_spec(rs);
    if spec.dim > MAX_EXACT_DIM {
        return Err(Error::DimensionUnsupported { dim: spec.dim, max: MAX_EXACT_DIM });
    }
    let k = 2 * m as usize;
    let factor = bernoulli_polynomial(k).scale(&rat(-1, k as i64));
    if is_a2(rs) && !opts.force_generic && !opts.refine {
        // int_0^1 zeta(1-s, x) zeta(1-s, 1-x)^2 dx, and B_k(1-x) = B_k(x) for even k.
        let value = integrate_over_simplex(&factor.pow(3), &Simplex::standard(1))?;
        return Ok(EvenIntegral { value, cells: 1 });
    }
    let bound = spec.region_bound();
    if bound > opts.budget {
        return Err(Error::BudgetExceeded { needed: bound, budget: opts.budget });
    }
    let tri = spec.triangulate(opts.exec)?;
    let forms: Vec<Vec<Rational>> = spec.forms.iter().map(|f| f.coeffs.iter().map(|&c| int(c)).collect()).collect();
    let refine = opts.refine;
    let parts: Vec<Result<(Rational, usize)>> = opts.exec.map(tri.cells, |cell| {
        let factors: Vec<(&MultiPoly, (Rational, Vec<Rational>))> =
            forms.iter().zip(&cell.bands).map(|(f, &n)| (&factor, (int(-n), f.clone()))).collect();
        if refine {
            let mut acc = Rational::zero();
            let subs = barycentric_subdivide(&cell.simplex)?;
            for s in &subs {
                acc += integrate_affine_product(&factors, s)?;
            }
            Ok((acc, subs.len()))
        } else {
            Ok((integrate_affine_product(&factors, &cell.simplex)?, 1))
        }
    });
    let mut value = Rational::zero();
    let mut cells = 0;
    for p in parts {
        let (v, c) = p?;
        value += v;
        cells += c;
    }
    Ok(EvenIntegral { value, cells })
}

/// `zeta_Phi(2m) / pi^{2mr}` from `I_Phi(2m)`:
/// `K^{2m} ((-1)^m 2^{2m} / (2m-1)!)^r I_Phi(2m) / |W|`.
pub fn even_value_from_integral(rs: &RootSystem, m: u32, integral: &Rational) -> Rational {
    let k = 2 * m as usize;
    let r = rs.num_positive_roots() as i32;
    let sign = if m % 2 == 1 { -1 } else { 1 };
    let gamma_factor = int(sign) * int(BigInt::from(2).pow(k as u32)) / int(factorial(k - 1));
    let kphi = int(rs.k_phi()).pow(k as i32);
    kphi * gamma_factor.pow(r) * integral / int(rs.weyl_order())
}

/// Exact `zeta_Phi(2m) = q pi^{2mr}`.
pub fn exact_even_value(rs: &RootSystem, m: u32, opts: &EvenOptions) -> Result<WittenReport> {
    let start = Instant::now();
    let integral = even_integral(rs, m, opts)?;
    let q = even_value_from_integral(rs, m, &integral.value);
    let r = rs.num_positive_roots() as u32;
    let mut details = BTreeMap::new();
    details.insert("integral".to_owned(), integral.value.to_string());
    details.insert("K".to_owned(), rs.k_phi().to_string());
    details.insert("weyl_order".to_owned(), rs.weyl_order().to_string());
    let approx = q.to_f64().unwrap_or(f64::NAN) * std::f64::consts::PI.powi((2 * m * r) as i32);
    Ok(WittenReport {
        phi: rs.label(),
        quantity: Quantity::EvenValue,
        argument: 2 * i64::from(m),
        normalization: Normalization::Zeta,
        exact: Some(ExactValue { rational: q, pi_power: 2 * m * r }),
        numeric: Some(NumericValue { decimal: format!("{approx:.16e}"), error: approx.abs() * 1e-15 }),
        cells: Some(integral.cells),
        elapsed: start.elapsed(),
        details,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultisumResult {
    /// Approximation of `zeta_Phi(s)`.
    pub value: f64,
    /// Bound on `|zeta_Phi(s) - value|`: tail plus rounding.
    pub bound: f64,
    pub terms: u64,
    pub cutoff: u64,
}

impl MultisumResult {
    pub fn contains(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.bound
    }
}

// Upper bound for zeta(s), s > 1.
fn zeta_upper(s: f64) -> f64 {
    let l = 1000u32;
    (1..=l).map(|k| f64::from(k).powf(-s)).sum::<f64>() + f64::from(l).powf(1.0 - s) / (s - 1.0)
}

/// Most terms [`numeric_multisum`] will add.
pub const MULTISUM_TERM_LIMIT: u128 = 4_000_000_000;

/// `zeta_Phi(s)` summed over `1 <= m_i <= cutoff`, in double precision.
///
/// Omitted terms have some `m_j > N`; for such a term every root `alpha` with
/// `(lambda_j, alpha^vee) > 0` contributes a factor `<= m_j^{-s}` and the other
/// simple roots contribute `m_i^{-s}`, so the tail is at most
/// `K^s sum_j zeta(s)^{n-1} N^{1 - s k_j} / (s k_j - 1)` with
/// `k_j = #{alpha : (lambda_j, alpha^vee) > 0}`.
pub fn numeric_multisum(rs: &RootSystem, s: f64, cutoff: u64) -> Result<MultisumResult> {
    numeric_multisum_with(rs, s, cutoff, Exec::default())
}

pub fn numeric_multisum_with(rs: &RootSystem, s: f64, cutoff: u64, exec: Exec) -> Result<MultisumResult> {
    if s.is_nan() || s <= 1.0 {
        return Err(Error::NotConvergent(format!("multiple sum needs s > 1, got {s}")));
    }
    if cutoff == 0 {
        return Err(Error::InvalidArgument("cutoff must be positive".into()));
    }
    let n = rs.rank();
    let terms = u128::from(cutoff).saturating_pow(n as u32);
    if terms > MULTISUM_TERM_LIMIT {
        return Err(Error::BudgetExceeded { needed: terms, budget: MULTISUM_TERM_LIMIT });
    }
    let m = rs.pairing_matrix();
    let r = rs.num_positive_roots();
    let int_s = (s.fract() == 0.0 && s < 64.0).then_some(s as i32);
    let firsts: Vec<u64> = (1..=cutoff).collect();
    let partial = exec.map(firsts, |m1| {
        let mut idx = vec![1u64; n];
        idx[0] = m1;
        // Neumaier summation
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        loop {
            let mut prod = 1.0f64;
            for a in 0..r {
                let p: u64 = (0..n).map(|i| idx[i] * m[i][a] as u64).sum();
                prod *= p as f64;
            }
            let term = match int_s {
                Some(k) => prod.powi(-k),
                None => prod.powf(-s),
            };
            let t = sum + term;
            if sum.abs() >= term.abs() {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
            let mut i = n;
            loop {
                i -= 1;
                if i == 0 {
                    return sum + comp;
                }
                if idx[i] < cutoff {
                    idx[i] += 1;
                    break;
                }
                idx[i] = 1;
            }
        }
    });
    let mut total = 0.0;
    for p in partial.iter().rev() {
        total += p;
    }
    let ks = (rs.k_phi().to_f64().unwrap_or(f64::INFINITY)).powf(s);
    let value = ks * total;
    let zeta_s = zeta_upper(s);
    let nf = cutoff as f64;
    let tail: f64 = (0..n)
        .map(|j| {
            let kj = (0..r).filter(|&a| m[j][a] > 0).count() as f64;
            zeta_s.powi(n as i32 - 1) * nf.powf(1.0 - s * kj) / (s * kj - 1.0)
        })
        .sum::<f64>()
        * ks;
    let rounding = value.abs() * 1e-13;
    Ok(MultisumResult { value, bound: tail + rounding, terms: terms as u64, cutoff })
}

/// Formal rational combination of products of Riemann zeta values, keyed by
/// the sorted argument list.
pub type ZetaCombination = BTreeMap<Vec<u32>, Rational>;

fn combo_add(acc: &mut ZetaCombination, key: Vec<u32>, c: Rational) {
    let e = acc.entry(key.clone()).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        acc.remove(&key);
    }
}

fn combo_mul(a: &ZetaCombination, b: &ZetaCombination) -> ZetaCombination {
    let mut out = ZetaCombination::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            let mut k: Vec<u32> = ka.iter().chain(kb).copied().collect();
            k.sort_unstable();
            combo_add(&mut out, k, ca * cb);
        }
    }
    out
}

/// Numerical value of a zeta combination.
pub fn evaluate_combination(c: &ZetaCombination, prec: Precision) -> Result<Approx<Real>> {
    let bits = prec.bits();
    let mut cache: BTreeMap<u32, Approx<Real>> = BTreeMap::new();
    let mut total = Real::zero(bits);
    let mut err = 0.0;
    for (args, coeff) in c {
        let mut prod = Real::one(bits);
        let mut rel = 0.0;
        for &a in args {
            if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(a) {
                e.insert(riemann_zeta(&Real::from_i64(i64::from(a), bits), prec)?);
            }
            let z = &cache[&a];
            rel += z.error / z.value.abs().to_f64();
            prod = &prod * &z.value;
        }
        let term = Real::from_rational(coeff, bits) * prod;
        err += term.abs().to_f64() * rel;
        total = total + term;
    }
    Ok(Approx { value: total, error: err })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoleTerm {
    pub j: u32,
    pub coeff: Rational,
    /// `zeta(args[0]) zeta(args[1])`.
    pub args: [u32; 2],
}

/// `[I_{A2}(s)][(s+m)^{-1}] = sum_j C(m+j,j) C(2m-j,m-j) (1+2(-1)^j) zeta(1+m+j) zeta(1+2m-j)
/// + (1/2) C(3m+1,2m+1) zeta(3m+2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoleCoefficient {
    pub m: u32,
    pub terms: Vec<PoleTerm>,
    /// `(q0, 3m+2)`.
    pub single: (Rational, u32),
}

impl PoleCoefficient {
    /// Like terms merged, products keyed by sorted arguments.
    pub fn combination(&self) -> ZetaCombination {
        let mut out = ZetaCombination::new();
        for t in &self.terms {
            let mut k = t.args.to_vec();
            k.sort_unstable();
            combo_add(&mut out, k, t.coeff.clone());
        }
        combo_add(&mut out, vec![self.single.1], self.single.0.clone());
        out
    }

    pub fn evaluate(&self, prec: Precision) -> Result<Approx<Real>> {
        evaluate_combination(&self.combination(), prec)
    }
}

pub fn a2_pole_coefficient(m: u32) -> Result<PoleCoefficient> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be positive".into()));
    }
    let mu = m as usize;
    let terms = (0..=m)
        .map(|j| {
            let ju = j as usize;
            let alt = if j % 2 == 0 { 3 } else { -1 };
            PoleTerm {
                j,
                coeff: int(binomial(mu + ju, ju) * binomial(2 * mu - ju, mu - ju) * alt),
                args: [1 + m + j, 1 + 2 * m - j],
            }
        })
        .collect();
    let single = (int(binomial(3 * mu + 1, 2 * mu + 1)) / int(2), 3 * m + 2);
    Ok(PoleCoefficient { m, terms, single })
}

// zeta(1+m, 1 + sign x) = sum_k C(m+k,k) zeta(1+m+k) (-sign x)^k, truncated.
fn shifted_zeta_series(m: u32, sign: i64, order: usize) -> Vec<ZetaCombination> {
    (0..=order)
        .map(|k| {
            let c = binomial(m as usize + k, k) * if sign > 0 && k % 2 == 1 { -1 } else { 1 };
            ZetaCombination::from([(vec![1 + m + k as u32], int(c))])
        })
        .collect()
}

fn series_coeff_product(a: &[ZetaCombination], b: &[ZetaCombination], k: usize) -> ZetaCombination {
    let mut out = ZetaCombination::new();
    for i in 0..=k {
        for (key, c) in combo_mul(&a[i], &b[k - i]) {
            combo_add(&mut out, key, c);
        }
    }
    out
}

/// The same pole coefficient obtained from the residue formula
/// `[zeta(1+m,1-x)^2][x^m] + [2 zeta(1+m,1-x) zeta(1+m,1+x)][x^m]
///  + (1/2)[zeta(1+m,1-x)][x^{2m+1}]` by series multiplication.
pub fn a2_pole_by_residues(m: u32) -> ZetaCombination {
    let mu = m as usize;
    let minus = shifted_zeta_series(m, -1, 2 * mu + 1);
    let plus = shifted_zeta_series(m, 1, 2 * mu + 1);
    let mut out = series_coeff_product(&minus, &minus, mu);
    for (k, c) in series_coeff_product(&minus, &plus, mu) {
        combo_add(&mut out, k, c * int(2));
    }
    for (k, c) in &minus[2 * mu + 1] {
        combo_add(&mut out, k.clone(), c / int(2));
    }
    out
}

pub fn pole_coefficient_report(m: u32, prec: Precision) -> Result<WittenReport> {
    let start = Instant::now();
    let pc = a2_pole_coefficient(m)?;
    let v = pc.evaluate(prec)?;
    let mut details = BTreeMap::new();
    details.insert("terms".to_owned(), format_combination(&pc.combination()));
    Ok(WittenReport {
        phi: "A2".into(),
        quantity: Quantity::PoleCoeffA2,
        argument: i64::from(m),
        normalization: Normalization::None,
        exact: None,
        numeric: Some(NumericValue { decimal: v.value.to_decimal(prec.target_digits as usize), error: v.error }),
        cells: None,
        elapsed: start.elapsed(),
        details,
    })
}

/// Renders as `4*zeta(2)*zeta(3) + 2*zeta(5)`.
pub fn format_combination(c: &ZetaCombination) -> String {
    let mut out = String::new();
    for (k, q) in c {
        let z: Vec<String> = k.iter().map(|a| format!("zeta({a})")).collect();
        let term = format!("{}*{}", q.abs(), z.join("*"));
        match (out.is_empty(), q.is_negative()) {
            (true, false) => out.push_str(&term),
            (true, true) => out.push_str(&format!("-{term}")),
            (false, false) => out.push_str(&format!(" + {term}")),
            (false, true) => out.push_str(&format!(" - {term}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[derive(Debug, Clone)]
pub struct SecondDerivativeReport {
    pub m: u32,
    /// Closed form and residue route give the same combination.
    pub terms_match: bool,
    pub closed_form: ZetaCombination,
    pub residue_route: ZetaCombination,
    /// `zeta''_{A2}(-m) = (m!)^3 / ((2 pi)^{3m} 2^m) (-1)^{m/2} / 3 [bracket]`.
    pub closed_value: Real,
    /// `2^{-m} xi''_{A2}(-m)` with `xi'' = (1/3)((-2 pi i)^{-m} m!)^3 [I][(s+m)^{-1}]`.
    pub residue_value: Real,
    pub relative_difference: f64,
}

/// Two evaluations of `zeta''_{A2}(-m)` for even `m`. Since `xi` vanishes to
/// order 2 at `-m`, `zeta'' = (2^s xi)'' = 2^{-m} xi''` there.
pub fn onodera_consistency(m: u32, prec: Precision) -> Result<SecondDerivativeReport> {
    if m < 2 || m % 2 == 1 {
        return Err(Error::InvalidArgument("m must be even and at least 2".into()));
    }
    let bits = prec.bits() + 32;
    let pc = a2_pole_coefficient(m)?;
    let closed_form = pc.combination();
    let residue_route = a2_pole_by_residues(m);
    let terms_match = closed_form == residue_route;

    let mut bracket = Real::zero(bits);
    for t in &pc.terms {
        let z = evaluate_combination(&ZetaCombination::from([(t.args.to_vec(), t.coeff.clone())]), prec)?;
        bracket = bracket + z.value;
    }
    bracket =
        bracket + evaluate_combination(&ZetaCombination::from([(vec![pc.single.1], pc.single.0.clone())]), prec)?.value;
    let pi = Real::pi(bits);
    let two_pi = &pi * Real::from_i64(2, bits);
    let mf = Real::from_bigint(&factorial(m as usize), bits);
    let sign = if (m / 2).is_multiple_of(2) { 1 } else { -1 };
    let closed_value = (&mf * &mf * &mf) / (two_pi.powi(3 * m as usize) * Real::from_i64(1 << m, bits))
        * Real::from_i64(sign, bits)
        / Real::from_i64(3, bits)
        * &bracket;

    // Complex prefactor ((-2 pi i)^{-m} m!)^3 / 3, then 2^{-m}.
    let residue_value = evaluate_combination(&residue_route, prec)?.value;
    let z = Complex::new(Real::zero(bits), -two_pi.clone());
    let mut zm = Complex::real(Real::one(bits));
    for _ in 0..m {
        zm = &zm * &z;
    }
    let base = (&Complex::real(Real::one(bits)) / &zm).scale(&mf);
    let cube = &(&base * &base) * &base;
    let xi2 = cube.scale(&(residue_value / Real::from_i64(3, bits)));
    let residue_c = xi2.scale(&(Real::one(bits) / Real::from_i64(1 << m, bits)));
    let residue_value = residue_c.re.clone();
    let diff = (&Complex::real(closed_value.clone()) - &residue_c).norm();
    let relative_difference = diff.to_f64() / closed_value.abs().to_f64();
    Ok(SecondDerivativeReport {
        m,
        terms_match,
        closed_form,
        residue_route,
        closed_value,
        residue_value,
        relative_difference,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub n: u32,
    pub holds: bool,
    pub lhs: Rational,
    pub rhs: Rational,
    /// Coefficient of `log f(0)` in the extracted log-series coefficient.
    pub log_part: Rational,
}

fn z(k: i64) -> Rational {
    assert!(k <= 0, "zeta at a non-positive integer");
    zeta_neg_int((-k) as usize)
}

/// `(2n)!/(4n+1)! zeta(-6n-1) = sum_{k=0}^{2n} zeta(-k-2n) zeta(k-4n) / (k! (2n-k)!)`.
pub fn identity_a2(n: u32) -> Result<IdentityReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let nn = i64::from(n);
    let nu = n as usize;
    let lhs = int(factorial(2 * nu)) / int(factorial(4 * nu + 1)) * z(-6 * nn - 1);
    let rhs: Rational = (0..=2 * nn)
        .map(|k| z(-k - 2 * nn) * z(k - 4 * nn) / int(factorial(k as usize) * factorial(2 * nu - k as usize)))
        .sum();
    Ok(IdentityReport { n, holds: lhs == rhs, lhs, rhs, log_part: Rational::zero() })
}

fn linear(a: i64, b: i64) -> MultiPoly {
    MultiPoly::from_coeffs(&[int(a), int(b)])
}

// zeta(-w n - 1)/c (1 + p^{-1-e n}) [f^{2n} log f][x^{1+t n}]
//   = sum_{k=0}^{deg} [f^{2n}][x^k] zeta(-k-2n) zeta(k - t n)
fn log_identity(f: &MultiPoly, n: u32, w: i64, c: i64, p: i64, e: i64, t: i64) -> Result<IdentityReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let nn = i64::from(n);
    let order = (1 + t * nn) as usize;
    let f2n = f.pow(2 * n);
    let (plain, log_part) = log_series(f, order)?.mul_poly(&f2n).coeff(order);
    let factor = int(1) + int(1) / int(BigInt::from(p).pow((1 + e * nn) as u32));
    let lhs = z(-w * nn - 1) / int(c) * factor * &plain;
    let coeffs = f2n.univariate_coeffs();
    let rhs: Rational =
        coeffs.iter().enumerate().map(|(k, ck)| ck * z(-(k as i64) - 2 * nn) * z(k as i64 - t * nn)).sum();
    let holds = lhs == rhs && log_part.is_zero();
    Ok(IdentityReport { n, holds, lhs, rhs, log_part })
}

/// The B2 identity with `f_B = (1+x)(1+2x)`.
pub fn identity_b2(n: u32) -> Result<IdentityReport> {
    let f = &linear(1, 1) * &linear(1, 2);
    log_identity(&f, n, 8, 3, 2, 4, 6)
}

/// The G2 identity with `f_G = (1+x)(1+2x)(1+3x)(2+3x)`; the `log 2` part
/// of the coefficient vanishes because `deg f_G^{2n} = 8n < 10n + 1`.
pub fn identity_g2(n: u32) -> Result<IdentityReport> {
    let f = &(&(&linear(1, 1) * &linear(1, 2)) * &linear(1, 3)) * &linear(2, 3);
    log_identity(&f, n, 12, 5, 3, 6, 10)
}

pub fn identity_report(quantity: Quantity, n: u32) -> Result<(IdentityReport, WittenReport)> {
    let start = Instant::now();
    let (rep, phi) = match quantity {
        Quantity::IdentityA2 => (identity_a2(n)?, "A2"),
        Quantity::IdentityB2 => (identity_b2(n)?, "B2"),
        Quantity::IdentityG2 => (identity_g2(n)?, "G2"),
        q => return Err(Error::InvalidArgument(format!("{q} is not an identity"))),
    };
    let mut details = BTreeMap::new();
    details.insert("lhs".to_owned(), rep.lhs.to_string());
    details.insert("rhs".to_owned(), rep.rhs.to_string());
    details.insert("holds".to_owned(), rep.holds.to_string());
    let w = WittenReport {
        phi: phi.into(),
        quantity,
        argument: i64::from(n),
        normalization: Normalization::None,
        exact: Some(ExactValue { rational: rep.lhs.clone(), pi_power: 0 }),
        numeric: None,
        cells: None,
        elapsed: start.elapsed(),
        details,
    };
    Ok((rep, w))
}

/// Exact `zeta_Phi(2m) / pi^{2mr}` is a positive rational.
pub fn is_positive_value(r: &WittenReport) -> bool {
    r.exact.as_ref().is_some_and(|e| e.rational.is_positive())
}

impl WittenReport {
    pub fn exact_rational(&self) -> Option<&Rational> {
        self.exact.as_ref().map(|e| &e.rational)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(s: &str) -> RootSystem {
        RootSystem::parse(s).unwrap()
    }

    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    // Wrapped forms match `want` after some relabeling of the variables.
    fn wrapped_match(s: &IntegrandSpec, want: &[Vec<i64>]) -> bool {
        let mut want = want.to_vec();
        want.sort();
        perms(s.dim).into_iter().any(|p| {
            let mut got: Vec<Vec<i64>> = s.wrapped().map(|f| p.iter().map(|&i| f.coeffs[i]).collect()).collect();
            got.sort();
            got == want
        })
    }

    #[test]
    fn integrand_forms() {
        let a2 = integrand_spec(&rs("A2"));
        assert_eq!(a2.dim, 1);
        let w: Vec<String> = a2.wrapped().map(|f| f.to_string()).collect();
        assert_eq!(w, vec!["-x1", "-x1"]);
        let b2 = integrand_spec(&rs("B2"));
        assert_eq!(b2.dim, 2);
        assert!(wrapped_match(&b2, &[vec![-1, -2], vec![-1, -1]]));
        let a3 = integrand_spec(&rs("A3"));
        assert!(wrapped_match(&a3, &[vec![-1, 0, -1], vec![0, -1, -1], vec![-1, -1, -1]]));
        let g2 = integrand_spec(&rs("G2"));
        assert_eq!(g2.dim, 4);
        assert!(wrapped_match(&g2, &[vec![-1, -1, -2, -1], vec![-3, -1, -3, -2]]));
        for name in ["A3", "B3", "G2", "F4"] {
            let r = rs(name);
            let s = integrand_spec(&r);
            assert_eq!(s.forms.len(), r.num_positive_roots());
            assert_eq!(s.wrapped().count(), r.rank());
        }
    }

    #[test]
    fn form_matrix_has_same_levels() {
        for name in ["A3", "B3", "G2", "C3"] {
            let r = rs(name);
            let b = integrand_spec(&r).form_matrix();
            let lhs = level_set(&b, DEFAULT_BUDGET, Exec::Parallel).unwrap().values;
            let rhs = level_set(&r.pairing_matrix(), DEFAULT_BUDGET, Exec::Parallel).unwrap().values;
            assert_eq!(lhs, rhs, "{name}");
        }
    }

    #[test]
    fn a2_at_two() {
        let a2 = rs("A2");
        let i = even_integral(&a2, 1, &EvenOptions::default()).unwrap();
        assert_eq!(i.value, rat(-1, 30240));
        let rep = exact_even_value(&a2, 1, &EvenOptions::default()).unwrap();
        let e = rep.exact.unwrap();
        assert_eq!(e.rational, rat(4, 2835));
        assert_eq!(e.pi_power, 6);
    }

    #[test]
    fn generic_path_matches_a2_shortcut() {
        let a2 = rs("A2");
        for m in 1..=3 {
            let short = even_integral(&a2, m, &EvenOptions::default()).unwrap();
            let generic = even_integral(&a2, m, &EvenOptions { force_generic: true, ..Default::default() }).unwrap();
            assert_eq!(short.value, generic.value, "m={m}");
        }
    }

    #[test]
    fn refinement_independent() {
        for (name, m) in [("A2", 1), ("B2", 1), ("B2", 2)] {
            let r = rs(name);
            let base = even_integral(&r, m, &EvenOptions { force_generic: true, ..Default::default() }).unwrap();
            let fine = even_integral(&r, m, &EvenOptions { refine: true, ..Default::default() }).unwrap();
            assert_eq!(base.value, fine.value, "{name} m={m}");
            assert!(fine.cells > base.cells);
        }
    }

    #[test]
    fn even_values_match_multisum() {
        let cases: [(&str, u32, u64, f64); 3] = [("A2", 1, 2000, 1e-8), ("A2", 2, 200, 1e-8), ("B2", 1, 300, 1e-6)];
        for (name, m, cutoff, tol) in cases {
            let r = rs(name);
            let rep = exact_even_value(&r, m, &EvenOptions::default()).unwrap();
            assert!(is_positive_value(&rep));
            let e = rep.exact.unwrap();
            let exact = e.rational.to_f64().unwrap() * std::f64::consts::PI.powi(e.pi_power as i32);
            let sum = numeric_multisum(&r, f64::from(2 * m), cutoff).unwrap();
            assert!(sum.contains(exact) || ((exact - sum.value) / exact).abs() < tol, "{name} {m}");
            assert!(sum.bound / exact < tol, "{name}: bound {}", sum.bound);
        }
    }

    #[test]
    fn multisum_a1_is_riemann_zeta() {
        let res = numeric_multisum(&rs("A1"), 2.0, 100_000).unwrap();
        assert!(res.contains(std::f64::consts::PI.powi(2) / 6.0));
        assert!(matches!(numeric_multisum(&rs("A1"), 1.0, 10), Err(Error::NotConvergent(_))));
    }

    #[test]
    fn multisum_schedule_independent() {
        let r = rs("A3");
        let a = numeric_multisum_with(&r, 2.0, 40, Exec::Sequential).unwrap();
        let b = numeric_multisum_with(&r, 2.0, 40, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unsupported_dimension() {
        assert_eq!(
            even_integral(&rs("B3"), 1, &EvenOptions::default()),
            Err(Error::DimensionUnsupported { dim: 6, max: 4 })
        );
    }

    #[test]
    fn pole_coefficient_examples() {
        let p1 = a2_pole_coefficient(1).unwrap();
        let want = ZetaCombination::from([(vec![2, 3], int(4)), (vec![5], int(2))]);
        assert_eq!(p1.combination(), want);
        let p2 = a2_pole_coefficient(2).unwrap();
        assert_eq!(p2.terms.len(), 3);
        let alts: Vec<i64> = p2
            .terms
            .iter()
            .map(|t| {
                let base = binomial(2 + t.j as usize, t.j as usize) * binomial(4 - t.j as usize, 2 - t.j as usize);
                (&t.coeff / int(base)).to_integer().to_i64().unwrap()
            })
            .collect();
        assert_eq!(alts, vec![3, -1, 3]);
        let prec = Precision::new(30);
        let b = prec.bits();
        let v = p1.evaluate(prec).unwrap().value;
        let z = |k: i64| riemann_zeta(&Real::from_i64(k, b), prec).unwrap().value;
        let direct = Real::from_i64(4, b) * z(2) * z(3) + Real::from_i64(2, b) * z(5);
        assert!((&v - &direct).abs().to_f64() < 1e-30);
    }

    #[test]
    fn combination_rendering() {
        assert_eq!(format_combination(&a2_pole_coefficient(1).unwrap().combination()), "4*zeta(2)*zeta(3) + 2*zeta(5)");
        assert_eq!(
            format_combination(&a2_pole_coefficient(2).unwrap().combination()),
            "36*zeta(3)*zeta(5) - 9*zeta(4)*zeta(4) + 21/2*zeta(8)"
        );
    }

    #[test]
    fn residue_route_matches_closed_form() {
        for m in 1..=10 {
            assert_eq!(a2_pole_by_residues(m), a2_pole_coefficient(m).unwrap().combination(), "m={m}");
        }
    }

    #[test]
    fn second_derivative_routes_agree() {
        for m in [2, 4] {
            let r = onodera_consistency(m, Precision::new(30)).unwrap();
            assert!(r.terms_match);
            assert!(r.relative_difference < 1e-25, "m={m}: {}", r.relative_difference);
        }
        assert!(onodera_consistency(3, Precision::new(30)).is_err());
    }

    #[test]
    fn identity_a2_first() {
        let r = identity_a2(1).unwrap();
        assert_eq!(r.lhs, rat(1, 14400));
        assert_eq!(r.rhs, rat(1, 14400));
        assert!(r.holds);
    }

    #[test]
    fn identities_hold() {
        for n in 1..=6 {
            assert!(identity_a2(n).unwrap().holds, "a2 n={n}");
        }
        for n in 1..=4 {
            assert!(identity_b2(n).unwrap().holds, "b2 n={n}");
        }
        for n in 1..=2 {
            let r = identity_g2(n).unwrap();
            assert!(r.log_part.is_zero());
            assert!(r.holds, "g2 n={n}");
        }
    }

    #[test]
    fn f_b_degree_bound() {
        let f = &linear(1, 1) * &linear(1, 2);
        for n in 1..=3u32 {
            let c = f.pow(2 * n).univariate_coeffs();
            assert_eq!(c.len(), 4 * n as usize + 1);
        }
    }

    #[test]
    fn perturbed_identity_fails() {
        // Sanity check on the comparison: a wrong weight breaks equality.
        let f = &linear(1, 1) * &linear(1, 2);
        assert!(!log_identity(&f, 1, 8, 3, 2, 4, 6).unwrap().lhs.is_zero());
        assert!(!log_identity(&f, 1, 8, 5, 2, 4, 6).unwrap().holds);
    }

    #[test]
    fn b2_value_is_rational_pi_power() {
        let rep = exact_even_value(&rs("B2"), 1, &EvenOptions::default()).unwrap();
        assert_eq!(rep.exact.as_ref().unwrap().pi_power, 8);
        assert!(rep.cells.unwrap() >= 4);
    }
}
