use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::real::{Complex, Real};
use super::{Approx, Precision};
use crate::error::{Error, Result};
use crate::poly::{bernoulli_number, factorial};

fn rat_real(x: &BigRational, bits: usize) -> Real {
    Real::from_rational(x, bits)
}

// B_{2j} / (2j)!
fn bernoulli_ratio(j: usize) -> BigRational {
    bernoulli_number(2 * j) / BigRational::from_integer(factorial(2 * j))
}

fn ten_pow_neg(d: u32) -> f64 {
    10f64.powi(-(d as i32))
}

/// Hurwitz zeta `zeta(s, a) = sum_{k >= 0} (k + a)^{-s}` by Euler–Maclaurin.
///
/// The reported error is twice the magnitude of the first omitted
/// Bernoulli correction; the cutoff is doubled until that is below
/// `10^-(target+2)` (relative to `max(1, |value|)`).
pub fn hurwitz_zeta(s: &Complex, a: &Real, prec: Precision) -> Result<Approx<Complex>> {
    let sre = s.re.to_f64();
    if s.is_real() && sre == 1.0 {
        return Err(Error::PoleAtOne);
    }
    if a.is_negative() || a.is_zero() {
        return Err(Error::InvalidArgument("Hurwitz zeta needs a > 0".into()));
    }
    let target = prec.target_digits as f64;
    let s_abs = s.norm().to_f64();
    let k_terms = ((0.7 * target).ceil() as usize).max(2);
    let mut m = (2.0 * target).max((3.0 * s_abs).ceil()).max(10.0) as usize;
    let tol = ten_pow_neg(prec.target_digits + 2);
    for _ in 0..8 {
        let af = a.to_f64();
        // Extra bits absorb cancellation between the partial sum and the tail.
        let growth = ((-sre).max(0.0) + 1.0) * (m as f64 + af + 1.0).log2();
        let bits = prec.bits() + growth.ceil() as usize + 16;
        let s_b = Complex::new(s.re.with_bits(bits), s.im.with_bits(bits));
        let a_b = a.with_bits(bits);
        let mut sum = Complex::zero(bits);
        for k in 0..m {
            let x = &a_b + Real::from_i64(k as i64, bits);
            sum = &sum + &Complex::pow_neg(&x, &s_b);
        }
        let big_n = &a_b + Real::from_i64(m as i64, bits);
        let n_neg_s = Complex::pow_neg(&big_n, &s_b);
        let one = Complex::real(Real::one(bits));
        let s_minus_1 = &s_b - &one;
        // N^{1-s} / (s-1) + N^{-s} / 2
        sum = &sum + &(&n_neg_s.scale(&big_n) / &s_minus_1);
        sum = &sum + &n_neg_s.scale(&Real::from_f64(0.5, bits));
        let inv_n2 = Real::one(bits) / (&big_n * &big_n);
        let mut power = n_neg_s.scale(&(Real::one(bits) / &big_n));
        let mut poch = s_b.clone();
        let mut omitted = Complex::zero(bits);
        for j in 1..=k_terms + 1 {
            let term = (&poch * &power).scale(&rat_real(&bernoulli_ratio(j), bits));
            if j > k_terms {
                omitted = term;
                break;
            }
            sum = &sum + &term;
            let c1 = &s_b + &Complex::real(Real::from_i64(2 * j as i64 - 1, bits));
            let c2 = &s_b + &Complex::real(Real::from_i64(2 * j as i64, bits));
            poch = &(&poch * &c1) * &c2;
            power = power.scale(&inv_n2);
        }
        let bound = 2.0 * omitted.norm().to_f64();
        let scale = sum.norm().to_f64().max(1.0);
        if bound <= tol * scale {
            return Ok(Approx { value: sum, error: bound });
        }
        m *= 2;
    }
    Err(Error::NotConvergent(format!("Euler-Maclaurin at s = {}", s.re.to_decimal(8))))
}

/// Real-argument convenience wrapper of [`hurwitz_zeta`].
pub fn hurwitz_zeta_real(s: &Real, a: &Real, prec: Precision) -> Result<Approx<Real>> {
    let r = hurwitz_zeta(&Complex::real(s.clone()), a, prec)?;
    Ok(Approx { value: r.value.re, error: r.error })
}

/// `Gamma(x)` for real `x > 0` by a shifted Stirling series.
pub fn gamma(x: &Real, prec: Precision) -> Result<Approx<Real>> {
    if x.is_negative() || x.is_zero() {
        return Err(Error::InvalidArgument("gamma implemented for x > 0".into()));
    }
    let bits = prec.bits() + 32;
    let x = x.with_bits(bits);
    let z0 = f64::from(prec.working_digits) + 10.0;
    let shift = (z0 - x.to_f64()).ceil().max(0.0) as i64;
    let z = &x + Real::from_i64(shift, bits);
    let half = Real::from_f64(0.5, bits);
    let two_pi = Real::pi(bits) * Real::from_i64(2, bits);
    let mut lg = (&z - &half) * z.ln() - &z + &half * two_pi.ln();
    let zinv = Real::one(bits) / &z;
    let zinv2 = &zinv * &zinv;
    let mut zpow = zinv.clone();
    let eps = 10f64.powi(-(prec.working_digits as i32));
    let mut err = f64::INFINITY;
    for k in 1..200usize {
        let c = bernoulli_number(2 * k) / BigRational::from_integer(BigInt::from(2 * k * (2 * k - 1)));
        let term = rat_real(&c, bits) * &zpow;
        if term.abs().to_f64() < eps {
            err = term.abs().to_f64();
            break;
        }
        lg = lg + term;
        zpow = &zpow * &zinv2;
    }
    let mut g = lg.exp();
    for i in 0..shift {
        g = &g / (&x + Real::from_i64(i, bits));
    }
    let error = err * g.abs().to_f64() * 2.0;
    Ok(Approx { value: g.with_bits(prec.bits()), error })
}

// d_k for Borwein's algorithm, exact.
fn borwein_d(n: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = BigRational::zero();
    for i in 0..=n {
        let num = factorial(n + i - 1) * BigInt::from(4).pow(i as u32);
        let den = factorial(n - i) * factorial(2 * i);
        acc += BigRational::new(num * BigInt::from(n), den);
        out.push(acc.to_integer());
    }
    out
}

fn borwein_zeta(s: &Real, prec: Precision) -> Approx<Real> {
    let bits = prec.bits() + 32;
    let n = (1.31 * f64::from(prec.working_digits)).ceil() as usize + 4;
    let d = borwein_d(n);
    let s = s.with_bits(bits);
    let dn = Real::from_bigint(&d[n], bits);
    let mut acc = Real::zero(bits);
    for k in 0..n {
        let term = Real::from_bigint(&(&d[k] - &d[n]), bits) / Real::from_i64(k as i64 + 1, bits).pow(&s);
        acc = if k % 2 == 0 { acc + term } else { acc - term };
    }
    let two = Real::from_i64(2, bits);
    let factor = Real::one(bits) - two.pow(&(Real::one(bits) - &s));
    let value = -(acc / (dn * &factor));
    let error = 3.0 / (3.0 + 8f64.sqrt()).powi(n as i32) * 2.0 / factor.abs().to_f64();
    Approx { value: value.with_bits(prec.bits()), error }
}

/// Riemann zeta for real `s != 1`: Borwein's alternating-series
/// acceleration for `s >= 1/2`, the functional equation below that.
pub fn riemann_zeta(s: &Real, prec: Precision) -> Result<Approx<Real>> {
    let sf = s.to_f64();
    if sf == 1.0 {
        return Err(Error::PoleAtOne);
    }
    let bits = prec.bits() + 32;
    if s.is_zero() {
        return Ok(Approx { value: Real::from_f64(-0.5, prec.bits()), error: 0.0 });
    }
    if sf >= 0.5 {
        return Ok(borwein_zeta(s, prec));
    }
    let s = s.with_bits(bits);
    let one = Real::one(bits);
    let t = &one - &s;
    let z = borwein_zeta(&t, prec);
    let g = gamma(&t, prec)?;
    let pi = Real::pi(bits);
    let two = Real::from_i64(2, bits);
    let pref = two.pow(&s) * pi.pow(&(&s - &one)) * (&pi * &s / &two).sin();
    let value = &pref * &g.value * &z.value;
    let p = pref.abs().to_f64();
    let error = p * (g.error * z.value.abs().to_f64() + z.error * g.value.abs().to_f64());
    Ok(Approx { value: value.with_bits(prec.bits()), error })
}

/// `F(s, a) = sum_{n >= 1} e^{2 pi i n a} n^{-s} + e^{pi i s} sum_{n >= 1} e^{-2 pi i n a} n^{-s}`
/// for rational `a = p/q` in `(0, 1)`, via the decomposition
/// `sum_n e^{2 pi i n a} n^{-s} = q^{-s} sum_{k=1}^{q} e^{2 pi i k a} zeta(s, k/q)`.
pub fn lerch_f(s: &Complex, a: &BigRational, prec: Precision) -> Result<Approx<Complex>> {
    if s.re.to_f64() <= 1.0 {
        return Err(Error::NotConvergent("F(s, a) needs Re s > 1".into()));
    }
    if !a.is_positive() || a >= &BigRational::one() {
        return Err(Error::InvalidArgument("F(s, a) implemented for 0 < a < 1".into()));
    }
    let bits = prec.bits() + 16;
    let q = a.denom().to_i64().ok_or_else(|| Error::InvalidArgument("denominator too large".into()))?;
    let s = Complex::new(s.re.with_bits(bits), s.im.with_bits(bits));
    let two_pi = Real::pi(bits) * Real::from_i64(2, bits);
    let a_r = rat_real(a, bits);
    let mut plus = Complex::zero(bits);
    let mut minus = Complex::zero(bits);
    let mut err = 0.0;
    for k in 1..=q {
        let shift = Real::from_rational(&BigRational::new(k.into(), q.into()), bits);
        let z = hurwitz_zeta(&s, &shift, prec)?;
        err += 2.0 * z.error;
        let phase = Complex::cis(&(&two_pi * &a_r * Real::from_i64(k, bits)));
        plus = &plus + &(&phase * &z.value);
        minus = &minus + &(&phase.conj() * &z.value);
    }
    let q_neg_s = Complex::pow_neg(&Real::from_i64(q, bits), &s);
    let pi = Real::pi(bits);
    let e_ipis = Complex::new(-(&pi * &s.im), &pi * &s.re).exp();
    let value = &q_neg_s * &(&plus + &(&e_ipis * &minus));
    let scale = q_neg_s.norm().to_f64() * (1.0 + e_ipis.norm().to_f64());
    Ok(Approx { value, error: err * scale })
}

#[derive(Debug, Clone)]
pub struct ExpSumReport {
    /// `zeta(1 - s, a)`.
    pub lhs: Complex,
    /// `Gamma(s) (2 pi i)^{-s} F(s, a)`.
    pub rhs: Complex,
    pub residual: Real,
}

/// Both sides of `zeta(1 - s, a) = Gamma(s) (2 pi i)^{-s} F(s, a)` for real
/// rational `s > 1`, with `(2 pi i)^{-s} = (2 pi)^{-s} e^{-i pi s / 2}`.
pub fn apostol_check(s: &BigRational, a: &BigRational, prec: Precision) -> Result<ExpSumReport> {
    let bits = prec.bits() + 16;
    let s_r = rat_real(s, bits);
    let a_r = rat_real(a, bits);
    let one = Real::one(bits);
    let lhs = hurwitz_zeta(&Complex::real(&one - &s_r), &a_r, prec)?.value;
    let f = lerch_f(&Complex::real(s_r.clone()), a, prec)?.value;
    let g = gamma(&s_r, prec)?.value;
    let pi = Real::pi(bits);
    let two_pi = &pi * Real::from_i64(2, bits);
    let mag = g / two_pi.pow(&s_r);
    let rot = Complex::cis(&-(&pi * &s_r / Real::from_i64(2, bits)));
    let rhs = (&rot * &f).scale(&mag);
    let residual = (&lhs - &rhs).norm();
    Ok(ExpSumReport { lhs, rhs, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::hurwitz_neg_int;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn p30() -> Precision {
        Precision::new(30)
    }

    fn close(a: &Real, b: &Real, tol: f64) -> bool {
        (a - b).abs().to_f64() <= tol * b.abs().to_f64().max(1.0)
    }

    #[test]
    fn hurwitz_examples() {
        let p = p30();
        let b = p.bits();
        let pi = Real::pi(b);
        let z2 = hurwitz_zeta_real(&Real::from_i64(2, b), &Real::one(b), p).unwrap();
        assert!(close(&z2.value, &(&pi * &pi / Real::from_i64(6, b)), 1e-30));
        let h = hurwitz_zeta_real(&Real::from_i64(2, b), &Real::from_f64(0.5, b), p).unwrap();
        assert!(close(&h.value, &(&pi * &pi / Real::from_i64(2, b)), 1e-30));
        let h = hurwitz_zeta_real(&Real::from_i64(-1, b), &Real::from_f64(0.5, b), p).unwrap();
        assert!(close(&h.value, &Real::from_rational(&q(1, 24), b), 1e-30));
        assert!(matches!(hurwitz_zeta_real(&Real::one(b), &Real::one(b), p), Err(Error::PoleAtOne)));
    }

    #[test]
    fn hurwitz_matches_bernoulli() {
        let p = Precision::new(25);
        let b = p.bits();
        for n in 0..=10usize {
            for a in [q(1, 4), q(1, 3), q(1, 2), q(2, 3), q(1, 1)] {
                let got = hurwitz_zeta_real(&Real::from_i64(-(n as i64), b), &Real::from_rational(&a, b), p).unwrap();
                let want = Real::from_rational(&hurwitz_neg_int(n, &a), b);
                assert!(close(&got.value, &want, 1e-25), "n={n} a={a}");
            }
        }
    }

    #[test]
    fn hurwitz_agrees_with_riemann() {
        let p = Precision::new(25);
        let b = p.bits();
        for k in -10i64..=10 {
            if k == 2 {
                continue;
            }
            let s = Real::from_rational(&q(k, 2), b);
            let h = hurwitz_zeta_real(&s, &Real::one(b), p).unwrap();
            let r = riemann_zeta(&s, p).unwrap();
            assert!(close(&h.value, &r.value, 1e-24), "s={k}/2: {} vs {}", h.value, r.value);
        }
    }

    #[test]
    fn thirds_relation() {
        let p = Precision::new(25);
        let b = p.bits();
        for s in [q(5, 2), q(3, 1), q(-3, 2)] {
            let sr = Real::from_rational(&s, b);
            let lhs = hurwitz_zeta_real(&sr, &Real::from_rational(&q(1, 3), b), p).unwrap().value
                + hurwitz_zeta_real(&sr, &Real::from_rational(&q(2, 3), b), p).unwrap().value;
            let rhs = (Real::from_i64(3, b).pow(&sr) - Real::one(b)) * riemann_zeta(&sr, p).unwrap().value;
            assert!(close(&lhs, &rhs, 1e-23), "s={s}");
        }
    }

    #[test]
    fn gamma_values() {
        let p = p30();
        let b = p.bits();
        let g = gamma(&Real::from_i64(5, b), p).unwrap();
        assert!(close(&g.value, &Real::from_i64(24, b), 1e-30));
        let g = gamma(&Real::from_f64(0.5, b), p).unwrap();
        assert!(close(&g.value, &Real::pi(b).sqrt(), 1e-30));
    }

    #[test]
    fn lerch_examples() {
        let p = p30();
        let b = p.bits();
        let f = lerch_f(&Complex::real(Real::from_i64(2, b)), &q(1, 2), p).unwrap();
        let pi = Real::pi(b);
        let want = -(&pi * &pi / Real::from_i64(6, b));
        assert!(close(&f.value.re, &want, 1e-30));
        assert!(f.value.im.abs().to_f64() < 1e-30);
        assert!(lerch_f(&Complex::real(Real::one(b)), &q(1, 2), p).is_err());
    }

    // Brute-force partial sums with an explicit tail bound.
    fn direct_f(s: f64, a: f64, n: usize) -> ((f64, f64), f64) {
        let (mut re, mut im) = (0.0, 0.0);
        let tau = std::f64::consts::TAU;
        let (es, ec) = (std::f64::consts::PI * s).sin_cos();
        for k in (1..=n).rev() {
            let kf = k as f64;
            let w = kf.powf(-s);
            let (sn, cs) = (tau * kf * a).sin_cos();
            re += w * cs + w * (ec * cs + es * sn);
            im += w * sn + w * (es * cs - ec * sn);
        }
        ((re, im), 2.0 * (n as f64).powf(1.0 - s) / (s - 1.0))
    }

    #[test]
    fn lerch_matches_direct_sum() {
        let p = Precision::new(20);
        let b = p.bits();
        for (s, a) in [(4.0, q(1, 4)), (3.0, q(1, 3)), (2.5, q(7, 10))] {
            let af = a.to_f64().unwrap();
            let f = lerch_f(&Complex::real(Real::from_f64(s, b)), &a, p).unwrap();
            let ((re, im), tail) = direct_f(s, af, 200_000);
            let (fr, fi) = f.value.to_f64_pair();
            assert!((fr - re).abs() <= tail + 1e-12, "s={s} a={a}: {fr} vs {re}");
            assert!((fi - im).abs() <= tail + 1e-12, "s={s} a={a}: {fi} vs {im}");
        }
    }

    #[test]
    fn exp_sum_at_half() {
        let r = apostol_check(&q(2, 1), &q(1, 2), p30()).unwrap();
        assert!((r.lhs.re.to_f64() - 1.0 / 24.0).abs() < 1e-15);
        assert!(r.residual.to_f64() < 1e-25);
    }

    #[test]
    fn exp_sum_residual_shrinks_with_precision() {
        for (s, a) in [(q(3, 1), q(1, 3)), (q(5, 2), q(7, 10))] {
            let r20 = apostol_check(&s, &a, Precision::new(20)).unwrap().residual.to_f64();
            let r30 = apostol_check(&s, &a, Precision::new(30)).unwrap().residual.to_f64();
            assert!(r20 < 1e-15 && r30 < 1e-25, "{r20} {r30}");
            assert!(r30 <= (r20 * 1e-8).max(1e-35), "{r20} {r30}");
        }
    }
}
