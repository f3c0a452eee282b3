//! Thin value-semantic wrappers over `astro_float::BigFloat`.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_cc<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Arbitrary-precision real. Binary operations run at the larger of the two
/// operand precisions.
#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    bits: usize,
}

impl Real {
    fn wrap(v: BigFloat, bits: usize) -> Self {
        debug_assert!(!v.is_nan(), "NaN in arbitrary-precision arithmetic");
        Self { v, bits }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn with_bits(&self, bits: usize) -> Self {
        let mut v = self.v.clone();
        v.set_precision(bits, RM).expect("precision change");
        Self { v, bits }
    }

    pub fn zero(bits: usize) -> Self {
        Self::from_i64(0, bits)
    }

    pub fn one(bits: usize) -> Self {
        Self::from_i64(1, bits)
    }

    pub fn from_i64(x: i64, bits: usize) -> Self {
        Self::wrap(BigFloat::from_i64(x, bits), bits)
    }

    pub fn from_f64(x: f64, bits: usize) -> Self {
        Self::wrap(BigFloat::from_f64(x, bits), bits)
    }

    pub fn from_bigint(x: &BigInt, bits: usize) -> Self {
        let v = with_cc(|cc| BigFloat::parse(&x.to_string(), Radix::Dec, bits, RM, cc));
        Self::wrap(v, bits)
    }

    pub fn from_rational(x: &BigRational, bits: usize) -> Self {
        Self::from_bigint(x.numer(), bits) / Self::from_bigint(x.denom(), bits)
    }

    pub fn pi(bits: usize) -> Self {
        Self::wrap(with_cc(|cc| cc.pi(bits, RM)), bits)
    }

    pub fn ln2(bits: usize) -> Self {
        Self::wrap(with_cc(|cc| cc.ln_2(bits, RM)), bits)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.v.sign() == Some(Sign::Neg)
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.v.abs(), self.bits)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.v.sqrt(self.bits, RM), self.bits)
    }

    pub fn exp(&self) -> Self {
        Self::wrap(with_cc(|cc| self.v.exp(self.bits, RM, cc)), self.bits)
    }

    pub fn ln(&self) -> Self {
        Self::wrap(with_cc(|cc| self.v.ln(self.bits, RM, cc)), self.bits)
    }

    pub fn sin(&self) -> Self {
        Self::wrap(with_cc(|cc| self.v.sin(self.bits, RM, cc)), self.bits)
    }

    pub fn cos(&self) -> Self {
        Self::wrap(with_cc(|cc| self.v.cos(self.bits, RM, cc)), self.bits)
    }

    pub fn atan(&self) -> Self {
        Self::wrap(with_cc(|cc| self.v.atan(self.bits, RM, cc)), self.bits)
    }

    pub fn powi(&self, n: usize) -> Self {
        Self::wrap(self.v.powi(n, self.bits, RM), self.bits)
    }

    /// `self^e` for positive `self`.
    pub fn pow(&self, e: &Real) -> Self {
        (e * &self.ln()).exp()
    }

    pub fn floor(&self) -> Self {
        Self::wrap(self.v.floor(), self.bits)
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Exact binary value as a rational.
    pub fn to_rational(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let (words, _, sign, exp, _) = self.v.as_raw_parts().expect("finite value");
        let mut bytes = Vec::with_capacity(words.len() * 8);
        for w in words {
            bytes.extend_from_slice(&w.to_le_bytes());
        }
        let mant = BigInt::from_bytes_le(BigSign::Plus, &bytes);
        // value = 0.m * 2^exp with m spanning all mantissa words
        let shift = i64::from(exp) - 64 * words.len() as i64;
        let mut r = BigRational::from_integer(mant);
        let two = BigInt::from(2);
        if shift >= 0 {
            r *= BigRational::from_integer(two.pow(shift as u32));
        } else {
            r /= BigRational::from_integer(two.pow((-shift) as u32));
        }
        if sign == Sign::Neg {
            -r
        } else {
            r
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        // Keep only ~64 significant bits before converting.
        self.with_bits(128).to_rational().to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal scientific notation with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        format_decimal(&self.to_rational(), digits)
    }
}

/// Rounds a rational to `digits` significant decimal digits, as `d.ddd…e±x`.
pub fn format_decimal(x: &BigRational, digits: usize) -> String {
    let digits = digits.max(1);
    if x.is_zero() {
        return format!("0.{}e0", "0".repeat(digits - 1));
    }
    let neg = x.is_negative();
    let a = x.abs();
    let ten = BigInt::from(10);
    let est = a.to_f64().map(|f| f.log10().floor() as i64).filter(|_| true);
    let mut e10 = est.unwrap_or(0);
    let scaled = |e: i64| -> BigInt {
        let k = digits as i64 - 1 - e;
        let v = if k >= 0 {
            &a * BigRational::from_integer(ten.pow(k as u32))
        } else {
            &a / BigRational::from_integer(ten.pow((-k) as u32))
        };
        (v + BigRational::new(1.into(), 2.into())).floor().to_integer()
    };
    let lo = ten.pow(digits as u32 - 1);
    let hi = ten.pow(digits as u32);
    let mut m = scaled(e10);
    for _ in 0..4 {
        if m >= hi {
            e10 += 1;
        } else if m < lo {
            e10 -= 1;
        } else {
            break;
        }
        m = scaled(e10);
    }
    let s = m.to_string();
    let body = if digits == 1 { s.clone() } else { format!("{}.{}", &s[..1], &s[1..]) };
    format!("{}{}e{}", if neg { "-" } else { "" }, body, e10)
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(((self.bits as f64) * std::f64::consts::LOG10_2) as usize))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                let bits = self.bits.max(rhs.bits);
                Real::wrap(self.v.$m(&rhs.v, bits, RM), bits)
            }
        }
        impl $tr<Real> for Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Real> for Real {
            type Output = Real;
            fn $m(self, rhs: &Real) -> Real {
                (&self).$m(rhs)
            }
        }
        impl $tr<Real> for &Real {
            type Output = Real;
            fn $m(self, rhs: Real) -> Real {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real::wrap(BigFloat::neg(&self.v), self.bits)
    }
}

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        -&self
    }
}

/// Complex number with [`Real`] parts.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Self { re, im }
    }

    pub fn real(re: Real) -> Self {
        let bits = re.bits();
        Self { re, im: Real::zero(bits) }
    }

    pub fn zero(bits: usize) -> Self {
        Self::real(Real::zero(bits))
    }

    pub fn bits(&self) -> usize {
        self.re.bits().max(self.im.bits())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    pub fn scale(&self, k: &Real) -> Self {
        Self::new(&self.re * k, &self.im * k)
    }

    pub fn norm(&self) -> Real {
        (&self.re * &self.re + &self.im * &self.im).sqrt()
    }

    /// `e^{i theta}`.
    pub fn cis(theta: &Real) -> Self {
        Self::new(theta.cos(), theta.sin())
    }

    pub fn exp(&self) -> Self {
        let r = self.re.exp();
        if self.is_real() {
            return Self::real(r);
        }
        Self::cis(&self.im).scale(&r)
    }

    /// `x^{-s}` for real `x > 0`.
    pub fn pow_neg(x: &Real, s: &Complex) -> Self {
        if s.is_real() {
            let f = s.re.to_f64();
            if f.fract() == 0.0 && f.abs() <= 64.0 && s.re == Real::from_f64(f, s.re.bits()) {
                let p = x.powi(f.abs() as usize);
                return Self::real(if f > 0.0 { Real::one(x.bits()) / p } else { p });
            }
        }
        let l = x.ln();
        let mag = (-(&s.re * &l)).exp();
        if s.is_real() {
            return Self::real(mag);
        }
        Self::cis(&-(&s.im * &l)).scale(&mag)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl Add<&Complex> for &Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&Complex> for &Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&Complex> for &Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        if rhs.is_real() {
            return self.scale(&rhs.re);
        }
        if self.is_real() {
            return rhs.scale(&self.re);
        }
        Complex::new(&self.re * &rhs.re - &self.im * &rhs.im, &self.re * &rhs.im + &self.im * &rhs.re)
    }
}

impl Div<&Complex> for &Complex {
    type Output = Complex;
    fn div(self, rhs: &Complex) -> Complex {
        let d = &rhs.re * &rhs.re + &rhs.im * &rhs.im;
        let n = self * &rhs.conj();
        Complex::new(&n.re / &d, &n.im / &d)
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-&self.re, -&self.im)
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, rhs: Complex) -> Complex {
        &self + &rhs
    }
}

impl Sub for Complex {
    type Output = Complex;
    fn sub(self, rhs: Complex) -> Complex {
        &self - &rhs
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, rhs: Complex) -> Complex {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exact_round_trip() {
        for x in [q(3, 1), q(-5, 8), q(1, 1024), q(123456789, 1)] {
            assert_eq!(Real::from_rational(&x, 128).to_rational(), x);
        }
        let third = Real::from_rational(&q(1, 3), 200).to_rational();
        assert!((third - q(1, 3)).abs() < q(1, 1) / BigRational::from_integer(BigInt::from(2).pow(190)));
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(format_decimal(&q(1, 3), 5), "3.3333e-1");
        assert_eq!(format_decimal(&q(-2, 3), 3), "-6.67e-1");
        assert_eq!(format_decimal(&q(99999, 1000), 3), "1.00e2");
        assert_eq!(format_decimal(&q(0, 1), 3), "0.00e0");
        let pi = Real::pi(200).to_decimal(31);
        assert_eq!(pi, "3.141592653589793238462643383280e0");
    }

    #[test]
    fn elementary() {
        let b = 200;
        let x = Real::from_rational(&q(7, 5), b);
        let back = x.ln().exp();
        assert!((&back - &x).abs().to_f64() < 1e-55);
        let s = x.sin();
        let c = x.cos();
        assert!((&s * &s + &c * &c - Real::one(b)).abs().to_f64() < 1e-55);
        assert!((Real::from_f64(2.0, b).pow(&Real::from_f64(0.5, b)).to_f64() - 2f64.sqrt()).abs() < 1e-15);
        let z = Complex::new(Real::from_f64(0.3, b), Real::from_f64(-1.2, b));
        let w = &(&z * &z) / &z;
        assert!((&w - &z).norm().to_f64() < 1e-55);
    }
}
