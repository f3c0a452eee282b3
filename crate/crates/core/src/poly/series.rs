use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::MultiPoly;
use crate::error::{Error, Result};

/// Truncated power series `plain(x) + log_part(x) * L`, where `L` stands
/// for the opaque constant `log f(0)` of the series it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogSeries {
    pub order: usize,
    pub plain: Vec<BigRational>,
    pub log_part: Vec<BigRational>,
}

impl LogSeries {
    /// Coefficient of `x^k` as `(plain, log_part)`; zero beyond the order.
    pub fn coeff(&self, k: usize) -> (BigRational, BigRational) {
        let get = |v: &[BigRational]| v.get(k).cloned().unwrap_or_else(BigRational::zero);
        (get(&self.plain), get(&self.log_part))
    }

    /// Product with a univariate polynomial, truncated to the same order.
    pub fn mul_poly(&self, p: &MultiPoly) -> LogSeries {
        let c = p.univariate_coeffs();
        let trunc = |s: &[BigRational]| -> Vec<BigRational> {
            (0..=self.order)
                .map(|k| {
                    let mut acc = BigRational::zero();
                    for (i, ci) in c.iter().enumerate().take(k + 1) {
                        if !ci.is_zero() {
                            acc += ci * &s[k - i];
                        }
                    }
                    acc
                })
                .collect()
        };
        LogSeries { order: self.order, plain: trunc(&self.plain), log_part: trunc(&self.log_part) }
    }
}

/// `log f` to order `order` for a univariate polynomial with `f(0) > 0`.
///
/// Writing `f = f(0) (1 + h)`, `log f = L + log(1 + h)` with `L = log f(0)`;
/// the second part comes from integrating `f'/f`. When `f(0) = 1`, `L = 0`
/// and `log_part` is the zero series.
pub fn log_series(f: &MultiPoly, order: usize) -> Result<LogSeries> {
    let c = f.univariate_coeffs();
    let c0 = c.first().cloned().unwrap_or_else(BigRational::zero);
    if !c0.is_positive() {
        return Err(Error::NonPositiveConstantTerm);
    }
    let coeff = |k: usize| c.get(k).cloned().unwrap_or_else(BigRational::zero);
    // q = f'/f, so f q = f'.
    let mut q: Vec<BigRational> = Vec::with_capacity(order);
    for k in 0..order {
        let mut rhs = coeff(k + 1) * BigRational::from_integer((k + 1).into());
        for i in 1..=k {
            let ci = coeff(i);
            if !ci.is_zero() {
                rhs -= ci * &q[k - i];
            }
        }
        q.push(rhs / &c0);
    }
    let mut plain = vec![BigRational::zero(); order + 1];
    for k in 1..=order {
        plain[k] = &q[k - 1] / BigRational::from_integer(k.into());
    }
    let mut log_part = vec![BigRational::zero(); order + 1];
    if !c0.is_one() {
        log_part[0] = BigRational::one();
    }
    Ok(LogSeries { order, plain, log_part })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn log_one_plus_x() {
        let s = log_series(&MultiPoly::from_coeffs(&[q(1, 1), q(1, 1)]), 3).unwrap();
        assert_eq!(s.plain, vec![q(0, 1), q(1, 1), q(-1, 2), q(1, 3)]);
        assert!(s.log_part.iter().all(Zero::is_zero));
    }

    #[test]
    fn log_two_plus_three_x() {
        let s = log_series(&MultiPoly::from_coeffs(&[q(2, 1), q(3, 1)]), 1).unwrap();
        assert_eq!(s.plain, vec![q(0, 1), q(3, 2)]);
        assert_eq!(s.log_part, vec![q(1, 1), q(0, 1)]);
    }

    #[test]
    fn non_positive_constant() {
        let f = MultiPoly::from_coeffs(&[q(0, 1), q(1, 1)]);
        assert_eq!(log_series(&f, 3), Err(Error::NonPositiveConstantTerm));
        let f = MultiPoly::from_coeffs(&[q(-1, 1), q(1, 1)]);
        assert_eq!(log_series(&f, 3), Err(Error::NonPositiveConstantTerm));
    }

    // exp of the plain part, by the recurrence e' = e * l', must give f / f(0).
    fn exp_series(l: &[BigRational]) -> Vec<BigRational> {
        let n = l.len();
        let mut e = vec![BigRational::zero(); n];
        e[0] = BigRational::one();
        for k in 1..n {
            let mut acc = BigRational::zero();
            for j in 1..=k {
                acc += BigRational::from_integer(j.into()) * &l[j] * &e[k - j];
            }
            e[k] = acc / BigRational::from_integer(k.into());
        }
        e
    }

    #[test]
    fn exp_inverts_log() {
        // f_G = (1+x)(1+2x)(1+3x)(2+3x)
        let lin = |a: i64, b: i64| MultiPoly::from_coeffs(&[q(a, 1), q(b, 1)]);
        let f = &(&(&lin(1, 1) * &lin(1, 2)) * &lin(1, 3)) * &lin(2, 3);
        let order = 12;
        let s = log_series(&f, order).unwrap();
        let e = exp_series(&s.plain);
        let c = f.univariate_coeffs();
        for k in 0..=order {
            let want = c.get(k).cloned().unwrap_or_else(BigRational::zero) / &c[0];
            assert_eq!(e[k], want, "k={k}");
        }
    }

    #[test]
    fn fb_squared_log_coefficient_is_rational() {
        // [f_B^2 log f_B][x^5] with f_B = (1+x)(1+2x); oracle: multiply the
        // explicit expansion log(1+x) + log(1+2x) by f_B^2.
        let f = MultiPoly::from_coeffs(&[q(1, 1), q(3, 1), q(2, 1)]);
        let s = log_series(&f, 5).unwrap().mul_poly(&f.pow(2));
        let logs: Vec<BigRational> = (0..=5)
            .map(|k| {
                if k == 0 {
                    return q(0, 1);
                }
                let sign = if k % 2 == 1 { 1 } else { -1 };
                q(sign, k as i64) * (q(1, 1) + q(1i64 << k, 1))
            })
            .collect();
        let f2 = f.pow(2).univariate_coeffs();
        let want: BigRational = (0..=5).filter(|&i| i < f2.len()).map(|i| &f2[i] * &logs[5 - i]).sum();
        let (plain, lam) = s.coeff(5);
        assert_eq!(plain, want);
        assert!(lam.is_zero());
    }
}
