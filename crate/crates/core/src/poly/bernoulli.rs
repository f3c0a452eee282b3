use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::MultiPoly;

fn factorial_table() -> &'static Mutex<Vec<BigInt>> {
    static TABLE: OnceLock<Mutex<Vec<BigInt>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![BigInt::one()]))
}

/// `n!`, memoized.
pub fn factorial(n: usize) -> BigInt {
    let mut t = factorial_table().lock().expect("factorial table poisoned");
    while t.len() <= n {
        let k = t.len();
        let next = &t[k - 1] * BigInt::from(k);
        t.push(next);
    }
    t[n].clone()
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn bernoulli_table() -> &'static Mutex<Vec<BigRational>> {
    static TABLE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![BigRational::one()]))
}

/// Bernoulli number `B_k` with `B_1 = -1/2`.
pub fn bernoulli_number(k: usize) -> BigRational {
    let mut t = bernoulli_table().lock().expect("bernoulli table poisoned");
    // sum_{j=0}^{m} C(m+1, j) B_j = 0
    while t.len() <= k {
        let m = t.len();
        if m > 1 && m % 2 == 1 {
            t.push(BigRational::zero());
            continue;
        }
        let mut s = BigRational::zero();
        for (j, b) in t.iter().enumerate() {
            if !b.is_zero() {
                s += BigRational::from_integer(binomial(m + 1, j)) * b;
            }
        }
        t.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    t[k].clone()
}

/// `B_k(x) = sum_j C(k, j) B_j x^{k-j}` as a univariate polynomial.
pub fn bernoulli_polynomial(k: usize) -> MultiPoly {
    let coeffs: Vec<BigRational> = (0..=k)
        .map(|deg| {
            let j = k - deg;
            BigRational::from_integer(binomial(k, j)) * bernoulli_number(j)
        })
        .collect();
    MultiPoly::from_coeffs(&coeffs)
}

/// `zeta(-n, a) = -B_{n+1}(a) / (n+1)`.
pub fn hurwitz_neg_int(n: usize, a: &BigRational) -> BigRational {
    let b = bernoulli_polynomial(n + 1).eval(std::slice::from_ref(a));
    -b / BigRational::from_integer(BigInt::from(n + 1))
}

/// Riemann `zeta(-k)`, i.e. `zeta(-k, 1)`.
pub fn zeta_neg_int(k: usize) -> BigRational {
    hurwitz_neg_int(k, &BigRational::one())
}
