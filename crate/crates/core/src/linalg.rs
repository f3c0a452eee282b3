//! Dense exact linear algebra over the rationals and the integers.
//!
//! [`ExactMatrix`] stores reduced fractions row-major. Everything integer-valued
//! (Smith normal form, levels, lattice quotients) goes through
//! [`smith_normal_form`], which works on `BigInt` and picks the pivot of least
//! absolute value at every step to keep entries small. The hot enumeration
//! loops of the lattice module use [`level_i64`], a checked machine-word
//! version of the same elimination that falls back to the big-integer path on
//! overflow.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = BigRational;

    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigRational::one();
        }
        m
    }

    /// Builds a matrix from rational rows. All rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self { rows: nrows, cols: ncols, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::from_rows(
            rows.iter().map(|r| r.as_ref().iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect(),
        )
    }

    /// Matrix whose columns are the given integer vectors.
    pub fn from_i64_columns<C: AsRef<[i64]>>(cols: &[C]) -> Result<Self> {
        let nrows = cols.first().map_or(0, |c| c.as_ref().len());
        if cols.iter().any(|c| c.as_ref().len() != nrows) {
            return Err(Error::DimensionMismatch("columns of unequal length".into()));
        }
        let mut m = Self::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, &x) in c.as_ref().iter().enumerate() {
                m.entries[i * cols.len() + j] = BigRational::from_integer(x.into());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigRational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Sub-matrix made of the listed columns, in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                m.entries[i * cols.len() + k] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.entries[a * cols.len() + b] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        m.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|x| x * c).collect() }
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(BigRational::is_integer)
    }

    /// Integer entries, row-major, or `NonIntegral` naming the first offender.
    pub fn to_integer_rows(&self) -> Result<Vec<Vec<BigInt>>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let x = &self[(i, j)];
                        if x.is_integer() {
                            Ok(x.to_integer())
                        } else {
                            Err(Error::NonIntegral { row: i, col: j })
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>> {
        let big = self.to_integer_rows()?;
        big.into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|x| x.to_i64().ok_or_else(|| Error::InvalidArgument("entry exceeds i64".into())))
                    .collect()
            })
            .collect()
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        let (_, rank, _) = self.echelon();
        rank
    }

    pub fn det(&self) -> Result<BigRational> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let (_, rank, det) = self.echelon();
        Ok(if rank < self.rows { BigRational::zero() } else { det })
    }

    // Row echelon form by Gaussian elimination; returns (echelon, rank, product
    // of pivots with sign of the permutation) -- the last is the determinant
    // when the matrix is square and of full rank.
    fn echelon(&self) -> (Vec<Vec<BigRational>>, usize, BigRational) {
        let mut a: Vec<Vec<BigRational>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut rank = 0;
        let mut det = BigRational::one();
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&i| !a[i][col].is_zero()) else {
                continue;
            };
            if p != rank {
                a.swap(p, rank);
                det = -det;
            }
            let pivot = a[rank][col].clone();
            det *= &pivot;
            for i in rank + 1..self.rows {
                if a[i][col].is_zero() {
                    continue;
                }
                let f = &a[i][col] / &pivot;
                for j in col..self.cols {
                    let t = &f * &a[rank][j];
                    a[i][j] -= t;
                }
            }
            rank += 1;
        }
        (a, rank, det)
    }
}

/// Inverse of a square matrix by Gauss-Jordan elimination.
pub fn inverse(m: &ExactMatrix) -> Result<ExactMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    let n = m.rows;
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row = m.row(i).to_vec();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&i| !a[i][col].is_zero()).ok_or(Error::Singular)?;
        a.swap(p, col);
        let pivot = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x /= &pivot;
        }
        for i in 0..n {
            if i == col || a[i][col].is_zero() {
                continue;
            }
            let f = a[i][col].clone();
            for j in 0..2 * n {
                let t = &f * &a[col][j];
                a[i][j] -= t;
            }
        }
    }
    ExactMatrix::from_rows(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Smith normal form `u * m * v = diag(d)` of an integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    /// Invariant factors, `min(rows, cols)` of them; zeros trail.
    pub d: Vec<BigInt>,
    pub u: ExactMatrix,
    pub v: ExactMatrix,
}

impl SnfResult {
    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.d.iter().filter(|x| !x.is_zero()).count()
    }
}

type IntMat = Vec<Vec<BigInt>>;

fn int_identity(n: usize) -> IntMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

fn int_to_exact(a: &IntMat) -> ExactMatrix {
    ExactMatrix::from_rows(a.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect())
        .expect("rectangular")
}

pub fn smith_normal_form(m: &ExactMatrix) -> Result<SnfResult> {
    let mut a = m.to_integer_rows()?;
    let (rows, cols) = (m.rows, m.cols);
    let mut u = int_identity(rows);
    let mut v = int_identity(cols);

    // Row/column operations mirrored into u (rows) and v (columns).
    fn row_axpy(a: &mut IntMat, dst: usize, src: usize, q: &BigInt) {
        let (s, d) = if src < dst {
            let (lo, hi) = a.split_at_mut(dst);
            (&lo[src], &mut hi[0])
        } else {
            let (lo, hi) = a.split_at_mut(src);
            (&hi[0], &mut lo[dst])
        };
        for (x, y) in d.iter_mut().zip(s) {
            *x -= q * y;
        }
    }
    fn col_axpy(a: &mut IntMat, dst: usize, src: usize, q: &BigInt) {
        for row in a.iter_mut() {
            let t = q * &row[src];
            row[dst] -= t;
        }
    }
    fn col_swap(a: &mut IntMat, i: usize, j: usize) {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }

    let steps = rows.min(cols);
    for t in 0..steps {
        loop {
            // Smallest nonzero |entry| in the trailing block.
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                // Trailing block is zero: remaining factors are zero.
                return Ok(finish_snf(a, u, v, steps));
            };
            a.swap(t, pi);
            u.swap(t, pi);
            col_swap(&mut a, t, pj);
            col_swap(&mut v, t, pj);

            let mut clean = true;
            let pivot = a[t][t].clone();
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&pivot);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&pivot);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // Divisibility: fold an offending row into the pivot row and retry.
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a[i][j].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut a, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    Ok(finish_snf(a, u, v, steps))
}

fn finish_snf(a: IntMat, u: IntMat, v: IntMat, steps: usize) -> SnfResult {
    SnfResult { d: (0..steps).map(|i| a[i][i].clone()).collect(), u: int_to_exact(&u), v: int_to_exact(&v) }
}

/// Smallest `N > 0` with `N * a^{-1}` integral: the last invariant factor.
pub fn level(a: &ExactMatrix) -> Result<BigInt> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("level of a non-square matrix".into()));
    }
    let snf = smith_normal_form(a)?;
    if snf.rank() < a.rows {
        return Err(Error::Singular);
    }
    Ok(snf.d.last().cloned().unwrap_or_else(BigInt::one))
}

/// Exponent of `Z^n / span(gens)`.
pub fn lattice_quotient_exponent<G: AsRef<[i64]>>(gens: &[G], ambient_rank: usize) -> Result<BigInt> {
    if ambient_rank == 0 {
        return Ok(BigInt::one());
    }
    if gens.iter().any(|g| g.as_ref().len() != ambient_rank) {
        return Err(Error::DimensionMismatch("generator length differs from ambient rank".into()));
    }
    if gens.is_empty() {
        return Err(Error::NotFullRank { rank: 0, ambient: ambient_rank });
    }
    let m = ExactMatrix::from_i64_columns(gens)?;
    let snf = smith_normal_form(&m)?;
    let rank = snf.rank();
    if rank < ambient_rank {
        return Err(Error::NotFullRank { rank, ambient: ambient_rank });
    }
    Ok(snf.d[ambient_rank - 1].clone())
}

/// Invariant factors of a small integer matrix in machine words.
///
/// `a` is row-major `rows x cols` and is overwritten. Returns `None` if any
/// intermediate value overflows `i64`.
pub fn invariant_factors_i64(a: &mut [i64], rows: usize, cols: usize) -> Option<Vec<i64>> {
    debug_assert_eq!(a.len(), rows * cols);
    let steps = rows.min(cols);
    let at = |i: usize, j: usize| i * cols + j;
    for t in 0..steps {
        loop {
            let mut best: Option<(usize, usize)> = None;
            let mut best_abs = i64::MAX;
            for i in t..rows {
                for j in t..cols {
                    let x = a[at(i, j)];
                    if x != 0 && x.checked_abs()? < best_abs {
                        best_abs = x.abs();
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                let mut d: Vec<i64> = (0..t).map(|i| a[at(i, i)]).collect();
                d.resize(steps, 0);
                return Some(d);
            };
            if pi != t {
                for j in 0..cols {
                    a.swap(at(t, j), at(pi, j));
                }
            }
            if pj != t {
                for i in 0..rows {
                    a.swap(at(i, t), at(i, pj));
                }
            }
            let pivot = a[at(t, t)];
            let mut clean = true;
            for i in t + 1..rows {
                let x = a[at(i, t)];
                if x == 0 {
                    continue;
                }
                let q = x.div_euclid(pivot);
                for j in t..cols {
                    a[at(i, j)] = a[at(i, j)].checked_sub(q.checked_mul(a[at(t, j)])?)?;
                }
                clean &= a[at(i, t)] == 0;
            }
            for j in t + 1..cols {
                let x = a[at(t, j)];
                if x == 0 {
                    continue;
                }
                let q = x.div_euclid(pivot);
                for i in t..rows {
                    a[at(i, j)] = a[at(i, j)].checked_sub(q.checked_mul(a[at(i, t)])?)?;
                }
                clean &= a[at(t, j)] == 0;
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[at(i, j)] % pivot != 0));
            match offender {
                Some(i) => {
                    for j in t..cols {
                        a[at(t, j)] = a[at(t, j)].checked_add(a[at(i, j)])?;
                    }
                }
                None => break,
            }
        }
        a[at(t, t)] = a[at(t, t)].checked_abs()?;
    }
    Some((0..steps).map(|i| a[at(i, i)]).collect())
}

/// Level of a square integer matrix given as row-major machine words; `None`
/// if singular. Falls back to big integers on overflow.
pub fn level_i64(a: &[i64], n: usize) -> Option<BigInt> {
    let mut work = a.to_vec();
    match invariant_factors_i64(&mut work, n, n) {
        Some(d) => {
            if d.contains(&0) {
                None
            } else {
                Some(BigInt::from(*d.last().unwrap_or(&1)))
            }
        }
        None => {
            let rows: Vec<&[i64]> = a.chunks(n).collect();
            let m = ExactMatrix::from_i64_rows(&rows).ok()?;
            level(&m).ok()
        }
    }
}
