//! Rational simplices and the band triangulation of the unit cube.
//!
//! [`band_triangulate`] cuts `[0,1]^d` by every hyperplane `l(x) = N`
//! (`l` one of the given integer linear forms, `N` an integer) that meets the
//! open cube, then triangulates each convex cell by pulling from its
//! lexicographically least vertex. On every resulting simplex each form stays
//! inside a single band `[N, N+1]`.
//!
//! Cells are handled as H-polytopes with integer constraints `a.x <= b`;
//! vertices are found by solving every `d`-subset of constraints with Cramer's
//! rule in `i128`, so the slicing itself never touches big rationals.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::par::Exec;
use crate::poly::factorial;

/// A `d`-simplex with rational vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex {
    vertices: Vec<Vec<BigRational>>,
    distinguished: Option<usize>,
}

impl Simplex {
    /// `d + 1` points of dimension `d`. Degenerate simplices are allowed here
    /// (their volume is zero); operations that need a proper simplex check.
    pub fn new(vertices: Vec<Vec<BigRational>>) -> Result<Self> {
        let d = vertices.len().checked_sub(1).ok_or_else(|| Error::DimensionMismatch("empty simplex".into()))?;
        if vertices.iter().any(|v| v.len() != d) {
            return Err(Error::DimensionMismatch(format!("a {d}-simplex needs points of dimension {d}")));
        }
        Ok(Self { vertices, distinguished: None })
    }

    pub fn standard(d: usize) -> Self {
        let mut vertices = vec![vec![BigRational::zero(); d]];
        for i in 0..d {
            let mut v = vec![BigRational::zero(); d];
            v[i] = BigRational::one();
            vertices.push(v);
        }
        Self { vertices, distinguished: None }
    }

    pub fn with_distinguished(mut self, idx: usize) -> Self {
        assert!(idx < self.vertices.len());
        self.distinguished = Some(idx);
        self
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn vertices(&self) -> &[Vec<BigRational>] {
        &self.vertices
    }

    pub fn distinguished(&self) -> Option<&[BigRational]> {
        self.distinguished.map(|i| self.vertices[i].as_slice())
    }

    /// Determinant of the edge matrix `[v_1 - v_0, ..., v_d - v_0]`.
    pub fn edge_determinant(&self) -> BigRational {
        let d = self.dim();
        let mut a: Vec<Vec<BigRational>> =
            (1..=d).map(|k| (0..d).map(|i| &self.vertices[k][i] - &self.vertices[0][i]).collect()).collect();
        let mut det = BigRational::one();
        for col in 0..d {
            let Some(p) = (col..d).find(|&i| !a[i][col].is_zero()) else {
                return BigRational::zero();
            };
            if p != col {
                a.swap(p, col);
                det = -det;
            }
            let pivot = a[col][col].clone();
            det *= &pivot;
            for i in col + 1..d {
                if a[i][col].is_zero() {
                    continue;
                }
                let f = &a[i][col] / &pivot;
                for j in col..d {
                    let t = &f * &a[col][j];
                    a[i][j] -= t;
                }
            }
        }
        det
    }

    pub fn centroid(&self) -> Vec<BigRational> {
        let d = self.dim();
        let n = BigRational::from_integer(BigInt::from(d + 1));
        (0..d).map(|i| self.vertices.iter().map(|v| &v[i]).sum::<BigRational>() / &n).collect()
    }

    /// Barycentric coordinates of `p`; `None` if degenerate.
    pub fn barycentric(&self, p: &[BigRational]) -> Option<Vec<BigRational>> {
        let d = self.dim();
        // Solve E lambda = p - v0 by Gauss-Jordan.
        let mut a: Vec<Vec<BigRational>> = (0..d)
            .map(|i| {
                let mut row: Vec<BigRational> = (1..=d).map(|k| &self.vertices[k][i] - &self.vertices[0][i]).collect();
                row.push(&p[i] - &self.vertices[0][i]);
                row
            })
            .collect();
        for col in 0..d {
            let piv = (col..d).find(|&i| !a[i][col].is_zero())?;
            a.swap(piv, col);
            let pv = a[col][col].clone();
            for x in a[col].iter_mut() {
                *x /= &pv;
            }
            for i in 0..d {
                if i != col && !a[i][col].is_zero() {
                    let f = a[i][col].clone();
                    for j in col..=d {
                        let t = &f * &a[col][j];
                        a[i][j] -= t;
                    }
                }
            }
        }
        let rest: Vec<BigRational> = a.into_iter().map(|r| r[d].clone()).collect();
        let first = BigRational::one() - rest.iter().sum::<BigRational>();
        Some(std::iter::once(first).chain(rest).collect())
    }

    /// Closed-simplex membership.
    pub fn contains(&self, p: &[BigRational]) -> bool {
        self.barycentric(p).is_some_and(|b| b.iter().all(|x| !x.is_negative()))
    }

    /// Interior membership: all barycentric coordinates strictly positive.
    pub fn contains_interior(&self, p: &[BigRational]) -> bool {
        self.barycentric(p).is_some_and(|b| b.iter().all(Signed::is_positive))
    }
}

/// `|det(edge matrix)| / d!`.
pub fn volume(s: &Simplex) -> BigRational {
    s.edge_determinant().abs() / BigRational::from_integer(factorial(s.dim()))
}

/// The `(d+1)!` simplices of the barycentric subdivision. Each one keeps the
/// single original vertex it contains as its distinguished vertex.
pub fn barycentric_subdivide(s: &Simplex) -> Result<Vec<Simplex>> {
    if s.edge_determinant().is_zero() {
        return Err(Error::DegenerateSimplex);
    }
    let d = s.dim();
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..=d).collect();
    permutations(&mut perm, 0, &mut |p| {
        let mut verts = Vec::with_capacity(d + 1);
        let mut sum = vec![BigRational::zero(); d];
        for (k, &idx) in p.iter().enumerate() {
            for (acc, x) in sum.iter_mut().zip(&s.vertices[idx]) {
                *acc += x;
            }
            let n = BigRational::from_integer(BigInt::from(k + 1));
            verts.push(sum.iter().map(|x| x / &n).collect());
        }
        out.push(Simplex { vertices: verts, distinguished: Some(0) });
    });
    Ok(out)
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

/// A simplex on which every form `l_i` satisfies `bands[i] <= l_i <= bands[i] + 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BandedCell {
    pub bands: Vec<i64>,
    pub simplex: Simplex,
}

#[derive(Debug, Clone)]
pub struct Triangulation {
    pub dim: usize,
    pub forms: Vec<Vec<i64>>,
    pub cells: Vec<BandedCell>,
    /// Number of convex band regions before triangulation.
    pub polytopes: usize,
    /// Every denominator occurring in a vertex coordinate.
    pub denominators: BTreeSet<u64>,
    /// Whether each denominator divides some element of the expected set
    /// (only when one was supplied).
    pub denominator_bound_holds: Option<bool>,
}

impl Triangulation {
    pub fn total_volume(&self) -> BigRational {
        self.cells.iter().map(|c| volume(&c.simplex)).sum()
    }

    /// Total volume per band signature.
    pub fn regions(&self) -> BTreeMap<Vec<i64>, BigRational> {
        let mut m: BTreeMap<Vec<i64>, BigRational> = BTreeMap::new();
        for c in &self.cells {
            *m.entry(c.bands.clone()).or_insert_with(BigRational::zero) += volume(&c.simplex);
        }
        m
    }

    /// lcm of all vertex-coordinate denominators.
    pub fn denominator_lcm(&self) -> u64 {
        self.denominators.iter().fold(1u64, |acc, &d| acc.lcm(&d))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Constraint {
    a: Vec<i64>,
    b: i64,
}

// Point `num / den` with den > 0 and gcd(num..., den) = 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Point {
    num: Vec<i64>,
    den: i64,
}

impl Point {
    fn new(num: Vec<i128>, den: i128) -> Option<Self> {
        let (mut num, mut den) = (num, den);
        if den < 0 {
            den = -den;
            num.iter_mut().for_each(|x| *x = -*x);
        }
        let g = num.iter().fold(den, |g, &x| g.gcd(&x));
        let num = num.into_iter().map(|x| i64::try_from(x / g).ok()).collect::<Option<Vec<_>>>()?;
        Some(Self { num, den: i64::try_from(den / g).ok()? })
    }

    fn eval(&self, a: &[i64]) -> i128 {
        a.iter().zip(&self.num).map(|(&x, &y)| i128::from(x) * i128::from(y)).sum()
    }

    fn satisfies(&self, c: &Constraint) -> bool {
        self.eval(&c.a) <= i128::from(c.b) * i128::from(self.den)
    }

    fn is_tight(&self, c: &Constraint) -> bool {
        self.eval(&c.a) == i128::from(c.b) * i128::from(self.den)
    }

    fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        for (x, y) in self.num.iter().zip(&other.num) {
            let o = (i128::from(*x) * i128::from(other.den)).cmp(&(i128::from(*y) * i128::from(self.den)));
            if o.is_ne() {
                return o;
            }
        }
        std::cmp::Ordering::Equal
    }

    fn to_rational(&self) -> Vec<BigRational> {
        self.num.iter().map(|&x| BigRational::new(x.into(), self.den.into())).collect()
    }
}

fn det_i128(m: &mut [Vec<i128>]) -> i128 {
    // Bareiss fraction-free elimination.
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else {
                return 0;
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn rank_i128(rows: &[Vec<i128>]) -> usize {
    let mut a = rows.to_vec();
    let ncols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..a.len()).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..a.len() {
            if a[i][col] == 0 {
                continue;
            }
            let (x, y) = (a[rank][col], a[i][col]);
            let g = x.gcd(&y);
            let (fx, fy) = (y / g, x / g);
            for j in col..ncols {
                a[i][j] = a[i][j] * fy - a[rank][j] * fx;
            }
            let g = a[i].iter().fold(0i128, |g, &v| g.gcd(&v));
            if g > 1 {
                a[i].iter_mut().for_each(|v| *v /= g);
            }
        }
        rank += 1;
    }
    rank
}

fn affine_rank(points: &[&Point]) -> usize {
    if points.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<i128>> = points
        .iter()
        .map(|p| p.num.iter().map(|&x| i128::from(x)).chain(std::iter::once(i128::from(p.den))).collect())
        .collect();
    rank_i128(&rows) - 1
}

fn combinations(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..=n - (k - cur.len()) {
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    if k <= n {
        rec(0, n, k, &mut Vec::with_capacity(k), f);
    }
}

#[derive(Debug, Clone)]
struct Cell {
    constraints: Vec<Constraint>,
    vertices: Vec<Point>,
}

impl Cell {
    fn cube(d: usize) -> Self {
        let mut constraints = Vec::with_capacity(2 * d);
        for j in 0..d {
            let mut a = vec![0; d];
            a[j] = -1;
            constraints.push(Constraint { a: a.clone(), b: 0 });
            a[j] = 1;
            constraints.push(Constraint { a, b: 1 });
        }
        let vertices = (0..1u64 << d)
            .map(|mask| Point { num: (0..d).map(|j| ((mask >> j) & 1) as i64).collect(), den: 1 })
            .collect();
        Cell { constraints, vertices }
    }

    fn enumerate_vertices(constraints: &[Constraint], d: usize) -> Result<Vec<Point>> {
        let mut verts: BTreeSet<Point> = BTreeSet::new();
        let mut overflow = false;
        combinations(constraints.len(), d, &mut |idx| {
            let a: Vec<Vec<i128>> =
                idx.iter().map(|&i| constraints[i].a.iter().map(|&x| i128::from(x)).collect()).collect();
            let det = det_i128(&mut a.clone());
            if det == 0 {
                return;
            }
            let num: Vec<i128> = (0..d)
                .map(|col| {
                    let mut m = a.clone();
                    for (r, &i) in idx.iter().enumerate() {
                        m[r][col] = i128::from(constraints[i].b);
                    }
                    det_i128(&mut m)
                })
                .collect();
            match Point::new(num, det) {
                Some(p) => {
                    if constraints.iter().all(|c| p.satisfies(c)) {
                        verts.insert(p);
                    }
                }
                None => overflow = true,
            }
        });
        if overflow {
            return Err(Error::InvalidArgument("vertex coordinates overflow i64".into()));
        }
        Ok(verts.into_iter().collect())
    }

    // Range of the form over the cell as exact fractions (min, max).
    fn range(&self, form: &[i64]) -> (BigRational, BigRational) {
        let vals = self.vertices.iter().map(|p| BigRational::new(p.eval(form).into(), p.den.into()));
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        for v in vals {
            if lo.as_ref().is_none_or(|l| v < *l) {
                lo = Some(v.clone());
            }
            if hi.as_ref().is_none_or(|h| v > *h) {
                hi = Some(v);
            }
        }
        (lo.unwrap_or_else(BigRational::zero), hi.unwrap_or_else(BigRational::zero))
    }

    fn split(self, form: &[i64], d: usize) -> Result<Vec<Cell>> {
        let (lo, hi) = self.range(form);
        let first = lo.floor().to_integer() + BigInt::one();
        let mut out = Vec::new();
        let mut rest = self;
        let mut n = first;
        while BigRational::from_integer(n.clone()) < hi {
            let cut = n.to_i64().ok_or_else(|| Error::InvalidArgument("cut offset overflow".into()))?;
            let mut below = rest.constraints.clone();
            below.push(Constraint { a: form.to_vec(), b: cut });
            let mut above = rest.constraints;
            above.push(Constraint { a: form.iter().map(|x| -x).collect(), b: -cut });
            let below_vertices = Self::enumerate_vertices(&below, d)?;
            out.push(Cell { constraints: below, vertices: below_vertices });
            let above_vertices = Self::enumerate_vertices(&above, d)?;
            rest = Cell { constraints: above, vertices: above_vertices };
            n += 1;
        }
        out.push(rest);
        Ok(out)
    }

    /// Pulling triangulation; simplices as vertex index lists.
    fn triangulate(&self, d: usize) -> Vec<Vec<usize>> {
        let tight: Vec<Vec<bool>> =
            self.vertices.iter().map(|p| self.constraints.iter().map(|c| p.is_tight(c)).collect()).collect();
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let mut out = Vec::new();
        self.pull(&all, d, &tight, &mut out);
        out
    }

    fn pull(&self, face: &[usize], dim: usize, tight: &[Vec<bool>], out: &mut Vec<Vec<usize>>) {
        if face.len() == dim + 1 {
            out.push(face.to_vec());
            return;
        }
        let apex = *face.iter().min_by(|&&a, &&b| self.vertices[a].lex_cmp(&self.vertices[b])).expect("nonempty face");
        let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
        for c in 0..self.constraints.len() {
            let sub: Vec<usize> = face.iter().copied().filter(|&v| tight[v][c]).collect();
            if sub.len() < dim || sub.len() == face.len() || sub.contains(&apex) {
                continue;
            }
            if facets.contains(&sub) {
                continue;
            }
            let pts: Vec<&Point> = sub.iter().map(|&v| &self.vertices[v]).collect();
            if affine_rank(&pts) == dim - 1 {
                facets.insert(sub);
            }
        }
        for f in facets {
            let mut sub = Vec::new();
            self.pull(&f, dim - 1, tight, &mut sub);
            for mut s in sub {
                s.insert(0, apex);
                out.push(s);
            }
        }
    }
}

/// Triangulates `[0,1]^dim` so that every form stays in one integer band on
/// every simplex. `forms` lists coefficient vectors; the unit vectors
/// `e_1..e_dim` must all be among them.
pub fn band_triangulate(
    forms: &[Vec<i64>],
    dim: usize,
    expected_denoms: Option<&BTreeSet<u64>>,
) -> Result<Triangulation> {
    band_triangulate_with(forms, dim, expected_denoms, Exec::default())
}

pub fn band_triangulate_with(
    forms: &[Vec<i64>],
    dim: usize,
    expected_denoms: Option<&BTreeSet<u64>>,
    exec: Exec,
) -> Result<Triangulation> {
    if forms.iter().any(|f| f.len() != dim) {
        return Err(Error::DimensionMismatch("form length differs from dimension".into()));
    }
    let is_unit = |f: &Vec<i64>, j: usize| f.iter().enumerate().all(|(i, &x)| x == i64::from(i == j));
    if dim == 0 || !(0..dim).all(|j| forms.iter().any(|f| is_unit(f, j))) {
        return Err(Error::NoIdentityBlock);
    }

    let mut cells = vec![Cell::cube(dim)];
    for form in forms {
        let mut next = Vec::with_capacity(cells.len());
        for c in cells {
            next.extend(c.split(form, dim)?);
        }
        cells = next;
    }
    let polytopes = cells.len();

    let per_cell: Vec<Result<Vec<BandedCell>>> = exec.map(cells, |cell| {
        let centroid_bands = band_signature(&cell, forms);
        cell.triangulate(dim)
            .into_iter()
            .map(|idx| {
                let pts: Vec<&Point> = idx.iter().map(|&i| &cell.vertices[i]).collect();
                // Band membership is checked at the vertices; forms are linear.
                for (f, &n) in forms.iter().zip(&centroid_bands) {
                    for p in &pts {
                        let v = p.eval(f);
                        let den = i128::from(p.den);
                        if v < i128::from(n) * den || v > i128::from(n + 1) * den {
                            return Err(Error::InvalidArgument("band check failed".into()));
                        }
                    }
                }
                let simplex = Simplex::new(pts.iter().map(|p| p.to_rational()).collect())?;
                Ok(BandedCell { bands: centroid_bands.clone(), simplex })
            })
            .collect()
    });
    let mut out = Vec::new();
    for r in per_cell {
        out.extend(r?);
    }
    out.sort();

    let mut denominators = BTreeSet::new();
    for c in &out {
        for v in c.simplex.vertices() {
            for x in v {
                denominators.insert(x.denom().to_u64().expect("small denominator"));
            }
        }
    }
    let denominator_bound_holds = expected_denoms.map(|e| denominators.iter().all(|d| e.iter().any(|x| x % d == 0)));
    Ok(Triangulation { dim, forms: forms.to_vec(), cells: out, polytopes, denominators, denominator_bound_holds })
}

fn band_signature(cell: &Cell, forms: &[Vec<i64>]) -> Vec<i64> {
    let n = cell.vertices.len() as i128;
    forms
        .iter()
        .map(|f| {
            // floor of the form at the vertex average
            let (num, den) = cell.vertices.iter().fold((0i128, 1i128), |(acc_n, acc_d), p| {
                let (vn, vd) = (p.eval(f), i128::from(p.den));
                let l = acc_d.lcm(&vd);
                (acc_n * (l / acc_d) + vn * (l / vd), l)
            });
            let v = BigRational::new(num.into(), (den * n).into());
            v.floor().to_integer().to_i64().expect("band fits i64")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn unit_forms(d: usize) -> Vec<Vec<i64>> {
        (0..d).map(|j| (0..d).map(|i| i64::from(i == j)).collect()).collect()
    }

    #[test]
    fn volumes() {
        assert_eq!(volume(&Simplex::standard(3)), q(1, 6));
        let s = Simplex::new(vec![vec![q(0, 1), q(0, 1)], vec![q(1, 1), q(0, 1)], vec![q(0, 1), q(1, 2)]]).unwrap();
        assert_eq!(volume(&s), q(1, 4));
        let flat = Simplex::new(vec![vec![q(0, 1), q(0, 1)], vec![q(1, 1), q(1, 1)], vec![q(2, 1), q(2, 1)]]).unwrap();
        assert_eq!(volume(&flat), q(0, 1));
        assert_eq!(barycentric_subdivide(&flat), Err(Error::DegenerateSimplex));
    }

    #[test]
    fn subdivide_interval_and_triangle() {
        let seg = Simplex::new(vec![vec![q(0, 1)], vec![q(1, 1)]]).unwrap();
        let mut parts: Vec<Vec<Vec<BigRational>>> = barycentric_subdivide(&seg)
            .unwrap()
            .into_iter()
            .map(|s| {
                let mut v = s.vertices().to_vec();
                v.sort();
                v
            })
            .collect();
        parts.sort();
        assert_eq!(parts, vec![vec![vec![q(0, 1)], vec![q(1, 2)]], vec![vec![q(1, 2)], vec![q(1, 1)]]]);

        let tri = Simplex::standard(2);
        let parts = barycentric_subdivide(&tri).unwrap();
        assert_eq!(parts.len(), 6);
        for p in &parts {
            assert_eq!(volume(p), q(1, 12));
            let dv = p.distinguished().unwrap();
            assert!(tri.vertices().iter().any(|v| v.as_slice() == dv));
            let originals = p.vertices().iter().filter(|v| tri.vertices().contains(v)).count();
            assert_eq!(originals, 1);
        }
    }

    #[test]
    fn subdivision_preserves_volume() {
        let s = Simplex::new(vec![
            vec![q(0, 1), q(1, 3), q(0, 1)],
            vec![q(2, 1), q(0, 1), q(1, 5)],
            vec![q(1, 2), q(3, 1), q(0, 1)],
            vec![q(0, 1), q(0, 1), q(7, 4)],
        ])
        .unwrap();
        let parts = barycentric_subdivide(&s).unwrap();
        assert_eq!(parts.len(), 24);
        assert_eq!(parts.iter().map(volume).sum::<BigRational>(), volume(&s));
    }

    #[test]
    fn single_form_interval() {
        let t = band_triangulate(&[vec![1]], 1, None).unwrap();
        assert_eq!(t.cells.len(), 1);
        assert_eq!(t.total_volume(), q(1, 1));
    }

    #[test]
    fn doubled_form_interval() {
        let t = band_triangulate(&[vec![1], vec![2]], 1, None).unwrap();
        let cells: Vec<(Vec<i64>, Vec<Vec<BigRational>>)> = t
            .cells
            .iter()
            .map(|c| {
                let mut v = c.simplex.vertices().to_vec();
                v.sort();
                (c.bands.clone(), v)
            })
            .collect();
        assert_eq!(
            cells,
            vec![(vec![0, 0], vec![vec![q(0, 1)], vec![q(1, 2)]]), (vec![0, 1], vec![vec![q(1, 2)], vec![q(1, 1)]]),]
        );
    }

    #[test]
    fn missing_identity() {
        assert_eq!(band_triangulate(&[vec![1, 1], vec![1, 0]], 2, None).unwrap_err(), Error::NoIdentityBlock);
    }

    #[test]
    fn b2_regions() {
        let mut forms = unit_forms(2);
        forms.push(vec![1, 1]);
        forms.push(vec![1, 2]);
        let expected: BTreeSet<u64> = [1, 2].into_iter().collect();
        let t = band_triangulate(&forms, 2, Some(&expected)).unwrap();
        assert_eq!(t.total_volume(), q(1, 1));
        let regions = t.regions();
        assert_eq!(regions.len(), 4);
        assert!(regions.values().all(|a| *a == q(1, 4)));
        assert_eq!(t.denominator_bound_holds, Some(true));
        assert_eq!(t.denominator_lcm(), 2);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let mut forms = unit_forms(3);
        forms.push(vec![-1, 0, -1]);
        forms.push(vec![0, -1, -1]);
        forms.push(vec![-1, -1, -1]);
        let a = band_triangulate_with(&forms, 3, None, Exec::Sequential).unwrap();
        let b = band_triangulate_with(&forms, 3, None, Exec::Parallel).unwrap();
        assert_eq!(a.cells, b.cells);
        assert_eq!(a.total_volume(), q(1, 1));
    }
}
