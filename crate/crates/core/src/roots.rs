//! Irreducible root systems in simple-root coordinates.
//!
//! Simple roots are numbered as in Bourbaki, which is the numbering of the
//! highest-root table used throughout the crate:
//!
//! * `B_n`: `alpha_n` short; `C_n`: `alpha_n` long;
//! * `D_n`: `alpha_{n-1}`, `alpha_n` both attached to `alpha_{n-2}`;
//! * `E_n`: chain `1-3-4-5-...-n` with `alpha_2` attached to `alpha_4`;
//! * `F_4`: `alpha_1, alpha_2` long, `alpha_3, alpha_4` short;
//! * `G_2`: `alpha_1` short, `alpha_2` long.
//!
//! Long roots have squared length 2. All pairings are derived from the
//! inner products of simple roots; no ambient Euclidean embedding is used.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }
}

/// Cartan type such as `B3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CartanType {
    pub family: Family,
    pub rank: usize,
}

impl CartanType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(Self { family, rank })
        } else {
            Err(Error::InvalidType { family: family.letter(), rank })
        }
    }

    /// Parses `"G2"`, `"b3"`, `"E_6"`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars.next().ok_or_else(|| Error::InvalidArgument("empty type".into()))?;
        let digits: String = chars.filter(|c| *c != '_').collect();
        let rank = digits.parse().map_err(|_| Error::InvalidArgument(format!("bad type {s:?}")))?;
        let family = Family::from_letter(letter).ok_or(Error::InvalidType { family: letter, rank })?;
        Self::new(family, rank)
    }

    /// Number of positive roots.
    pub fn positive_root_count(self) -> usize {
        let n = self.rank;
        match self.family {
            Family::A => n * (n + 1) / 2,
            Family::B | Family::C => n * n,
            Family::D => n * (n - 1),
            Family::E => [36, 63, 120][n - 6],
            Family::F => 24,
            Family::G => 6,
        }
    }

    pub fn weyl_degrees(self) -> Vec<u64> {
        let n = self.rank as u64;
        match self.family {
            Family::A => (2..=n + 1).collect(),
            Family::B | Family::C => (1..=n).map(|k| 2 * k).collect(),
            Family::D => (1..n).map(|k| 2 * k).chain(std::iter::once(n)).collect(),
            Family::G => vec![2, 6],
            Family::F => vec![2, 6, 8, 12],
            Family::E => match n {
                6 => vec![2, 5, 6, 8, 9, 12],
                7 => vec![2, 6, 8, 10, 12, 14, 18],
                _ => vec![2, 8, 12, 14, 18, 20, 24, 30],
            },
        }
    }

    pub fn dual(self) -> Self {
        let family = match self.family {
            Family::B => Family::C,
            Family::C => Family::B,
            f => f,
        };
        Self { family, rank: self.rank }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

/// A root system with its positive roots in simple-root coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    kind: CartanType,
    /// True when this is the dual of `kind` with the simple roots kept in
    /// the original order (only differs from `kind`'s own labeling for F4, G2).
    relabeled_dual: bool,
    /// `(alpha_i, alpha_j)`, long roots of squared length 2.
    gram: Vec<Vec<BigRational>>,
    /// `cartan[i][j] = (alpha_i, alpha_j^vee)`.
    cartan: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

// Gram matrix of the simple roots, Bourbaki numbering.
fn gram_matrix(t: CartanType) -> Vec<Vec<BigRational>> {
    let n = t.rank;
    let mut g = vec![vec![BigRational::zero(); n]; n];
    let link = |g: &mut Vec<Vec<BigRational>>, i: usize, j: usize, v: BigRational| {
        g[i][j] = v.clone();
        g[j][i] = v;
    };
    match t.family {
        Family::A | Family::D | Family::E => {
            for i in 0..n {
                g[i][i] = rat(2, 1);
            }
            match t.family {
                Family::A => (0..n - 1).for_each(|i| link(&mut g, i, i + 1, rat(-1, 1))),
                Family::D => {
                    (0..n - 2).for_each(|i| link(&mut g, i, i + 1, rat(-1, 1)));
                    link(&mut g, n - 3, n - 1, rat(-1, 1));
                }
                _ => {
                    // 1-3, 3-4, 4-5, ..., and 2-4 (1-based)
                    link(&mut g, 0, 2, rat(-1, 1));
                    link(&mut g, 1, 3, rat(-1, 1));
                    (2..n - 1).for_each(|i| link(&mut g, i, i + 1, rat(-1, 1)));
                }
            }
        }
        Family::B => {
            for i in 0..n {
                g[i][i] = if i == n - 1 { rat(1, 1) } else { rat(2, 1) };
            }
            (0..n - 1).for_each(|i| link(&mut g, i, i + 1, rat(-1, 1)));
        }
        Family::C => {
            for i in 0..n {
                g[i][i] = if i == n - 1 { rat(2, 1) } else { rat(1, 1) };
            }
            (0..n - 2).for_each(|i| link(&mut g, i, i + 1, rat(-1, 2)));
            link(&mut g, n - 2, n - 1, rat(-1, 1));
        }
        Family::F => {
            g[0][0] = rat(2, 1);
            g[1][1] = rat(2, 1);
            g[2][2] = rat(1, 1);
            g[3][3] = rat(1, 1);
            link(&mut g, 0, 1, rat(-1, 1));
            link(&mut g, 1, 2, rat(-1, 1));
            link(&mut g, 2, 3, rat(-1, 2));
        }
        Family::G => {
            g[0][0] = rat(2, 3);
            g[1][1] = rat(2, 1);
            link(&mut g, 0, 1, rat(-1, 1));
        }
    }
    g
}

impl RootSystem {
    pub fn build(t: CartanType) -> Self {
        Self::from_gram(t, false, gram_matrix(t))
    }

    /// Convenience: `RootSystem::parse("G2")`.
    pub fn parse(s: &str) -> Result<Self> {
        Ok(Self::build(CartanType::parse(s)?))
    }

    fn from_gram(kind: CartanType, relabeled_dual: bool, gram: Vec<Vec<BigRational>>) -> Self {
        let n = gram.len();
        let cartan: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let v = BigRational::from_integer(2.into()) * &gram[i][j] / &gram[j][j];
                        v.to_integer().to_i64().expect("integral Cartan entry")
                    })
                    .collect()
            })
            .collect();
        let positive_roots = generate_positive_roots(&cartan);
        Self { kind, relabeled_dual, gram, cartan, positive_roots }
    }

    /// The coroot system: Cartan matrix transposed, simple roots kept in order.
    pub fn dual(&self) -> Self {
        let n = self.rank();
        // alpha^vee = 2 alpha / (alpha, alpha), rescaled so long coroots have length 2.
        let mut g: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        BigRational::from_integer(4.into()) * &self.gram[i][j] / (&self.gram[i][i] * &self.gram[j][j])
                    })
                    .collect()
            })
            .collect();
        let longest = (0..n).map(|i| g[i][i].clone()).max().expect("rank >= 1");
        let scale = BigRational::from_integer(2.into()) / longest;
        for row in g.iter_mut() {
            for x in row.iter_mut() {
                *x *= &scale;
            }
        }
        let kind = self.kind.dual();
        let relabeled = matches!(self.kind.family, Family::F | Family::G) != self.relabeled_dual;
        Self::from_gram(kind, relabeled, g)
    }

    pub fn kind(&self) -> CartanType {
        self.kind
    }

    /// Human-readable label; duals of F4/G2 carry a marker since their simple
    /// roots are numbered differently from the standard labeling.
    pub fn label(&self) -> String {
        if self.relabeled_dual {
            format!("{}^", self.kind)
        } else {
            self.kind.to_string()
        }
    }

    pub fn is_relabeled_dual(&self) -> bool {
        self.relabeled_dual
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn gram(&self) -> &[Vec<BigRational>] {
        &self.gram
    }

    /// `d_i = (alpha_i, alpha_i) / 2`.
    pub fn symmetrizer(&self) -> Vec<BigRational> {
        (0..self.rank()).map(|i| &self.gram[i][i] / BigRational::from_integer(2.into())).collect()
    }

    /// Positive roots by height, then lexicographically; simple roots first.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn highest_root(&self) -> &[i64] {
        self.positive_roots.last().expect("nonempty root system")
    }

    /// `(alpha, alpha)` for a root in simple-root coordinates.
    pub fn norm2(&self, c: &[i64]) -> BigRational {
        let n = self.rank();
        let mut s = BigRational::zero();
        for i in 0..n {
            for j in 0..n {
                if c[i] != 0 && c[j] != 0 {
                    s += &self.gram[i][j] * BigRational::from_integer((c[i] * c[j]).into());
                }
            }
        }
        s
    }

    /// `(lambda_i, alpha^vee) = c_i (alpha_i, alpha_i) / (alpha, alpha)`.
    pub fn weight_coroot_pairing(&self, i: usize, root: &[i64]) -> BigRational {
        BigRational::from_integer(root[i].into()) * &self.gram[i][i] / self.norm2(root)
    }

    /// The `n x r` matrix `((lambda_i, alpha_j^vee))` over positive roots.
    pub fn pairing_matrix(&self) -> Vec<Vec<i64>> {
        pairing_matrix_with(&self.gram, &self.positive_roots)
    }

    pub fn pairing_matrix_exact(&self) -> ExactMatrix {
        ExactMatrix::from_i64_rows(&self.pairing_matrix()).expect("rectangular")
    }

    pub fn highest_root_coeffs(&self) -> std::collections::BTreeSet<u64> {
        self.highest_root().iter().map(|&c| c as u64).collect()
    }

    pub fn weyl_degrees(&self) -> Vec<u64> {
        self.kind.weyl_degrees()
    }

    pub fn weyl_order(&self) -> BigInt {
        self.weyl_degrees().iter().map(|&d| BigInt::from(d)).product()
    }

    /// `K = prod_{alpha > 0} (delta, alpha^vee)`, `delta = sum lambda_i`.
    pub fn k_phi(&self) -> BigInt {
        let m = self.pairing_matrix();
        (0..self.num_positive_roots()).map(|j| BigInt::from(m.iter().map(|row| row[j]).sum::<i64>())).product()
    }

    /// Matrix of the simple reflection `s_i` on root coordinates
    /// (`s_i(beta) = beta - <beta, alpha_i^vee> alpha_i`), acting on columns.
    pub fn simple_reflection(&self, i: usize) -> Vec<Vec<i64>> {
        let n = self.rank();
        let mut m: Vec<Vec<i64>> = (0..n).map(|r| (0..n).map(|c| i64::from(r == c)).collect()).collect();
        for k in 0..n {
            // column k is the image of alpha_k
            m[i][k] -= self.cartan[k][i];
        }
        m
    }

    /// Enumerates the Weyl group by breadth-first closure under simple
    /// reflections. Fails without enumerating when `|W|` exceeds `max_order`.
    pub fn weyl_enumerate(&self, max_order: u64) -> Result<Vec<WeylElement>> {
        let order = self.weyl_order();
        if order > BigInt::from(max_order) {
            return Err(Error::BudgetExceeded {
                needed: order.to_u128().unwrap_or(u128::MAX),
                budget: u128::from(max_order),
            });
        }
        let n = self.rank();
        let gens: Vec<Vec<Vec<i64>>> = (0..n).map(|i| self.simple_reflection(i)).collect();
        let identity: Vec<Vec<i64>> = (0..n).map(|r| (0..n).map(|c| i64::from(r == c)).collect()).collect();
        let mut seen: HashSet<Vec<Vec<i64>>> = HashSet::new();
        let mut queue = VecDeque::new();
        let mut out = Vec::new();
        seen.insert(identity.clone());
        queue.push_back(identity);
        while let Some(g) = queue.pop_front() {
            for s in &gens {
                let h = mat_mul(s, &g);
                if seen.insert(h.clone()) {
                    queue.push_back(h);
                }
            }
            let length = self.positive_roots.iter().filter(|r| mat_vec(&g, r).iter().any(|&x| x < 0)).count();
            out.push(WeylElement { matrix: g, length });
        }
        Ok(out)
    }

    /// Coefficients of `sum_w q^{l(w)}`, by enumeration when `|W| <= max_order`
    /// and from the degree factorization otherwise.
    pub fn poincare_poly(&self, max_order: u64) -> Vec<BigInt> {
        match self.weyl_enumerate(max_order) {
            Ok(elems) => {
                let top = elems.iter().map(|e| e.length).max().unwrap_or(0);
                let mut c = vec![BigInt::zero(); top + 1];
                for e in elems {
                    c[e.length] += 1;
                }
                c
            }
            Err(_) => poincare_from_degrees(&self.weyl_degrees()),
        }
    }
}

/// `prod_k (q^{d_k} - 1) / (q - 1)` as coefficients.
pub fn poincare_from_degrees(degrees: &[u64]) -> Vec<BigInt> {
    let mut acc = vec![BigInt::one()];
    for &d in degrees {
        let mut next = vec![BigInt::zero(); acc.len() + d as usize - 1];
        for (i, a) in acc.iter().enumerate() {
            for k in 0..d as usize {
                next[i + k] += a;
            }
        }
        acc = next;
    }
    acc
}

pub(crate) fn pairing_matrix_with(gram: &[Vec<BigRational>], roots: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = gram.len();
    let norm2 = |c: &[i64]| -> BigRational {
        let mut s = BigRational::zero();
        for i in 0..n {
            for j in 0..n {
                s += &gram[i][j] * BigRational::from_integer((c[i] * c[j]).into());
            }
        }
        s
    };
    let norms: Vec<BigRational> = roots.iter().map(|r| norm2(r)).collect();
    (0..n)
        .map(|i| {
            roots
                .iter()
                .zip(&norms)
                .map(|(r, nr)| {
                    let v = BigRational::from_integer(r[i].into()) * &gram[i][i] / nr;
                    assert!(v.is_integer(), "pairing must be integral");
                    v.to_integer().to_i64().expect("small pairing")
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    /// Acts on simple-root coordinate column vectors.
    pub matrix: Vec<Vec<i64>>,
    /// Number of positive roots sent to negative roots.
    pub length: usize,
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn mat_vec(a: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

// Root-string closure: beta + alpha_i is a root iff p - <beta, alpha_i^vee> > 0,
// where p is the largest k with beta - k alpha_i a root.
fn generate_positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let mut roots: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
    let mut known: HashMap<Vec<i64>, ()> = roots.iter().map(|r| (r.clone(), ())).collect();
    let mut layer = roots.clone();
    while !layer.is_empty() {
        let mut next: Vec<Vec<i64>> = Vec::new();
        for beta in &layer {
            for i in 0..n {
                let pair: i64 = (0..n).map(|k| beta[k] * cartan[k][i]).sum();
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if known.contains_key(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                if p - pair > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if !known.contains_key(&up) {
                        known.insert(up.clone(), ());
                        next.push(up);
                    }
                }
            }
        }
        roots.extend(next.iter().cloned());
        layer = next;
    }
    roots.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| a.cmp(b))
    });
    // Same height: simple roots are e_i, which sort in decreasing lexicographic
    // order; keep them as alpha_1, ..., alpha_n.
    let (simple, rest) = roots.split_at_mut(n);
    simple.sort_by(|a, b| b.cmp(a));
    let _ = rest;
    roots
}
