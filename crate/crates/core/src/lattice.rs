//! Level sets `D`, exponent sets `E`, highest-root sets `H` and the
//! rational set `T` of a root system.
//!
//! `D(B)` for a `d x m` integer matrix `B` is the set of levels of its
//! invertible `d x d` column submatrices. `D(Phi)` is `D(M_Phi)` and
//! `E(Phi)` is `D` of the matrix whose columns are the positive roots in
//! simple-root coordinates: for a square nonsingular generator matrix the
//! exponent of `Z^n / span` is its last invariant factor, i.e. its level.

use std::collections::BTreeSet;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::level_i64;
use crate::par::Exec;
use crate::roots::RootSystem;

/// Default ceiling on the number of `n`-subsets an enumeration may visit.
pub const DEFAULT_BUDGET: u128 = 5_000_000;

/// Environment variable naming the default cache directory.
pub const CACHE_ENV: &str = "WITTEN_CACHE_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    D,
    E,
    H,
    T,
}

impl Kind {
    pub fn letter(self) -> char {
        match self {
            Kind::D => 'D',
            Kind::E => 'E',
            Kind::H => 'H',
            Kind::T => 'T',
        }
    }

    fn from_letter(c: &str) -> Option<Self> {
        Some(match c {
            "D" => Kind::D,
            "E" => Kind::E,
            "H" => Kind::H,
            "T" => Kind::T,
            _ => return None,
        })
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantSet {
    pub kind: Kind,
    pub phi: String,
    /// Sorted, distinct.
    pub values: Vec<BigRational>,
    /// Number of subsets accounted for (visited or pruned as singular).
    pub budget_spent: u128,
}

impl InvariantSet {
    /// Values as integers; `None` for `T`-sets with proper fractions.
    pub fn integers(&self) -> Option<Vec<u64>> {
        self.values.iter().map(|v| if v.is_integer() { v.to_integer().to_u64() } else { None }).collect()
    }

    pub fn contains_int(&self, k: u64) -> bool {
        self.values.contains(&BigRational::from_integer(k.into()))
    }

    fn from_ints(kind: Kind, phi: String, values: &BTreeSet<u64>, budget_spent: u128) -> Self {
        Self { kind, phi, values: values.iter().map(|&v| BigRational::from_integer(v.into())).collect(), budget_spent }
    }
}

/// Result of enumerating `D(B)` for a bare matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSet {
    pub values: BTreeSet<u64>,
    /// `C(m, d)`: every subset is either visited or pruned.
    pub subsets: u128,
    /// Subsets that were invertible.
    pub invertible: u64,
}

#[derive(Debug, Clone)]
pub struct Options {
    pub budget: u128,
    pub exec: Exec,
    pub cache: Option<Cache>,
}

impl Default for Options {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, exec: Exec::default(), cache: None }
    }
}

pub fn binomial_u128(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

// Row echelon basis of the columns chosen so far, fraction-free in i128.
#[derive(Clone, Default)]
struct Echelon {
    rows: Vec<(usize, Vec<i128>)>,
}

impl Echelon {
    // Adds `v`; false if it is in the span of the current basis.
    fn push(&mut self, v: &[i64]) -> bool {
        let mut w: Vec<i128> = v.iter().map(|&x| i128::from(x)).collect();
        for (p, b) in &self.rows {
            let c = w[*p];
            if c == 0 {
                continue;
            }
            let bp = b[*p];
            let mut g = 0i128;
            for (x, y) in w.iter_mut().zip(b) {
                *x = bp * *x - c * y;
                g = g.gcd(x);
            }
            if g > 1 {
                w.iter_mut().for_each(|x| *x /= g);
            }
        }
        match w.iter().position(|&x| x != 0) {
            Some(p) => {
                self.rows.push((p, w));
                true
            }
            None => false,
        }
    }
}

struct Enumerator<'a> {
    columns: &'a [Vec<i64>],
    d: usize,
}

impl Enumerator<'_> {
    fn level_of(&self, chosen: &[usize]) -> Option<u64> {
        let d = self.d;
        let mut flat = vec![0i64; d * d];
        for (k, &c) in chosen.iter().enumerate() {
            for i in 0..d {
                flat[i * d + k] = self.columns[c][i];
            }
        }
        level_i64(&flat, d).map(|l| l.to_u64().expect("level fits in u64"))
    }

    fn dfs(&self, chosen: &mut Vec<usize>, basis: &Echelon, out: &mut BTreeSet<u64>, invertible: &mut u64) {
        if chosen.len() == self.d {
            if let Some(l) = self.level_of(chosen) {
                out.insert(l);
                *invertible += 1;
            }
            return;
        }
        let start = chosen.last().map_or(0, |&c| c + 1);
        let m = self.columns.len();
        let remaining = self.d - chosen.len();
        for c in start..=m - remaining {
            let mut next = basis.clone();
            if !next.push(&self.columns[c]) {
                continue;
            }
            chosen.push(c);
            self.dfs(chosen, &next, out, invertible);
            chosen.pop();
        }
    }
}

/// `D(B)` for the `d x m` matrix `rows`: levels of all invertible `d x d`
/// column submatrices. Fails up front if `C(m, d)` exceeds `budget`.
pub fn level_set(rows: &[Vec<i64>], budget: u128, exec: Exec) -> Result<LevelSet> {
    let d = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::DimensionMismatch("ragged matrix".into()));
    }
    let subsets = binomial_u128(m, d);
    if subsets > budget {
        return Err(Error::BudgetExceeded { needed: subsets, budget });
    }
    if d == 0 || m < d {
        return Ok(LevelSet { values: BTreeSet::new(), subsets, invertible: 0 });
    }
    let columns: Vec<Vec<i64>> = (0..m).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
    let en = Enumerator { columns: &columns, d };
    // Partition on the first two chosen columns.
    let depth = d.min(2);
    let mut prefixes: Vec<Vec<usize>> = Vec::new();
    if depth == 1 {
        prefixes.extend((0..=m - d).map(|i| vec![i]));
    } else {
        for i in 0..=m - d {
            for j in i + 1..=m - d + 1 {
                prefixes.push(vec![i, j]);
            }
        }
    }
    let parts = exec.map(prefixes, |prefix| {
        let mut basis = Echelon::default();
        let mut out = BTreeSet::new();
        let mut invertible = 0u64;
        if prefix.iter().all(|&c| basis.push(&columns[c])) {
            let mut chosen = prefix;
            en.dfs(&mut chosen, &basis, &mut out, &mut invertible);
        }
        (out, invertible)
    });
    let mut values = BTreeSet::new();
    let mut invertible = 0;
    for (v, k) in parts {
        values.extend(v);
        invertible += k;
    }
    Ok(LevelSet { values, subsets, invertible })
}

fn root_matrix(rs: &RootSystem) -> Vec<Vec<i64>> {
    let n = rs.rank();
    (0..n).map(|i| rs.positive_roots().iter().map(|r| r[i]).collect()).collect()
}

fn cached_level_set(rs: &RootSystem, kind: Kind, rows: &[Vec<i64>], opts: &Options) -> Result<InvariantSet> {
    if let Some(hit) = opts.cache.as_ref().and_then(|c| c.load(kind, &rs.label(), rows)) {
        return Ok(hit);
    }
    let ls = level_set(rows, opts.budget, opts.exec)?;
    let set = InvariantSet::from_ints(kind, rs.label(), &ls.values, ls.subsets);
    if let Some(c) = &opts.cache {
        c.store(&set, rows)?;
    }
    Ok(set)
}

/// `D(Phi) = D(M_Phi)`.
pub fn dset(rs: &RootSystem, opts: &Options) -> Result<InvariantSet> {
    cached_level_set(rs, Kind::D, &rs.pairing_matrix(), opts)
}

/// `E(Phi)`: exponents of `Z^n / span_Z S` over full-rank `n`-subsets `S`
/// of positive roots.
pub fn eset(rs: &RootSystem, opts: &Options) -> Result<InvariantSet> {
    cached_level_set(rs, Kind::E, &root_matrix(rs), opts)
}

pub fn hset(rs: &RootSystem) -> InvariantSet {
    let h: BTreeSet<u64> = rs.highest_root_coeffs();
    InvariantSet::from_ints(Kind::H, rs.label(), &h, 0)
}

/// Reduced fractions `p/q` in `(0, 1]` with `q` in `H(Phi) ∪ {1}`.
pub fn tset(rs: &RootSystem) -> InvariantSet {
    let mut dens = rs.highest_root_coeffs();
    dens.insert(1);
    let mut vals = BTreeSet::new();
    for &q in &dens {
        for p in 1..=q {
            vals.insert(BigRational::new(BigInt::from(p), BigInt::from(q)));
        }
    }
    InvariantSet { kind: Kind::T, phi: rs.label(), values: vals.into_iter().collect(), budget_spent: 0 }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetComparison {
    pub holds: bool,
    pub left: InvariantSet,
    pub right: InvariantSet,
}

/// Checks `E(Phi) = H(Phi) ∪ {1}`. The right-hand set is reported with kind `H`.
pub fn verify_eh(rs: &RootSystem, opts: &Options) -> Result<SetComparison> {
    let e = eset(rs, opts)?;
    let mut h = hset(rs);
    let one = BigRational::one();
    if !h.values.contains(&one) {
        h.values.insert(0, one);
    }
    Ok(SetComparison { holds: e.values == h.values, left: e, right: h })
}

/// Checks `D(Phi) = E(Phi^vee)`.
pub fn verify_de(rs: &RootSystem, opts: &Options) -> Result<SetComparison> {
    let d = dset(rs, opts)?;
    let e = eset(&rs.dual(), opts)?;
    Ok(SetComparison { holds: d.values == e.values, left: d, right: e })
}

/// On-disk store of computed `D`/`E` sets, one text record per matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cache {
    dir: PathBuf,
}

const RECORD_HEADER: &str = "witten-invariant-set 1";

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// Cache rooted at `$WITTEN_CACHE_DIR`, if set and non-empty.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(kind: Kind, rows: &[Vec<i64>]) -> String {
        let mut h = Sha256::new();
        h.update([kind.letter() as u8, b'\n']);
        for r in rows {
            let line: Vec<String> = r.iter().map(i64::to_string).collect();
            h.update(line.join(" ").as_bytes());
            h.update(b"\n");
        }
        hex::encode(h.finalize())
    }

    pub fn path(&self, kind: Kind, rows: &[Vec<i64>]) -> PathBuf {
        self.dir.join(format!("{}-{}.txt", kind.letter(), Self::key(kind, rows)))
    }

    /// Returns `None` on a missing or malformed record.
    pub fn load(&self, kind: Kind, phi: &str, rows: &[Vec<i64>]) -> Option<InvariantSet> {
        let text = fs::read_to_string(self.path(kind, rows)).ok()?;
        let mut lines = text.lines();
        if lines.next()? != RECORD_HEADER {
            return None;
        }
        let mut field = |name: &str| -> Option<String> {
            let line = lines.next()?;
            line.strip_prefix(name)?.strip_prefix(' ').map(str::to_owned).or_else(|| (line == name).then(String::new))
        };
        let k = Kind::from_letter(&field("kind")?)?;
        let key = field("key")?;
        let _phi = field("phi")?;
        let spent: u128 = field("subsets")?.parse().ok()?;
        let values: Vec<u64> =
            field("values")?.split_whitespace().map(str::parse).collect::<std::result::Result<_, _>>().ok()?;
        if k != kind || key != Self::key(kind, rows) || values.windows(2).any(|w| w[0] >= w[1]) {
            return None;
        }
        let set: BTreeSet<u64> = values.into_iter().collect();
        Some(InvariantSet::from_ints(kind, phi.to_owned(), &set, spent))
    }

    pub fn store(&self, set: &InvariantSet, rows: &[Vec<i64>]) -> Result<()> {
        let io = |e: std::io::Error| Error::Io(e.to_string());
        fs::create_dir_all(&self.dir).map_err(io)?;
        let ints = set.integers().ok_or_else(|| Error::InvalidArgument("only integer sets are cached".into()))?;
        let values: Vec<String> = ints.iter().map(u64::to_string).collect();
        let text = format!(
            "{RECORD_HEADER}\nkind {}\nkey {}\nphi {}\nsubsets {}\nvalues {}\n",
            set.kind,
            Self::key(set.kind, rows),
            set.phi,
            set.budget_spent,
            values.join(" ")
        );
        let path = self.path(set.kind, rows);
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, text).map_err(io)?;
        fs::rename(&tmp, &path).map_err(io)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{CartanType, Family};
    use proptest::prelude::*;

    fn rs(s: &str) -> RootSystem {
        RootSystem::parse(s).unwrap()
    }

    fn ints(s: &InvariantSet) -> Vec<u64> {
        s.integers().unwrap()
    }

    #[test]
    fn worked_examples() {
        let o = Options::default();
        let g2 = dset(&rs("G2"), &o).unwrap();
        assert_eq!(ints(&g2), vec![1, 2, 3]);
        assert_eq!(g2.budget_spent, 15);
        let b3 = dset(&rs("B3"), &o).unwrap();
        assert_eq!(ints(&b3), vec![1, 2]);
        assert_eq!(b3.budget_spent, 84);
        assert_eq!(ints(&dset(&rs("A2"), &o).unwrap()), vec![1]);
    }

    #[test]
    fn exponent_sets() {
        let o = Options::default();
        assert_eq!(ints(&eset(&rs("A1"), &o).unwrap()), vec![1]);
        for n in 2..=6 {
            assert_eq!(ints(&eset(&rs(&format!("A{n}")), &o).unwrap()), vec![1]);
        }
        assert_eq!(ints(&eset(&rs("G2"), &o).unwrap()), vec![1, 2, 3]);
    }

    #[test]
    fn t_sets() {
        let show = |s: &str| tset(&rs(s)).values.iter().map(|v| v.to_string()).collect::<Vec<_>>();
        assert_eq!(show("A3"), vec!["1"]);
        assert_eq!(show("B2"), vec!["1/2", "1"]);
        assert_eq!(show("G2"), vec!["1/3", "1/2", "2/3", "1"]);
    }

    #[test]
    fn set_identities_small_ranks() {
        let o = Options::default();
        for name in ["A3", "G2", "F4", "B3", "C3", "A2"] {
            let eh = verify_eh(&rs(name), &o).unwrap();
            assert!(eh.holds, "{name}: {:?} vs {:?}", eh.left.values, eh.right.values);
            let de = verify_de(&rs(name), &o).unwrap();
            assert!(de.holds, "{name}");
        }
        assert_eq!(ints(&verify_eh(&rs("F4"), &o).unwrap().left), vec![1, 2, 3, 4]);
    }

    #[test]
    fn budget_refusal() {
        let o = Options::default();
        for name in ["E7", "E8"] {
            assert!(matches!(dset(&rs(name), &o), Err(Error::BudgetExceeded { .. })));
            assert!(matches!(eset(&rs(name), &o), Err(Error::BudgetExceeded { .. })));
        }
        let tight = Options { budget: 14, ..Options::default() };
        assert_eq!(dset(&rs("G2"), &tight), Err(Error::BudgetExceeded { needed: 15, budget: 14 }));
    }

    // M = (I_n | C) against B = (I_{r-n} | C^T).
    #[test]
    fn transpose_block_levels() {
        let types = [
            (Family::A, 2),
            (Family::A, 3),
            (Family::A, 4),
            (Family::B, 2),
            (Family::B, 3),
            (Family::B, 4),
            (Family::C, 3),
            (Family::C, 4),
            (Family::D, 4),
            (Family::F, 4),
            (Family::G, 2),
        ];
        for (f, n) in types {
            let r = RootSystem::build(CartanType::new(f, n).unwrap());
            let m = r.pairing_matrix();
            let total = r.num_positive_roots();
            let k = total - n;
            let b: Vec<Vec<i64>> = (0..k)
                .map(|a| (0..k).map(|c| i64::from(a == c)).chain((0..n).map(|i| m[i][n + a])).collect())
                .collect();
            let lhs = level_set(&m, DEFAULT_BUDGET, Exec::Parallel).unwrap().values;
            let rhs = level_set(&b, DEFAULT_BUDGET, Exec::Parallel).unwrap().values;
            assert_eq!(lhs, rhs, "{}", r.label());
        }
    }

    #[test]
    fn schedule_independent() {
        for name in ["F4", "B4", "D5"] {
            let m = rs(name).pairing_matrix();
            let a = level_set(&m, DEFAULT_BUDGET, Exec::Sequential).unwrap();
            let b = level_set(&m, DEFAULT_BUDGET, Exec::Parallel).unwrap();
            assert_eq!(a, b, "{name}");
        }
    }

    #[test]
    fn cache_roundtrip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let o = Options { cache: Some(Cache::new(dir.path())), ..Options::default() };
        let g2 = rs("G2");
        let first = dset(&g2, &o).unwrap();
        let path = o.cache.as_ref().unwrap().path(Kind::D, &g2.pairing_matrix());
        assert!(path.exists());
        assert_eq!(dset(&g2, &o).unwrap(), first);
        // A planted record is served as-is, which shows the cache is consulted.
        let text = fs::read_to_string(&path).unwrap().replace("values 1 2 3", "values 1 2");
        fs::write(&path, text).unwrap();
        assert_eq!(ints(&dset(&g2, &o).unwrap()), vec![1, 2]);
        fs::write(&path, "garbage\n").unwrap();
        assert_eq!(dset(&g2, &o).unwrap(), first);
        assert_eq!(ints(&dset(&g2, &o).unwrap()), vec![1, 2, 3]);
    }

    fn brute_force(rows: &[Vec<i64>]) -> BTreeSet<u64> {
        let d = rows.len();
        let m = rows[0].len();
        let mut out = BTreeSet::new();
        let mut idx: Vec<usize> = (0..d).collect();
        loop {
            let flat: Vec<i64> = (0..d).flat_map(|i| idx.iter().map(move |&c| rows[i][c])).collect();
            if let Some(l) = level_i64(&flat, d) {
                out.insert(l.to_u64().unwrap());
            }
            let mut i = d;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if idx[i] < m - d + i {
                    idx[i] += 1;
                    for j in i + 1..d {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    proptest! {
        #[test]
        fn pruned_enumeration_matches_brute_force(
            d in 1usize..4,
            extra in 0usize..4,
            seed in proptest::collection::vec(-3i64..=3, 28),
        ) {
            let m = d + extra;
            let rows: Vec<Vec<i64>> = (0..d).map(|i| (0..m).map(|j| seed[i * 7 + j]).collect()).collect();
            let got = level_set(&rows, DEFAULT_BUDGET, Exec::Sequential).unwrap();
            prop_assert_eq!(got.values, brute_force(&rows));
        }
    }
}
