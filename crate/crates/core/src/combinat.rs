//! Cauchon diagrams, restricted permutations and the orders on them.
//!
//! Cells and permutation values are 1-based throughout, matching the
//! `(i, a)` notation of the JSON formats.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::Matrix;

/// Largest supported grid side. Diagrams live in a `u64`, so `m * p <= 64`
/// is enforced as well.
pub const MAX_SIDE: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinatError {
    #[error("grid {m}x{p} is outside the supported range (1..={MAX_SIDE} per side)")]
    BadSize { m: usize, p: usize },
    #[error("cell ({i},{a}) lies outside the {m}x{p} grid")]
    CellOutOfRange { i: usize, a: usize, m: usize, p: usize },
    #[error("black cells do not form a Cauchon diagram; first offending cell ({i},{a})")]
    NotCauchon { i: usize, a: usize },
    #[error("{0:?} is not a permutation of 1..n")]
    NotPermutation(Vec<usize>),
    #[error("w({j}) - {j} is outside [-{p}, {m}]")]
    ShiftBounds { j: usize, m: usize, p: usize },
    #[error("permutation length {len} does not equal m+p = {n}")]
    LengthMismatch { len: usize, n: usize },
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("index set {0:?} is not strictly increasing and positive")]
    BadIndexSet(Vec<usize>),
}

fn check_size(m: usize, p: usize) -> Result<(), CombinatError> {
    if m == 0 || p == 0 || m > MAX_SIDE || p > MAX_SIDE || m * p > 64 {
        return Err(CombinatError::BadSize { m, p });
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Index sets

/// Strictly increasing list of positive integers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(v: Vec<usize>) -> Result<Self, CombinatError> {
        if v.first() == Some(&0) || v.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CombinatError::BadIndexSet(v));
        }
        Ok(IndexSet(v))
    }

    /// Sorts and deduplicates; panics on a zero entry.
    pub fn from_unsorted(mut v: Vec<usize>) -> Self {
        v.sort_unstable();
        v.dedup();
        assert!(v.first() != Some(&0), "index sets are 1-based");
        IndexSet(v)
    }

    pub fn empty() -> Self {
        IndexSet(Vec::new())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn contains(&self, x: usize) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    /// All elements but the one at position `k`.
    pub fn without_pos(&self, k: usize) -> Self {
        let mut v = self.0.clone();
        v.remove(k);
        IndexSet(v)
    }

    /// Replaces element `old` by `new`, keeping the set sorted. Returns
    /// `None` if `old` is absent or `new` already present.
    pub fn replace(&self, old: usize, new: usize) -> Option<Self> {
        if !self.contains(old) || self.contains(new) || new == 0 {
            return None;
        }
        Some(IndexSet::from_unsorted(
            self.0.iter().map(|&x| if x == old { new } else { x }).collect(),
        ))
    }
}

impl Deref for IndexSet {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        IndexSet::new(v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Componentwise order `I <= J` on sets of equal size (both sorted).
pub fn index_set_leq(i: &[usize], j: &[usize]) -> Result<bool, CombinatError> {
    if i.len() != j.len() {
        return Err(CombinatError::SizeMismatch(i.len(), j.len()));
    }
    Ok(i.iter().zip(j).all(|(a, b)| a <= b))
}

/// All `k`-subsets of `1..=n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<IndexSet> {
    use itertools::Itertools;
    (1..=n).combinations(k).map(IndexSet).collect()
}

// ---------------------------------------------------------------------------
// Cauchon diagrams

/// An `m x p` black/white grid in which every black cell has only black
/// cells to its left or only black cells above it.
///
/// Bit `(i-1)*p + (a-1)` of `black` is set when cell `(i, a)` is black.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CauchonDiagram {
    m: usize,
    p: usize,
    black: u64,
}

fn bit(p: usize, i: usize, a: usize) -> u64 {
    1u64 << ((i - 1) * p + (a - 1))
}

/// First black cell violating the diagram condition, in row-major order.
fn first_violation(m: usize, p: usize, black: u64) -> Option<(usize, usize)> {
    for i in 1..=m {
        for a in 1..=p {
            if black & bit(p, i, a) == 0 {
                continue;
            }
            let left = (1..a).all(|g| black & bit(p, i, g) != 0);
            let above = (1..i).all(|k| black & bit(p, k, a) != 0);
            if !left && !above {
                return Some((i, a));
            }
        }
    }
    None
}

fn cells_to_mask(
    m: usize,
    p: usize,
    cells: impl IntoIterator<Item = (usize, usize)>,
) -> Result<u64, CombinatError> {
    check_size(m, p)?;
    let mut mask = 0;
    for (i, a) in cells {
        if i == 0 || a == 0 || i > m || a > p {
            return Err(CombinatError::CellOutOfRange { i, a, m, p });
        }
        mask |= bit(p, i, a);
    }
    Ok(mask)
}

/// Whether the given black cells form a Cauchon diagram.
pub fn is_cauchon(
    m: usize,
    p: usize,
    black: impl IntoIterator<Item = (usize, usize)>,
) -> Result<bool, CombinatError> {
    let mask = cells_to_mask(m, p, black)?;
    Ok(first_violation(m, p, mask).is_none())
}

impl CauchonDiagram {
    pub fn new(
        m: usize,
        p: usize,
        black: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, CombinatError> {
        let mask = cells_to_mask(m, p, black)?;
        Self::from_mask(m, p, mask)
    }

    pub fn from_mask(m: usize, p: usize, black: u64) -> Result<Self, CombinatError> {
        check_size(m, p)?;
        let full = full_mask(m, p);
        if black & !full != 0 {
            let idx = (black & !full).trailing_zeros() as usize;
            return Err(CombinatError::CellOutOfRange {
                i: idx / p + 1,
                a: idx % p + 1,
                m,
                p,
            });
        }
        if let Some((i, a)) = first_violation(m, p, black) {
            return Err(CombinatError::NotCauchon { i, a });
        }
        Ok(CauchonDiagram { m, p, black })
    }

    pub fn all_white(m: usize, p: usize) -> Result<Self, CombinatError> {
        Self::from_mask(m, p, 0)
    }

    pub fn all_black(m: usize, p: usize) -> Result<Self, CombinatError> {
        check_size(m, p)?;
        Self::from_mask(m, p, full_mask(m, p))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn mask(&self) -> u64 {
        self.black
    }

    pub fn is_black(&self, i: usize, a: usize) -> bool {
        self.black & bit(self.p, i, a) != 0
    }

    /// Black cells in row-major order.
    pub fn black_cells(&self) -> Vec<(usize, usize)> {
        self.cells_where(true)
    }

    /// White cells in row-major order.
    pub fn white_cells(&self) -> Vec<(usize, usize)> {
        self.cells_where(false)
    }

    fn cells_where(&self, black: bool) -> Vec<(usize, usize)> {
        (1..=self.m)
            .flat_map(|i| (1..=self.p).map(move |a| (i, a)))
            .filter(|&(i, a)| self.is_black(i, a) == black)
            .collect()
    }
}

fn full_mask(m: usize, p: usize) -> u64 {
    if m * p == 64 {
        u64::MAX
    } else {
        (1u64 << (m * p)) - 1
    }
}

impl fmt::Debug for CauchonDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CauchonDiagram({}x{}, black={:?})",
            self.m,
            self.p,
            self.black_cells()
        )
    }
}

/// Picture with `#` for black and `.` for white, one line per row.
impl fmt::Display for CauchonDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.m {
            let row: String = (1..=self.p)
                .map(|a| if self.is_black(i, a) { '#' } else { '.' })
                .collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct DiagramRepr {
    m: usize,
    p: usize,
    black: Vec<[usize; 2]>,
}

impl Serialize for CauchonDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        DiagramRepr {
            m: self.m,
            p: self.p,
            black: self.black_cells().into_iter().map(|(i, a)| [i, a]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CauchonDiagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = DiagramRepr::deserialize(d)?;
        CauchonDiagram::new(r.m, r.p, r.black.into_iter().map(|[i, a]| (i, a)))
            .map_err(serde::de::Error::custom)
    }
}

/// Depth-first fill in row-major order; a cell may be black only if its row
/// prefix or its column prefix is entirely black.
fn diagram_dfs(m: usize, p: usize, mut visit: impl FnMut(u64)) {
    struct St {
        m: usize,
        p: usize,
        col_black: Vec<bool>,
    }
    fn go(st: &mut St, idx: usize, row_black: bool, mask: u64, visit: &mut dyn FnMut(u64)) {
        if idx == st.m * st.p {
            visit(mask);
            return;
        }
        let (r, c) = (idx / st.p, idx % st.p);
        let row_black = c == 0 || row_black;
        let col_prev = st.col_black[c];
        // white
        st.col_black[c] = false;
        go(st, idx + 1, false, mask, visit);
        // black
        if row_black || col_prev {
            st.col_black[c] = col_prev;
            go(st, idx + 1, row_black, mask | (1u64 << idx), visit);
        }
        st.col_black[c] = col_prev;
        let _ = r;
    }
    let mut st = St {
        m,
        p,
        col_black: vec![true; p],
    };
    go(&mut st, 0, true, 0, &mut visit);
}

/// Every `m x p` Cauchon diagram, in ascending bitmask order.
pub fn enumerate_diagrams(m: usize, p: usize) -> Result<Vec<CauchonDiagram>, CombinatError> {
    check_size(m, p)?;
    let mut masks = Vec::new();
    diagram_dfs(m, p, |mask| masks.push(mask));
    masks.sort_unstable();
    Ok(masks
        .into_iter()
        .map(|black| CauchonDiagram { m, p, black })
        .collect())
}

/// Number of `m x p` Cauchon diagrams without materialising them.
pub fn count_diagrams(m: usize, p: usize) -> Result<u64, CombinatError> {
    check_size(m, p)?;
    let mut n = 0;
    diagram_dfs(m, p, |_| n += 1);
    Ok(n)
}

// ---------------------------------------------------------------------------
// Permutations

/// The longest element `[n, n-1, ..., 1]`.
pub fn longest_element(n: usize) -> Vec<usize> {
    (1..=n).rev().collect()
}

/// `(a b)(j) = a(b(j))`, both in one-line notation.
pub fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x - 1]).collect()
}

pub fn inverse(w: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; w.len()];
    for (j, &v) in w.iter().enumerate() {
        inv[v - 1] = j + 1;
    }
    inv
}

pub fn is_permutation(w: &[usize]) -> bool {
    let mut seen = vec![false; w.len()];
    w.iter()
        .all(|&v| v >= 1 && v <= w.len() && !std::mem::replace(&mut seen[v - 1], true))
}

/// Bruhat order by the rank criterion: `w <= z` iff for all `i, j`,
/// `#{k <= j : w(k) >= i} <= #{k <= j : z(k) >= i}`.
pub fn bruhat_leq(w: &[usize], z: &[usize]) -> Result<bool, CombinatError> {
    if w.len() != z.len() {
        return Err(CombinatError::SizeMismatch(w.len(), z.len()));
    }
    for x in [w, z] {
        if !is_permutation(x) {
            return Err(CombinatError::NotPermutation(x.to_vec()));
        }
    }
    let n = w.len();
    // cw[i] = #{k <= j : w(k) >= i}, updated as j advances.
    let mut cw = vec![0usize; n + 2];
    let mut cz = vec![0usize; n + 2];
    for j in 0..n {
        cw[1..=w[j]].iter_mut().for_each(|c| *c += 1);
        cz[1..=z[j]].iter_mut().for_each(|c| *c += 1);
        if (1..=n).any(|i| cw[i] > cz[i]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Element of `S_{m+p}` with `-p <= w(j) - j <= m` for all `j`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RestrictedPermutation {
    m: usize,
    p: usize,
    w: Vec<usize>,
}

/// The four blocks of the permutation matrix `w_{ij} = [i = w(j)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// Rows `1..=m`, columns `1..=p`.
    pub w11: Matrix<u8>,
    /// Rows `1..=m`, columns `p+1..=N`.
    pub w12: Matrix<u8>,
    /// Rows `m+1..=N`, columns `1..=p`.
    pub w21: Matrix<u8>,
    /// Rows `m+1..=N`, columns `p+1..=N`.
    pub w22: Matrix<u8>,
}

impl BlockDecomposition {
    pub fn reassemble(&self) -> Matrix<u8> {
        let m = self.w11.rows();
        let p = self.w11.cols();
        Matrix::from_fn(m + p, m + p, |r, c| match (r < m, c < p) {
            (true, true) => self.w11[(r, c)],
            (true, false) => self.w12[(r, c - p)],
            (false, true) => self.w21[(r - m, c)],
            (false, false) => self.w22[(r - m, c - p)],
        })
    }
}

impl RestrictedPermutation {
    pub fn new(m: usize, p: usize, w: Vec<usize>) -> Result<Self, CombinatError> {
        check_size(m, p)?;
        if w.len() != m + p {
            return Err(CombinatError::LengthMismatch {
                len: w.len(),
                n: m + p,
            });
        }
        if !is_permutation(&w) {
            return Err(CombinatError::NotPermutation(w));
        }
        for (k, &v) in w.iter().enumerate() {
            let j = k + 1;
            if v + p < j || v > j + m {
                return Err(CombinatError::ShiftBounds { j, m, p });
            }
        }
        Ok(RestrictedPermutation { m, p, w })
    }

    pub fn identity(m: usize, p: usize) -> Result<Self, CombinatError> {
        Self::new(m, p, (1..=m + p).collect())
    }

    /// `[m+1, ..., m+p, 1, ..., m]`, the top of `S`.
    pub fn w_max(m: usize, p: usize) -> Result<Self, CombinatError> {
        Self::new(m, p, (m + 1..=m + p).chain(1..=m).collect())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        self.m + self.p
    }

    pub fn one_line(&self) -> &[usize] {
        &self.w
    }

    /// `w(j)` for 1-based `j`.
    pub fn at(&self, j: usize) -> usize {
        self.w[j - 1]
    }

    pub fn inverse(&self) -> Vec<usize> {
        inverse(&self.w)
    }

    pub fn bruhat_leq(&self, other: &Self) -> Result<bool, CombinatError> {
        bruhat_leq(&self.w, &other.w)
    }

    pub fn block_decompose(&self) -> BlockDecomposition {
        let (m, n) = (self.m, self.n());
        let full = Matrix::from_fn(n, n, |r, c| u8::from(self.w[c] == r + 1));
        let rows_top: Vec<usize> = (0..m).collect();
        let rows_bot: Vec<usize> = (m..n).collect();
        let cols_left: Vec<usize> = (0..self.p).collect();
        let cols_right: Vec<usize> = (self.p..n).collect();
        BlockDecomposition {
            w11: full.submatrix(&rows_top, &cols_left),
            w12: full.submatrix(&rows_top, &cols_right),
            w21: full.submatrix(&rows_bot, &cols_left),
            w22: full.submatrix(&rows_bot, &cols_right),
        }
    }
}

impl fmt::Debug for RestrictedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.w)
    }
}

impl fmt::Display for RestrictedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.w.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Serialize, Deserialize)]
struct PermRepr {
    m: usize,
    p: usize,
    w: Vec<usize>,
}

impl Serialize for RestrictedPermutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PermRepr {
            m: self.m,
            p: self.p,
            w: self.w.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RestrictedPermutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = PermRepr::deserialize(d)?;
        RestrictedPermutation::new(r.m, r.p, r.w).map_err(serde::de::Error::custom)
    }
}

/// Every restricted permutation, in lexicographic one-line order.
pub fn enumerate_restricted_perms(m: usize, p: usize) -> Result<Vec<RestrictedPermutation>, CombinatError> {
    check_size(m, p)?;
    let n = m + p;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    let mut used = vec![false; n + 1];
    fn go(m: usize, p: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<RestrictedPermutation>) {
        let n = m + p;
        let j = cur.len() + 1;
        if j > n {
            out.push(RestrictedPermutation { m, p, w: cur.clone() });
            return;
        }
        let lo = j.saturating_sub(p).max(1);
        let hi = (j + m).min(n);
        for v in lo..=hi {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(m, p, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    go(m, p, &mut cur, &mut used, &mut out);
    Ok(out)
}

/// `|S|` as the permanent of the 0/1 band matrix `[-p <= v - j <= m]`,
/// by Ryser's inclusion-exclusion formula.
pub fn band_permanent(m: usize, p: usize) -> u128 {
    let n = m + p;
    let allowed = |j: usize, v: usize| v + p >= j && v <= j + m;
    let mut total: i128 = 0;
    for set in 1u32..(1 << n) {
        let mut prod: i128 = 1;
        for j in 1..=n {
            let row = (1..=n)
                .filter(|&v| set & (1 << (v - 1)) != 0 && allowed(j, v))
                .count() as i128;
            prod *= row;
            if prod == 0 {
                break;
            }
        }
        let sign = if (n - set.count_ones() as usize) % 2 == 0 {
            1
        } else {
            -1
        };
        total += sign * prod;
    }
    total as u128
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    #[test]
    fn diagram_examples() {
        assert!(is_cauchon(4, 4, [(1, 2), (2, 1), (2, 2)]).unwrap());
        assert!(is_cauchon(3, 5, []).unwrap());
        assert!(!is_cauchon(2, 2, [(2, 2)]).unwrap());
        assert_eq!(
            is_cauchon(2, 2, [(3, 1)]),
            Err(CombinatError::CellOutOfRange {
                i: 3,
                a: 1,
                m: 2,
                p: 2
            })
        );
        assert_eq!(
            CauchonDiagram::new(2, 2, [(2, 2)]),
            Err(CombinatError::NotCauchon { i: 2, a: 2 })
        );
        assert!(CauchonDiagram::all_white(9, 1).is_err());
    }

    /// Naive subset filter over all `2^(mp)` masks.
    fn brute_diagrams(m: usize, p: usize) -> Vec<u64> {
        (0u64..1 << (m * p))
            .filter(|&mask| {
                let cells = (0..m * p)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| (b / p + 1, b % p + 1));
                is_cauchon(m, p, cells).unwrap()
            })
            .collect()
    }

    #[test]
    fn enumeration_matches_subset_filter() {
        for (m, p) in [(1, 1), (1, 3), (2, 2), (2, 3), (3, 2), (3, 3)] {
            let fast: Vec<u64> = enumerate_diagrams(m, p)
                .unwrap()
                .iter()
                .map(|d| d.mask())
                .collect();
            assert_eq!(fast, brute_diagrams(m, p), "{m}x{p}");
            assert_eq!(count_diagrams(m, p).unwrap(), fast.len() as u64);
        }
        assert_eq!(count_diagrams(1, 1).unwrap(), 2);
        assert_eq!(count_diagrams(2, 2).unwrap(), 14);
        assert_eq!(count_diagrams(3, 3).unwrap(), 230);
    }

    fn brute_perms(m: usize, p: usize) -> Vec<Vec<usize>> {
        let n = m + p;
        (1..=n)
            .permutations(n)
            .filter(|w| {
                w.iter().enumerate().all(|(k, &v)| {
                    v as i64 - (k as i64 + 1) >= -(p as i64) && v as i64 - (k as i64 + 1) <= m as i64
                })
            })
            .collect()
    }

    #[test]
    fn perm_enumeration_matches_filter() {
        for (m, p, count) in [(1, 1, 2), (2, 2, 14), (2, 3, 46), (3, 2, 46), (3, 3, 230)] {
            let fast: Vec<Vec<usize>> = enumerate_restricted_perms(m, p)
                .unwrap()
                .into_iter()
                .map(|w| w.one_line().to_vec())
                .collect();
            assert_eq!(fast, brute_perms(m, p));
            assert_eq!(fast.len(), count);
            assert_eq!(band_permanent(m, p), count as u128);
        }
    }

    #[test]
    fn diagram_and_perm_counts_agree_up_to_4x4() {
        for m in 1..=4 {
            for p in 1..=4 {
                let d = count_diagrams(m, p).unwrap();
                assert_eq!(d, enumerate_restricted_perms(m, p).unwrap().len() as u64);
                assert_eq!(d as u128, band_permanent(m, p));
            }
        }
    }

    /// Subword criterion: `w <= z` iff some reduced word of `z` has a
    /// subword whose product is `w`. Used as an oracle at small `n`.
    fn bruhat_subword(w: &[usize], z: &[usize]) -> bool {
        let word = reduced_word(z);
        let n = z.len();
        (0..1usize << word.len()).any(|mask| {
            let mut x: Vec<usize> = (1..=n).collect();
            for (k, &s) in word.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    // right multiplication by s swaps positions s, s+1
                    x.swap(s - 1, s);
                }
            }
            x == w
        })
    }

    fn reduced_word(z: &[usize]) -> Vec<usize> {
        // bubble sort records adjacent transpositions; reversing gives a
        // reduced word for z
        let mut x = z.to_vec();
        let mut word = Vec::new();
        while let Some(k) = (0..x.len().saturating_sub(1)).find(|&k| x[k] > x[k + 1]) {
            x.swap(k, k + 1);
            word.push(k + 1);
        }
        word.reverse();
        word
    }

    #[test]
    fn bruhat_examples() {
        assert!(bruhat_leq(&[2, 1, 3, 4], &[2, 3, 4, 1]).unwrap());
        assert!(bruhat_leq(&[1, 2, 3], &[3, 1, 2]).unwrap());
        assert!(!bruhat_leq(&[3, 1, 2], &[1, 2, 3]).unwrap());
        assert!(bruhat_leq(&[1, 2], &[1, 2, 3]).is_err());
    }

    #[test]
    fn rank_criterion_matches_subword_oracle() {
        for n in 1..=4 {
            let all: Vec<Vec<usize>> = (1..=n).permutations(n).collect();
            for w in &all {
                for z in &all {
                    assert_eq!(bruhat_leq(w, z).unwrap(), bruhat_subword(w, z), "{w:?} {z:?}");
                }
            }
        }
    }

    #[test]
    fn bruhat_is_a_partial_order_on_s() {
        for (m, p) in [(2, 2), (2, 3)] {
            let s = enumerate_restricted_perms(m, p).unwrap();
            for a in &s {
                assert!(a.bruhat_leq(a).unwrap());
                for b in &s {
                    let ab = a.bruhat_leq(b).unwrap();
                    if ab && b.bruhat_leq(a).unwrap() {
                        assert_eq!(a, b);
                    }
                    if ab {
                        for c in &s {
                            if b.bruhat_leq(c).unwrap() {
                                assert!(a.bruhat_leq(c).unwrap());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn s_is_the_interval_below_w_max() {
        for n in 2..=6 {
            for m in 1..n {
                let p = n - m;
                let top = RestrictedPermutation::w_max(m, p).unwrap();
                let in_s: Vec<Vec<usize>> = brute_perms(m, p);
                for w in (1..=n).permutations(n) {
                    let below = bruhat_leq(&w, top.one_line()).unwrap();
                    assert_eq!(below, in_s.contains(&w), "{w:?} m={m} p={p}");
                }
            }
        }
    }

    #[test]
    fn longest_element_translate_of_s() {
        for n in 2..=6 {
            for m in 1..n {
                let p = n - m;
                let wo = longest_element(n);
                // (w_o^p, w_o^m) = [p, ..., 1, p+m, ..., p+1]
                let bottom: Vec<usize> = (1..=p).rev().chain((p + 1..=n).rev()).collect();
                let translated: Vec<Vec<usize>> = brute_perms(m, p)
                    .iter()
                    .map(|w| compose(&wo, w))
                    .sorted()
                    .collect();
                let above: Vec<Vec<usize>> = (1..=n)
                    .permutations(n)
                    .filter(|w| bruhat_leq(&bottom, w).unwrap())
                    .collect();
                assert_eq!(translated, above, "m={m} p={p}");
            }
        }
    }

    #[test]
    fn blocks() {
        let w = RestrictedPermutation::new(3, 4, vec![3, 1, 4, 2, 7, 6, 5]).unwrap();
        let b = w.block_decompose();
        assert_eq!(
            b.reassemble(),
            Matrix::from_fn(7, 7, |r, c| u8::from(w.at(c + 1) == r + 1))
        );
        // w11 has ones at (w(l), l) for l <= p with w(l) <= m
        let ones: Vec<(usize, usize)> = (0..3)
            .flat_map(|r| (0..4).map(move |c| (r, c)))
            .filter(|&(r, c)| b.w11[(r, c)] == 1)
            .map(|(r, c)| (r + 1, c + 1))
            .collect();
        assert_eq!(ones, vec![(1, 2), (2, 4), (3, 1)]);

        let id = RestrictedPermutation::identity(2, 2).unwrap().block_decompose();
        assert_eq!(id.w11, Matrix::from_rows(vec![vec![1, 0], vec![0, 1]]));
        assert!(id.w21.iter().all(|&x| x == 0));

        let top = RestrictedPermutation::w_max(2, 3).unwrap().block_decompose();
        assert!(top.w11.iter().all(|&x| x == 0));
        assert!(top.w22.iter().all(|&x| x == 0));
    }

    #[test]
    fn shift_bounds_are_enforced() {
        assert_eq!(
            RestrictedPermutation::new(1, 1, vec![1, 2]).map(|w| w.one_line().to_vec()),
            Ok(vec![1, 2])
        );
        assert!(matches!(
            RestrictedPermutation::new(1, 2, vec![3, 1, 2]),
            Err(CombinatError::ShiftBounds { j: 1, .. })
        ));
        assert!(RestrictedPermutation::new(2, 2, vec![1, 1, 2, 3]).is_err());
    }

    #[test]
    fn index_set_order() {
        assert!(index_set_leq(&[1, 3], &[2, 3]).unwrap());
        assert!(!index_set_leq(&[2], &[1]).unwrap());
        assert!(index_set_leq(&[1, 2, 4], &[1, 3, 4]).unwrap());
        assert!(index_set_leq(&[1], &[1, 2]).is_err());
        assert!(IndexSet::new(vec![2, 1]).is_err());
        assert_eq!(subsets(4, 2).len(), 6);
    }

    #[test]
    fn json_forms() {
        let d = CauchonDiagram::new(4, 4, [(1, 2), (2, 1), (2, 2)]).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"m":4,"p":4,"black":[[1,2],[2,1],[2,2]]}"#);
        assert_eq!(serde_json::from_str::<CauchonDiagram>(&s).unwrap(), d);
        assert!(serde_json::from_str::<CauchonDiagram>(r#"{"m":2,"p":2,"black":[[2,2]]}"#).is_err());

        let w = RestrictedPermutation::new(3, 4, vec![3, 1, 4, 2, 7, 6, 5]).unwrap();
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"m":3,"p":4,"w":[3,1,4,2,7,6,5]}"#);
        assert_eq!(serde_json::from_str::<RestrictedPermutation>(&s).unwrap(), w);
    }
}
