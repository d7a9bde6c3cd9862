//! Minor identifiers `[I|L]`, their evaluation, and canonical minor families.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{EntryDomain, Matrix};
use crate::combinat::{subsets, IndexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinorError {
    #[error("minor {id} does not fit a {rows}x{cols} matrix")]
    OutOfRange { id: String, rows: usize, cols: usize },
    #[error("row and column sets of a minor must be nonempty and of equal size")]
    BadShape,
    #[error("cannot parse minor {0:?}")]
    Parse(String),
}

/// `[I|L]`: the determinant on rows `I` and columns `L` (both 1-based).
///
/// Ordered by size, then rows lexicographically, then columns.
/// Serialized as its text form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MinorId {
    pub rows: IndexSet,
    pub cols: IndexSet,
}

impl MinorId {
    pub fn new(rows: &[usize], cols: &[usize]) -> Result<Self, MinorError> {
        let rows = IndexSet::new(rows.to_vec()).map_err(|_| MinorError::BadShape)?;
        let cols = IndexSet::new(cols.to_vec()).map_err(|_| MinorError::BadShape)?;
        if rows.is_empty() || rows.len() != cols.len() {
            return Err(MinorError::BadShape);
        }
        Ok(MinorId { rows, cols })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Bottom-right entry `(i_l, a_l)`.
    pub fn last_entry(&self) -> (usize, usize) {
        (*self.rows.last().unwrap(), *self.cols.last().unwrap())
    }

    pub fn transpose(&self) -> Self {
        MinorId {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }

    pub fn fits(&self, m: usize, p: usize) -> bool {
        self.rows.last().is_some_and(|&r| r <= m) && self.cols.last().is_some_and(|&c| c <= p)
    }
}

impl Ord for MinorId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.rows.cmp(&other.rows))
            .then_with(|| self.cols.cmp(&other.cols))
    }
}

impl PartialOrd for MinorId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for MinorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}|{}]", join(&self.rows), join(&self.cols))
    }
}

impl fmt::Debug for MinorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for MinorId {
    type Err = MinorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || MinorError::Parse(s.to_string());
        let body = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(err)?;
        let (r, c) = body.split_once('|').ok_or_else(err)?;
        let parse = |t: &str| -> Result<Vec<usize>, MinorError> {
            t.split(',')
                .map(|x| x.trim().parse().map_err(|_| err()))
                .collect()
        };
        MinorId::new(&parse(r)?, &parse(c)?).map_err(|_| err())
    }
}

impl Serialize for MinorId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MinorId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Every nonempty minor of an `m x p` matrix in canonical order.
pub fn all_minor_ids(m: usize, p: usize) -> Vec<MinorId> {
    let mut out = Vec::new();
    for k in 1..=m.min(p) {
        let cols = subsets(p, k);
        for rows in subsets(m, k) {
            for c in &cols {
                out.push(MinorId {
                    rows: rows.clone(),
                    cols: c.clone(),
                });
            }
        }
    }
    out
}

fn check_fits<T>(x: &Matrix<T>, id: &MinorId) -> Result<(), MinorError> {
    if id.fits(x.rows(), x.cols()) {
        Ok(())
    } else {
        Err(MinorError::OutOfRange {
            id: id.to_string(),
            rows: x.rows(),
            cols: x.cols(),
        })
    }
}

/// Exact value of `[I|L](x)`.
pub fn eval_minor<T: EntryDomain>(x: &Matrix<T>, id: &MinorId) -> Result<T, MinorError> {
    check_fits(x, id)?;
    let rows: Vec<usize> = id.rows.iter().map(|r| r - 1).collect();
    let cols: Vec<usize> = id.cols.iter().map(|c| c - 1).collect();
    let sub = x.submatrix(&rows, &cols);
    Ok(crate::arith::det_exact(&sub).expect("nonempty square submatrix"))
}

/// Every nonempty minor of `x`, by expansion along the first row with
/// memoisation on (row set, column set) bitmasks.
///
/// Uses only ring operations, so it never divides.
pub fn all_minors<T: EntryDomain>(x: &Matrix<T>) -> BTreeMap<MinorId, T> {
    let (m, p) = (x.rows(), x.cols());
    assert!(m <= 32 && p <= 32, "matrix too large for bitmask minors");
    let mut memo: HashMap<(u32, u32), T> = HashMap::new();
    let mut out = BTreeMap::new();
    let mut by_size: Vec<Vec<(u32, u32)>> = vec![Vec::new(); m.min(p) + 1];
    for id in all_minor_ids(m, p) {
        let rm = id.rows.iter().fold(0u32, |a, r| a | 1 << (r - 1));
        let cm = id.cols.iter().fold(0u32, |a, c| a | 1 << (c - 1));
        by_size[id.size()].push((rm, cm));
    }
    for (k, group) in by_size.iter().enumerate().skip(1) {
        for &(rm, cm) in group {
            let top = rm.trailing_zeros() as usize;
            let value = if k == 1 {
                x.get(top, cm.trailing_zeros() as usize).clone()
            } else {
                let rest_rows = rm & (rm - 1);
                let mut acc = x.get(0, 0).zero_like();
                let mut sign_plus = true;
                let mut bits = cm;
                while bits != 0 {
                    let c = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let entry = x.get(top, c);
                    if !entry.vanishes() {
                        let sub = &memo[&(rest_rows, cm & !(1 << c))];
                        let term = entry.mul(sub);
                        acc = if sign_plus { acc.add(&term) } else { acc.sub(&term) };
                    }
                    sign_plus = !sign_plus;
                }
                acc
            };
            memo.insert((rm, cm), value);
        }
    }
    for ((rm, cm), v) in memo {
        let rows = (0..m).filter(|r| rm >> r & 1 == 1).map(|r| r + 1).collect();
        let cols = (0..p).filter(|c| cm >> c & 1 == 1).map(|c| c + 1).collect();
        out.insert(
            MinorId {
                rows: IndexSet::new(rows).unwrap(),
                cols: IndexSet::new(cols).unwrap(),
            },
            v,
        );
    }
    out
}

/// A set of minors of an `m x p` matrix, kept in canonical order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MinorFamily {
    m: usize,
    p: usize,
    members: BTreeSet<MinorId>,
}

impl MinorFamily {
    pub fn empty(m: usize, p: usize) -> Self {
        MinorFamily {
            m,
            p,
            members: BTreeSet::new(),
        }
    }

    pub fn all(m: usize, p: usize) -> Self {
        MinorFamily {
            m,
            p,
            members: all_minor_ids(m, p).into_iter().collect(),
        }
    }

    pub fn from_ids(m: usize, p: usize, ids: impl IntoIterator<Item = MinorId>) -> Result<Self, MinorError> {
        let mut fam = Self::empty(m, p);
        for id in ids {
            fam.insert(id)?;
        }
        Ok(fam)
    }

    /// Parses minors in text form, e.g. `["[1|3]", "[1,2|1,2]"]`.
    pub fn parse(m: usize, p: usize, ids: &[&str]) -> Result<Self, MinorError> {
        let ids = ids
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<MinorId>, _>>()?;
        Self::from_ids(m, p, ids)
    }

    pub fn insert(&mut self, id: MinorId) -> Result<bool, MinorError> {
        if !id.fits(self.m, self.p) {
            return Err(MinorError::OutOfRange {
                id: id.to_string(),
                rows: self.m,
                cols: self.p,
            });
        }
        Ok(self.members.insert(id))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, id: &MinorId) -> bool {
        self.members.contains(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &MinorId> {
        self.members.iter()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn union(&self, other: &Self) -> Self {
        assert_eq!((self.m, self.p), (other.m, other.p), "family shapes differ");
        MinorFamily {
            m: self.m,
            p: self.p,
            members: self.members.union(&other.members).cloned().collect(),
        }
    }

    /// The family of the transposed matrix.
    pub fn transpose(&self) -> Self {
        MinorFamily {
            m: self.p,
            p: self.m,
            members: self.members.iter().map(MinorId::transpose).collect(),
        }
    }

    /// Canonical serialization; equal families give equal strings.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("family serializes")
    }

    pub fn from_json(m: usize, p: usize, s: &str) -> Result<Self, MinorError> {
        let ids: Vec<MinorId> = serde_json::from_str(s).map_err(|e| MinorError::Parse(e.to_string()))?;
        Self::from_ids(m, p, ids)
    }
}

impl Serialize for MinorFamily {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.members.iter())
    }
}

impl fmt::Debug for MinorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members.iter()).finish()
    }
}

impl fmt::Display for MinorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// All minors of `x` that are exactly zero.
pub fn vanishing_family<T: EntryDomain>(x: &Matrix<T>) -> MinorFamily {
    MinorFamily {
        m: x.rows(),
        p: x.cols(),
        members: all_minors(x)
            .into_iter()
            .filter(|(_, v)| v.vanishes())
            .map(|(id, _)| id)
            .collect(),
    }
}
