//! The restoration algorithm and its inverse, the deleting derivations
//! algorithm, over any [`EntryDomain`].
//!
//! Steps are indexed by `E = ([1,m] x [1,p] ∪ {(m,p+1)}) \ {(1,1)}` in
//! lexicographic order. Step `(j,b)` uses the pivot at `(j,b)` to update the
//! entries strictly above and to the left of it:
//!
//! ```text
//! restore: x[i,a] += x[i,b] * x[j,a] / x[j,b]     (i < j, a < b)
//! delete:  x[i,a] -= x[i,b] * x[j,a] / x[j,b]
//! ```
//!
//! and does nothing when the pivot is zero.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::arith::{ArithError, EntryDomain, Matrix};
use crate::combinat::CauchonDiagram;
use crate::minors::{all_minors, MinorId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RestorationError {
    #[error("step {step} is not an interior step of a {m}x{p} run")]
    NotInterior { step: StepIndex, m: usize, p: usize },
    #[error("step {step}: {source}")]
    Arith { step: StepIndex, source: ArithError },
    #[error("empty matrix")]
    Empty,
}

/// A step label `(j, b)`, ordered lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StepIndex {
    pub j: usize,
    pub b: usize,
}

impl StepIndex {
    pub const fn new(j: usize, b: usize) -> Self {
        StepIndex { j, b }
    }
}

impl fmt::Display for StepIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.j, self.b)
    }
}

/// `E` in ascending order; the last element is `(m, p+1)`.
pub fn steps(m: usize, p: usize) -> Vec<StepIndex> {
    (1..=m)
        .flat_map(|j| (1..=p).map(move |b| StepIndex::new(j, b)))
        .filter(|&r| r != StepIndex::new(1, 1))
        .chain(std::iter::once(StepIndex::new(m, p + 1)))
        .collect()
}

/// `E°`: the steps that have a successor.
pub fn interior_steps(m: usize, p: usize) -> Vec<StepIndex> {
    let mut e = steps(m, p);
    e.pop();
    e
}

pub fn is_interior(m: usize, p: usize, r: StepIndex) -> bool {
    (1..=m).contains(&r.j) && (1..=p).contains(&r.b) && r != StepIndex::new(1, 1)
}

/// `r+`, the next element of `E`.
pub fn successor(m: usize, p: usize, r: StepIndex) -> Option<StepIndex> {
    if !is_interior(m, p, r) {
        None
    } else if r.b < p {
        Some(StepIndex::new(r.j, r.b + 1))
    } else if r.j < m {
        Some(StepIndex::new(r.j + 1, 1))
    } else {
        Some(StepIndex::new(m, p + 1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    Restore,
    Delete,
}

fn step<T: EntryDomain>(x: &Matrix<T>, r: StepIndex, dir: Direction) -> Result<Matrix<T>, RestorationError> {
    let (m, p) = (x.rows(), x.cols());
    if !is_interior(m, p, r) {
        return Err(RestorationError::NotInterior { step: r, m, p });
    }
    let (j, b) = (r.j - 1, r.b - 1);
    let u = x.get(j, b);
    let mut out = x.clone();
    if u.vanishes() {
        return Ok(out);
    }
    for i in 0..j {
        let xib = x.get(i, b);
        if xib.vanishes() {
            continue;
        }
        for a in 0..b {
            let xja = x.get(j, a);
            if xja.vanishes() {
                continue;
            }
            let corr = xib
                .mul(xja)
                .div_exact(u)
                .map_err(|source| RestorationError::Arith { step: r, source })?;
            let v = match dir {
                Direction::Restore => x.get(i, a).add(&corr),
                Direction::Delete => x.get(i, a).sub(&corr),
            };
            out.set(i, a, v);
        }
    }
    Ok(out)
}

/// `X^(r+)` from `X^(r)`.
pub fn restore_step<T: EntryDomain>(x: &Matrix<T>, r: StepIndex) -> Result<Matrix<T>, RestorationError> {
    step(x, r, Direction::Restore)
}

/// `X^(r)` from `X^(r+)`.
pub fn delete_step<T: EntryDomain>(x: &Matrix<T>, r: StepIndex) -> Result<Matrix<T>, RestorationError> {
    step(x, r, Direction::Delete)
}

/// Every intermediate matrix of a run, keyed by step label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixTrace<T> {
    m: usize,
    p: usize,
    matrices: BTreeMap<StepIndex, Matrix<T>>,
}

impl<T> MatrixTrace<T> {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn get(&self, r: StepIndex) -> Option<&Matrix<T>> {
        self.matrices.get(&r)
    }

    /// The matrix at the smallest step, normally `(1,2)`.
    pub fn first(&self) -> &Matrix<T> {
        self.matrices.values().next().expect("trace is never empty")
    }

    /// The matrix at `(m, p+1)`.
    pub fn last(&self) -> &Matrix<T> {
        self.matrices.values().next_back().expect("trace is never empty")
    }

    pub fn iter(&self) -> impl Iterator<Item = (StepIndex, &Matrix<T>)> {
        self.matrices.iter().map(|(r, x)| (*r, x))
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }
}

/// Runs the restoration algorithm from `X^(min E) = x` to `X^(m,p+1)`.
///
/// When `p = 1` the label `(1,2)` is not in `E`, so the input is stored under
/// the smallest label instead.
pub fn restore<T: EntryDomain>(x: &Matrix<T>) -> Result<MatrixTrace<T>, RestorationError> {
    let (m, p) = (x.rows(), x.cols());
    if m == 0 || p == 0 {
        return Err(RestorationError::Empty);
    }
    let e = steps(m, p);
    let mut matrices = BTreeMap::new();
    let mut cur = x.clone();
    for w in e.windows(2) {
        let next = restore_step(&cur, w[0])?;
        matrices.insert(w[0], cur);
        cur = next;
    }
    matrices.insert(*e.last().unwrap(), cur);
    Ok(MatrixTrace { m, p, matrices })
}

/// Runs the deleting derivations algorithm from `X^(m,p+1) = x_bar` down to
/// the smallest label.
pub fn delete_derivations<T: EntryDomain>(x_bar: &Matrix<T>) -> Result<MatrixTrace<T>, RestorationError> {
    let (m, p) = (x_bar.rows(), x_bar.cols());
    if m == 0 || p == 0 {
        return Err(RestorationError::Empty);
    }
    let e = steps(m, p);
    let mut matrices = BTreeMap::new();
    let mut cur = x_bar.clone();
    for w in e.windows(2).rev() {
        let prev = delete_step(&cur, w[0])?;
        matrices.insert(w[1], cur);
        cur = prev;
    }
    matrices.insert(e[0], cur);
    Ok(MatrixTrace { m, p, matrices })
}

/// The zero pattern of `x` as a diagram, if it is one.
pub fn cauchon_diagram_of<T: EntryDomain>(x: &Matrix<T>) -> Option<CauchonDiagram> {
    let cells = (0..x.rows())
        .flat_map(|r| (0..x.cols()).map(move |c| (r, c)))
        .filter(|&(r, c)| x.get(r, c).vanishes())
        .map(|(r, c)| (r + 1, c + 1));
    CauchonDiagram::new(x.rows(), x.cols(), cells).ok()
}

/// Whether the zero pattern of `x` is a Cauchon diagram.
pub fn is_cauchon_matrix<T: EntryDomain>(x: &Matrix<T>) -> bool {
    cauchon_diagram_of(x).is_some()
}

fn entry_lt(id: &MinorId, r: StepIndex) -> bool {
    let (i, a) = id.last_entry();
    StepIndex::new(i, a) < r
}

/// First `(r, minor)` where `minor` vanishes on `X^(r+)` but not on `X^(r)`,
/// among minors whose bottom-right entry precedes `r`.
pub fn h_invariance_violation<T: EntryDomain>(trace: &MatrixTrace<T>) -> Option<(StepIndex, MinorId)> {
    let minors: BTreeMap<StepIndex, BTreeMap<MinorId, T>> =
        trace.iter().map(|(r, x)| (r, all_minors(x))).collect();
    for r in interior_steps(trace.m, trace.p) {
        let (Some(now), Some(next)) = (
            minors.get(&r),
            successor(trace.m, trace.p, r).and_then(|s| minors.get(&s)),
        ) else {
            continue;
        };
        for (id, v) in next {
            if entry_lt(id, r) && v.vanishes() && !now[id].vanishes() {
                return Some((r, id.clone()));
            }
        }
    }
    None
}

/// Whether `x` is H-invariant: along its restoration, a minor ending before
/// step `r` that vanishes at `r+` already vanishes at `r`.
pub fn is_h_invariant<T: EntryDomain>(x: &Matrix<T>) -> Result<bool, RestorationError> {
    Ok(h_invariance_violation(&restore(x)?).is_none())
}
