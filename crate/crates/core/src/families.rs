//! The minor families `M(w)` of restricted permutations, with the rank and
//! Bruhat-cell predicates that serve as independent cross-checks.

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::arith::{rank, Matrix, Rational};
use crate::combinat::{index_set_leq, RestrictedPermutation};
use crate::minors::{all_minor_ids, MinorFamily, MinorId};

/// Partial injection from columns `1..=cols` to rows `1..=rows`; the
/// bijection carried by a partial permutation matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartialPermutation {
    rows: usize,
    cols: usize,
    /// `map[j-1] = Some(i)` when the entry `(i, j)` is 1.
    map: Vec<Option<usize>>,
}

impl PartialPermutation {
    /// Returns `None` if `map` is not injective or points outside `1..=rows`.
    pub fn new(rows: usize, map: Vec<Option<usize>>) -> Option<Self> {
        let mut seen = vec![false; rows + 1];
        for &i in map.iter().flatten() {
            if i == 0 || i > rows || std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(PartialPermutation {
            rows,
            cols: map.len(),
            map,
        })
    }

    /// Reads a 0/1 matrix with at most one 1 per row and column.
    pub fn from_matrix(x: &Matrix<u8>) -> Option<Self> {
        let mut map = vec![None; x.cols()];
        for c in 0..x.cols() {
            for r in 0..x.rows() {
                match x[(r, c)] {
                    0 => {}
                    1 if map[c].is_none() => map[c] = Some(r + 1),
                    _ => return None,
                }
            }
        }
        Self::new(x.rows(), map)
    }

    pub fn to_matrix(&self) -> Matrix<u8> {
        Matrix::from_fn(self.rows, self.cols, |r, c| u8::from(self.map[c] == Some(r + 1)))
    }

    pub fn to_rational(&self) -> Matrix<Rational> {
        self.to_matrix().map(|&b| Rational::from_integer(b.into()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn apply(&self, j: usize) -> Option<usize> {
        self.map[j - 1]
    }

    pub fn domain(&self) -> Vec<usize> {
        (1..=self.cols).filter(|&j| self.map[j - 1].is_some()).collect()
    }

    pub fn range(&self) -> Vec<usize> {
        self.map.iter().flatten().copied().sorted().collect()
    }

    pub fn rank(&self) -> usize {
        self.map.iter().flatten().count()
    }

    /// The transpose, i.e. the inverse bijection.
    pub fn transpose(&self) -> Self {
        let mut map = vec![None; self.rows];
        for (c, i) in self.map.iter().enumerate() {
            if let Some(i) = i {
                map[i - 1] = Some(c + 1);
            }
        }
        PartialPermutation {
            rows: self.cols,
            cols: self.rows,
            map,
        }
    }

    fn inverse_at(&self, i: usize) -> Option<usize> {
        self.map.iter().position(|&x| x == Some(i)).map(|c| c + 1)
    }

    /// Every `rows x cols` partial permutation.
    pub fn enumerate(rows: usize, cols: usize) -> Vec<Self> {
        let mut out = Vec::new();
        let mut map = vec![None; cols];
        let mut used = vec![false; rows + 1];
        fn go(
            rows: usize,
            c: usize,
            map: &mut Vec<Option<usize>>,
            used: &mut Vec<bool>,
            out: &mut Vec<PartialPermutation>,
        ) {
            if c == map.len() {
                out.push(PartialPermutation {
                    rows,
                    cols: map.len(),
                    map: map.clone(),
                });
                return;
            }
            map[c] = None;
            go(rows, c + 1, map, used, out);
            for i in 1..=rows {
                if !used[i] {
                    used[i] = true;
                    map[c] = Some(i);
                    go(rows, c + 1, map, used, out);
                    used[i] = false;
                }
            }
            map[c] = None;
        }
        go(rows, 0, &mut map, &mut used, &mut out);
        out
    }
}

/// Whether some `k`-subset `L` of `pool` has `L <= upper` and
/// `lower <= sort(f(L))`, where `k = |upper|`.
///
/// `L <= upper` forces every element of `L` to be at most `max(upper)`, which
/// prunes the pool before subsets are enumerated.
fn exists_subset(pool: &[usize], upper: &[usize], lower: &[usize], f: impl Fn(usize) -> usize) -> bool {
    let k = upper.len();
    let bound = *upper.last().unwrap();
    let pool: Vec<usize> = pool.iter().copied().filter(|&x| x <= bound).collect();
    pool.into_iter().combinations(k).any(|l| {
        if !index_set_leq(&l, upper).unwrap() {
            return false;
        }
        let image: Vec<usize> = l.iter().map(|&x| f(x)).sorted().collect();
        index_set_leq(lower, &image).unwrap()
    })
}

/// Condition `k` (1 to 4) of the definition of `M(w)` for the minor `id`.
pub fn mw_condition(w: &RestrictedPermutation, id: &MinorId, k: u8) -> bool {
    let (m, p, n) = (w.m(), w.p(), w.n());
    let (rows, cols) = (id.rows.as_slice(), id.cols.as_slice());
    match k {
        1 => {
            // L in [1,p] with w(L) in [1,m]; compare I with w_o^m w(L).
            let dom: Vec<usize> = (1..=p).filter(|&l| w.at(l) <= m).collect();
            !exists_subset(&dom, cols, rows, |l| m + 1 - w.at(l))
        }
        2 => {
            // L in [1,m] with w(N+1-l) >= m+1; compare m+Lambda with w w_o^N(L).
            let dom: Vec<usize> = (1..=m).filter(|&l| w.at(n + 1 - l) > m).collect();
            let shifted: Vec<usize> = cols.iter().map(|a| m + a).collect();
            !exists_subset(&dom, rows, &shifted, |l| w.at(n + 1 - l))
        }
        3 => (1..=p).any(|r| {
            (r..=p).any(|s| {
                let hit = cols.iter().filter(|&&a| r <= a && a <= s).count();
                let free = (r..=s).filter(|&j| !(m + r..=m + s).contains(&w.at(j))).count();
                hit > free
            })
        }),
        4 => (1..=m).any(|r| {
            (r..=m).any(|s| {
                let hit = rows.iter().filter(|&&i| r <= i && i <= s).count();
                let free = (n + 1 - s..=n + 1 - r)
                    .filter(|&j| !(m + 1 - s..=m + 1 - r).contains(&w.at(j)))
                    .count();
                hit > free
            })
        }),
        _ => panic!("M(w) has conditions 1 to 4, not {k}"),
    }
}

/// The minors of each type (index 0 holds type 1, and so on).
pub fn mw_by_type(w: &RestrictedPermutation) -> [MinorFamily; 4] {
    let (m, p) = (w.m(), w.p());
    let mut out: [MinorFamily; 4] = std::array::from_fn(|_| MinorFamily::empty(m, p));
    for id in all_minor_ids(m, p) {
        for k in 1..=4u8 {
            if mw_condition(w, &id, k) {
                out[k as usize - 1].insert(id.clone()).unwrap();
            }
        }
    }
    out
}

/// `M(w)`: every nonempty minor satisfying at least one of the four
/// conditions.
pub fn compute_mw(w: &RestrictedPermutation) -> MinorFamily {
    let (m, p) = (w.m(), w.p());
    let ids = all_minor_ids(m, p)
        .into_iter()
        .filter(|id| (1..=4).any(|k| mw_condition(w, id, k)));
    MinorFamily::from_ids(m, p, ids).unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BruhatSign {
    /// Upper-triangular Borels on both sides.
    Plus,
    /// Lower-triangular Borels on both sides.
    Minus,
}

/// Whether `[I|L]` vanishes on the Bruhat cell of `w`, decided
/// combinatorially.
///
/// Plus: `I` is not `<= w(L)` for any `L` in `dom(w)` with `L <= Lambda`.
/// Minus: `Lambda` is not `<= w^-1(L)` for any `L` in `rng(w)` with `L <= I`.
pub fn bruhat_cell_vanishes(w: &PartialPermutation, id: &MinorId, sign: BruhatSign) -> bool {
    let (rows, cols) = (id.rows.as_slice(), id.cols.as_slice());
    match sign {
        BruhatSign::Plus => !exists_subset(&w.domain(), cols, rows, |l| w.apply(l).unwrap()),
        BruhatSign::Minus => !exists_subset(&w.range(), rows, cols, |l| w.inverse_at(l).unwrap()),
    }
}

/// The plus predicate in its dual form: `Lambda` is not `>= w^-1(L')` for any
/// `L'` in `rng(w)` with `L' >= I`.
pub fn bruhat_cell_vanishes_dual(w: &PartialPermutation, id: &MinorId) -> bool {
    let k = id.size();
    let (rows, cols) = (id.rows.as_slice(), id.cols.as_slice());
    !w.range().into_iter().combinations(k).any(|lp| {
        if !index_set_leq(rows, &lp).unwrap() {
            return false;
        }
        let pre: Vec<usize> = lp.iter().map(|&i| w.inverse_at(i).unwrap()).sorted().collect();
        index_set_leq(&pre, cols).unwrap()
    })
}

/// `w_o^m w11` as a partial permutation: column `l` goes to row
/// `m+1-w(l)` whenever `w(l) <= m`.
pub fn wo_w11(w: &RestrictedPermutation) -> PartialPermutation {
    let m = w.m();
    let map = (1..=w.p())
        .map(|l| (w.at(l) <= m).then(|| m + 1 - w.at(l)))
        .collect();
    PartialPermutation::new(m, map).unwrap()
}

/// `w_o^m w22^T` as a partial permutation: column `b` goes to row `m+1-a`
/// whenever `w(p+a) = m+b`.
pub fn wo_w22t(w: &RestrictedPermutation) -> PartialPermutation {
    let (m, p) = (w.m(), w.p());
    let map = (1..=p)
        .map(|b| (1..=m).find(|&a| w.at(p + a) == m + b).map(|a| m + 1 - a))
        .collect();
    PartialPermutation::new(m, map).unwrap()
}

/// Ranks of corner submatrices, `table[r-1][s-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankProfile {
    pub table: Vec<Vec<usize>>,
}

impl RankProfile {
    /// `rank x[r..m; 1..s]` for all `r, s`.
    pub fn lower_left(x: &Matrix<Rational>) -> Self {
        let (m, p) = (x.rows(), x.cols());
        let table = (1..=m)
            .map(|r| {
                (1..=p)
                    .map(|s| rank(&x.submatrix(&(r - 1..m).collect_vec(), &(0..s).collect_vec())))
                    .collect()
            })
            .collect();
        RankProfile { table }
    }

    /// `rank x[1..r; s..p]` for all `r, s`.
    pub fn upper_right(x: &Matrix<Rational>) -> Self {
        let (m, p) = (x.rows(), x.cols());
        let table = (1..=m)
            .map(|r| {
                (1..=p)
                    .map(|s| rank(&x.submatrix(&(0..r).collect_vec(), &(s - 1..p).collect_vec())))
                    .collect()
            })
            .collect();
        RankProfile { table }
    }

    pub fn at(&self, r: usize, s: usize) -> usize {
        self.table[r - 1][s - 1]
    }

    /// Pointwise `self <= other`.
    pub fn dominated_by(&self, other: &Self) -> bool {
        self.table
            .iter()
            .flatten()
            .zip(other.table.iter().flatten())
            .all(|(a, b)| a <= b)
    }
}

fn to_q(x: &Matrix<u8>) -> Matrix<Rational> {
    x.map(|&b| Rational::from_integer(b.into()))
}

fn range_rank(
    x: &Matrix<Rational>,
    rows: std::ops::RangeInclusive<usize>,
    cols: std::ops::RangeInclusive<usize>,
) -> usize {
    let rs: Vec<usize> = rows.map(|r| r - 1).collect();
    let cs: Vec<usize> = cols.map(|c| c - 1).collect();
    rank(&x.submatrix(&rs, &cs))
}

/// Rank-form bound of condition 3: `s+1-r - rank w21[r..p; r..s]`.
pub fn condition3_bound(w: &RestrictedPermutation, r: usize, s: usize) -> usize {
    let w21 = to_q(&w.block_decompose().w21);
    s + 1 - r - range_rank(&w21, r..=w.p(), r..=s)
}

/// Rank-form bound of condition 4:
/// `s+1-r - rank (w_o^m w12 w_o^m)[r..s; 1..s]`.
pub fn condition4_bound(w: &RestrictedPermutation, r: usize, s: usize) -> usize {
    let m = w.m();
    let w12 = w.block_decompose().w12;
    let flipped = Matrix::from_fn(m, m, |i, j| {
        Rational::from_integer(w12[(m - 1 - i, m - 1 - j)].into())
    });
    s + 1 - r - range_rank(&flipped, r..=s, 1..=s)
}

/// Whether `x` satisfies the four rank conditions describing the closure of
/// the orbit indexed by `w` (conditions 3 and 4 over their extended ranges).
pub fn closure_rank_conditions(w: &RestrictedPermutation, x: &Matrix<Rational>) -> bool {
    let (m, p) = (w.m(), w.p());
    assert_eq!((x.rows(), x.cols()), (m, p), "matrix shape");
    let c1 = RankProfile::lower_left(x).dominated_by(&RankProfile::lower_left(&wo_w11(w).to_rational()));
    let c2 = RankProfile::upper_right(x).dominated_by(&RankProfile::upper_right(&wo_w22t(w).to_rational()));
    let c3 = (1..=p).all(|r| (r..=p).all(|s| range_rank(x, 1..=m, r..=s) <= condition3_bound(w, r, s)));
    let c4 = (1..=m).all(|r| (r..=m).all(|s| range_rank(x, r..=s, 1..=p) <= condition4_bound(w, r, s)));
    c1 && c2 && c3 && c4
}

/// The 0/1 matrix with a 1 at `(i_k, lambda_k)` for each `k`; the minor
/// `id` takes the value 1 on it.
pub fn witness_matrix(m: usize, p: usize, id: &MinorId) -> Matrix<Rational> {
    let mut x = Matrix::filled(m, p, Rational::zero());
    for (&i, &a) in id.rows.iter().zip(id.cols.iter()) {
        x.set(i - 1, a - 1, Rational::one());
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::enumerate_restricted_perms;
    use crate::minors::eval_minor;

    fn perm(m: usize, p: usize, w: &[usize]) -> RestrictedPermutation {
        RestrictedPermutation::new(m, p, w.to_vec()).unwrap()
    }

    fn fam(m: usize, p: usize, ids: &[&str]) -> MinorFamily {
        MinorFamily::parse(m, p, ids).unwrap()
    }

    #[test]
    fn example_a_by_type() {
        let w = perm(3, 4, &[3, 1, 4, 2, 7, 6, 5]);
        assert_eq!(
            wo_w11(&w).to_matrix(),
            Matrix::from_rows(vec![vec![1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 1, 0, 0]])
        );
        assert_eq!(
            wo_w22t(&w).to_matrix(),
            Matrix::from_rows(vec![vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]])
        );
        let [t1, t2, t3, t4] = mw_by_type(&w);
        assert_eq!(
            t1,
            fam(
                3,
                4,
                &[
                    "[2|1]",
                    "[3|1]",
                    "[2,3|1,2]",
                    "[2,3|1,3]",
                    "[2,3|2,3]",
                    "[2,3|1,4]",
                    "[1,2,3|1,2,3]"
                ]
            )
        );
        assert_eq!(
            t2,
            fam(
                3,
                4,
                &[
                    "[1|3]",
                    "[1|4]",
                    "[2|4]",
                    "[1,2|1,4]",
                    "[1,2|2,4]",
                    "[1,2|3,4]",
                    "[1,3|3,4]"
                ]
            )
        );
        assert_eq!(t3, fam(3, 4, &["[1,2,3|1,2,3]"]));
        assert!(t4.is_empty());
        assert_eq!(compute_mw(&w).len(), 14);
    }

    #[test]
    fn identity_and_top() {
        for (m, p) in [(1, 1), (2, 2), (2, 3), (3, 2), (3, 3)] {
            assert!(compute_mw(&RestrictedPermutation::identity(m, p).unwrap()).is_empty());
            assert_eq!(
                compute_mw(&RestrictedPermutation::w_max(m, p).unwrap()),
                MinorFamily::all(m, p)
            );
        }
    }

    #[test]
    fn bruhat_predicate_examples() {
        // rank 1 partial permutation: every 2x2 minor vanishes
        let w = PartialPermutation::new(2, vec![Some(1), None]).unwrap();
        let big: MinorId = "[1,2|1,2]".parse().unwrap();
        assert!(bruhat_cell_vanishes(&w, &big, BruhatSign::Plus));
        assert!(bruhat_cell_vanishes(&w, &big, BruhatSign::Minus));
        let id = PartialPermutation::new(2, vec![Some(1), Some(2)]).unwrap();
        assert!(!bruhat_cell_vanishes(
            &id,
            &"[1|1]".parse().unwrap(),
            BruhatSign::Plus
        ));
        // upper-triangular orbit of the identity kills the strictly lower entry
        assert!(bruhat_cell_vanishes(
            &id,
            &"[2|1]".parse().unwrap(),
            BruhatSign::Plus
        ));
        assert!(!bruhat_cell_vanishes(
            &id,
            &"[1|2]".parse().unwrap(),
            BruhatSign::Plus
        ));
        assert!(bruhat_cell_vanishes(
            &id,
            &"[1|2]".parse().unwrap(),
            BruhatSign::Minus
        ));
    }

    #[test]
    fn partial_permutations_enumerate() {
        // sum_k C(2,k)^2 k! = 1 + 4 + 2
        assert_eq!(PartialPermutation::enumerate(2, 2).len(), 7);
        // sum_k C(2,k) C(3,k) k! = 1 + 6 + 6
        assert_eq!(PartialPermutation::enumerate(2, 3).len(), 13);
        for w in PartialPermutation::enumerate(2, 3) {
            assert_eq!(PartialPermutation::from_matrix(&w.to_matrix()).unwrap(), w);
            assert_eq!(w.transpose().transpose(), w);
        }
    }

    #[test]
    fn witness_takes_value_one() {
        for id in all_minor_ids(3, 4) {
            let x = witness_matrix(3, 4, &id);
            assert_eq!(eval_minor(&x, &id).unwrap(), Rational::one());
        }
        assert_eq!(
            witness_matrix(2, 2, &"[1,2|1,2]".parse().unwrap()),
            Matrix::identity(2)
        );
    }

    #[test]
    fn zero_matrix_is_in_every_closure() {
        for w in enumerate_restricted_perms(2, 3).unwrap() {
            assert!(closure_rank_conditions(&w, &Matrix::zeros(2, 3)));
        }
    }

    #[test]
    fn rank_forms_of_conditions_3_and_4() {
        for (m, p) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
            for w in enumerate_restricted_perms(m, p).unwrap() {
                for id in all_minor_ids(m, p) {
                    let c3 = (1..=p).any(|r| {
                        (r..=p).any(|s| {
                            id.cols.iter().filter(|&&a| r <= a && a <= s).count() > condition3_bound(&w, r, s)
                        })
                    });
                    let c4 = (1..=m).any(|r| {
                        (r..=m).any(|s| {
                            id.rows.iter().filter(|&&i| r <= i && i <= s).count() > condition4_bound(&w, r, s)
                        })
                    });
                    assert_eq!(c3, mw_condition(&w, &id, 3), "{w} {id}");
                    assert_eq!(c4, mw_condition(&w, &id, 4), "{w} {id}");
                }
            }
        }
    }
}
