//! Exact checks of the minor identities that track a single restoration step,
//! plus structural properties of symbolic restoration.

use num_traits::{One, Zero};
use proptest::prelude::*;
use tnn_core::arith::{cofactor_det, LaurentPoly, Matrix, Rational};
use tnn_core::cells::{build_nc, symbolic_mc};
use tnn_core::combinat::{enumerate_diagrams, CauchonDiagram};
use tnn_core::minors::all_minor_ids;
use tnn_core::poisson::bidegree;
use tnn_core::restoration::{
    delete_step, interior_steps, is_cauchon_matrix, is_h_invariant, restore, restore_step, steps, successor,
    MatrixTrace, StepIndex,
};

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Determinant of the submatrix on 1-based rows and columns; the empty
/// determinant is 1.
fn det_at(x: &Matrix<Rational>, rows: &[usize], cols: &[usize]) -> Rational {
    if rows.is_empty() {
        return Rational::one();
    }
    let r: Vec<usize> = rows.iter().map(|i| i - 1).collect();
    let c: Vec<usize> = cols.iter().map(|a| a - 1).collect();
    cofactor_det(&x.submatrix(&r, &c)).unwrap()
}

fn entry(x: &Matrix<Rational>, i: usize, a: usize) -> &Rational {
    x.get(i - 1, a - 1)
}

fn arb_matrix() -> impl Strategy<Value = Matrix<Rational>> {
    (2usize..=3, 2usize..=4).prop_flat_map(|(m, p)| {
        proptest::collection::vec(prop_oneof![1 => Just(0i64), 3 => -4i64..=4], m * p)
            .prop_map(move |v| Matrix::from_fn(m, p, |r, c| q(v[r * p + c])))
    })
}

fn arb_cauchon() -> impl Strategy<Value = Matrix<Rational>> {
    (2usize..=3, 2usize..=4).prop_flat_map(|(m, p)| {
        let diagrams = enumerate_diagrams(m, p).unwrap();
        (
            0..diagrams.len(),
            proptest::collection::vec(prop_oneof![-5i64..=-1, 1i64..=5], m * p),
        )
            .prop_map(move |(k, v)| {
                let c = diagrams[k];
                Matrix::from_fn(m, p, |r, col| {
                    if c.is_black(r + 1, col + 1) {
                        q(0)
                    } else {
                        q(v[r * p + col])
                    }
                })
            })
    })
}

fn matrix_at(t: &MatrixTrace<Rational>, j: usize, b: usize) -> &Matrix<Rational> {
    t.get(StepIndex::new(j, b)).unwrap()
}

/// Runs `f(trace, r, r_plus, rows, cols)` for every interior step and minor.
fn for_each_step_minor(
    x: &Matrix<Rational>,
    mut f: impl FnMut(&MatrixTrace<Rational>, StepIndex, &Matrix<Rational>, &Matrix<Rational>, &[usize], &[usize]),
) {
    let (m, p) = (x.rows(), x.cols());
    let t = restore(x).unwrap();
    for r in interior_steps(m, p) {
        let before = t.get(r).unwrap();
        let after = t.get(successor(m, p, r).unwrap()).unwrap();
        for id in all_minor_ids(m, p) {
            f(&t, r, before, after, id.rows.as_slice(), id.cols.as_slice());
        }
    }
}

fn without(v: &[usize], x: usize) -> Vec<usize> {
    v.iter().copied().filter(|&y| y != x).collect()
}

/// The index set with its `pos`-th element replaced by `x`, kept sorted.
fn replace_at(v: &[usize], pos: usize, x: usize) -> Vec<usize> {
    let mut w = v.to_vec();
    w[pos] = x;
    w.sort_unstable();
    w
}

/// The exchange identity at every step and minor in its regime. Off Cauchon
/// matrices it also needs `x[j, a_h] != 0`; see `exchange_identity_needs_pivot`.
fn check_exchange(x: &Matrix<Rational>, cauchon: bool) {
    for_each_step_minor(x, |t, r, before, after, rows, cols| {
        let l = rows.len();
        let u = entry(before, r.j, r.b).clone();
        if u.is_zero() || rows[l - 1] >= r.j {
            return;
        }
        let Some(h) =
            (0..l).find(|&h| cols[h] < r.b && r.b < cols.get(h + 1).copied().unwrap_or(x.cols() + 1))
        else {
            return;
        };
        let x_jh = entry(x, r.j, cols[h]);
        if !cauchon && x_jh.is_zero() {
            return;
        }
        let at_h = matrix_at(t, r.j, cols[h]);
        let rhs = det_at(before, rows, cols) + det_at(at_h, rows, &replace_at(cols, h, r.b)) * x_jh / &u;
        assert_eq!(det_at(after, rows, cols), rhs, "step {r} minor {rows:?}|{cols:?}");
    });
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn step_then_inverse_step_is_identity(x in arb_matrix()) {
        for r in interior_steps(x.rows(), x.cols()) {
            prop_assert_eq!(delete_step(&restore_step(&x, r).unwrap(), r).unwrap(), x.clone());
            prop_assert_eq!(restore_step(&delete_step(&x, r).unwrap(), r).unwrap(), x.clone());
        }
    }

    #[test]
    fn pivot_identity(x in arb_matrix()) {
        for_each_step_minor(&x, |_, r, before, after, rows, cols| {
            let l = rows.len();
            if (rows[l - 1], cols[l - 1]) != (r.j, r.b) {
                return;
            }
            let u = entry(before, r.j, r.b).clone();
            if u.is_zero() {
                return;
            }
            let lhs = det_at(after, rows, cols);
            let rhs = det_at(before, &without(rows, r.j), &without(cols, r.b)) * &u;
            assert_eq!(lhs, rhs, "step {r} minor {rows:?}|{cols:?}");
        });
    }

    #[test]
    fn pivot_zero_on_cauchon_matrix_kills_minor(x in arb_cauchon()) {
        for_each_step_minor(&x, |_, r, before, after, rows, cols| {
            let l = rows.len();
            if (rows[l - 1], cols[l - 1]) == (r.j, r.b) && entry(before, r.j, r.b).is_zero() {
                assert!(det_at(after, rows, cols).is_zero(), "step {r} minor {rows:?}|{cols:?}");
            }
        });
    }

    #[test]
    fn pivot_identity_iff_on_cauchon_matrix(x in arb_cauchon()) {
        for_each_step_minor(&x, |_, r, before, after, rows, cols| {
            let l = rows.len();
            if (rows[l - 1], cols[l - 1]) != (r.j, r.b) {
                return;
            }
            let u = entry(before, r.j, r.b).clone();
            let lhs = det_at(after, rows, cols);
            let rhs = det_at(before, &without(rows, r.j), &without(cols, r.b)) * &u;
            assert_eq!(lhs, rhs, "step {r} minor {rows:?}|{cols:?}");
        });
    }

    #[test]
    fn invariance_cases(x in arb_matrix()) {
        for_each_step_minor(&x, |_, r, before, after, rows, cols| {
            let l = rows.len();
            if StepIndex::new(rows[l - 1], cols[l - 1]) >= r {
                return;
            }
            let applies = entry(before, r.j, r.b).is_zero()
                || rows[l - 1] == r.j
                || cols.contains(&r.b)
                || r.b < cols[0];
            if applies {
                assert_eq!(det_at(after, rows, cols), det_at(before, rows, cols), "step {r} minor {rows:?}|{cols:?}");
            }
        });
    }

    #[test]
    fn row_replacement_expansion(x in arb_matrix()) {
        for_each_step_minor(&x, |_, r, before, after, rows, cols| {
            let l = rows.len();
            let u = entry(before, r.j, r.b).clone();
            if u.is_zero() || rows[l - 1] >= r.j || cols[l - 1] >= r.b {
                return;
            }
            let mut rhs = det_at(before, rows, cols);
            for k in 0..l {
                let sign = if (k + 1 + l) % 2 == 0 { q(1) } else { q(-1) };
                let d = det_at(before, &replace_at(rows, k, r.j), cols);
                rhs += sign * d * entry(before, rows[k], r.b) / &u;
            }
            assert_eq!(det_at(after, rows, cols), rhs, "step {r} minor {rows:?}|{cols:?}");
        });
    }

    #[test]
    fn exchange_identity(x in arb_matrix()) {
        check_exchange(&x, false);
    }

    #[test]
    fn exchange_identity_on_cauchon_matrix(x in arb_cauchon()) {
        check_exchange(&x, true);
    }

    #[test]
    fn column_replacement_expansion(x in arb_matrix()) {
        for_each_step_minor(&x, |_, r, before, after, rows, cols| {
            let l = rows.len();
            let u = entry(before, r.j, r.b).clone();
            if u.is_zero() || rows[l - 1] >= r.j {
                return;
            }
            let Some(h) = (0..l).find(|&h| {
                cols[h] < r.b && r.b < cols.get(h + 1).copied().unwrap_or(x.cols() + 1)
            }) else {
                return;
            };
            let mut rhs = det_at(before, rows, cols);
            for t in 0..=h {
                let sign = if (t + h) % 2 == 0 { q(1) } else { q(-1) };
                let d = det_at(before, rows, &replace_at(cols, t, r.b));
                rhs += sign * d * entry(before, r.j, cols[t]) / &u;
            }
            assert_eq!(det_at(after, rows, cols), rhs, "step {r} minor {rows:?}|{cols:?}");
        });
    }

    #[test]
    fn pivots_are_never_modified(x in arb_matrix()) {
        let t = restore(&x).unwrap();
        for (r, y) in t.iter() {
            for (i, a) in (1..=x.rows()).flat_map(|i| (1..=x.cols()).map(move |a| (i, a))) {
                if StepIndex::new(i, a) >= r {
                    prop_assert_eq!(entry(y, i, a), entry(&x, i, a));
                }
            }
        }
    }
}

#[test]
fn non_h_invariant_example() {
    let x = Matrix::from_i64_rows(&[&[-1, 1], &[1, 1]]);
    assert!(is_cauchon_matrix(&x));
    assert!(!is_h_invariant(&x).unwrap());
}

#[test]
fn symbolic_mc_is_h_invariant() {
    for (m, p) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        for c in enumerate_diagrams(m, p).unwrap() {
            assert!(is_h_invariant(&symbolic_mc(&c)).unwrap(), "{c:?}");
        }
    }
}

#[test]
fn random_nc_is_h_invariant() {
    for (m, p) in [(2, 2), (3, 3), (3, 4)] {
        let ds = enumerate_diagrams(m, p).unwrap();
        for (k, c) in ds.iter().enumerate().step_by(ds.len() / 12 + 1) {
            assert!(is_h_invariant(&build_nc(c, k as u64)).unwrap(), "{c:?}");
        }
    }
}

fn symbolic_traces(m: usize, p: usize) -> Vec<(CauchonDiagram, MatrixTrace<LaurentPoly>)> {
    enumerate_diagrams(m, p)
        .unwrap()
        .into_iter()
        .map(|c| (c, restore(&symbolic_mc(&c)).unwrap()))
        .collect()
}

#[test]
fn symbolic_entries_depend_only_on_later_earlier_cells() {
    for (m, p) in [(2, 3), (3, 3)] {
        for (c, t) in symbolic_traces(m, p) {
            let base = t.first().clone();
            for (r, x) in t.iter() {
                for i in 1..=m {
                    for a in 1..=p {
                        let q_part = x.get(i - 1, a - 1).checked_sub(base.get(i - 1, a - 1)).unwrap();
                        let reg = q_part.registry().clone();
                        for v in q_part.support() {
                            let (k, g) = reg.cell(v);
                            assert!(
                                (i, a) < (k, g) && StepIndex::new(k, g) < r,
                                "{c:?} step {r} entry ({i},{a}) uses t[{k},{g}]"
                            );
                            assert!(!c.is_black(k, g));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn symbolic_entries_are_bihomogeneous() {
    for (m, p) in [(2, 3), (3, 3)] {
        for (c, t) in symbolic_traces(m, p) {
            for (r, x) in t.iter() {
                for i in 1..=m {
                    for a in 1..=p {
                        let e = x.get(i - 1, a - 1);
                        if e.is_zero() {
                            continue;
                        }
                        let mut want = vec![0i64; m + p];
                        want[i - 1] = 1;
                        want[m + a - 1] = 1;
                        assert_eq!(bidegree(e, m, p), Some(want), "{c:?} step {r} entry ({i},{a})");
                    }
                }
            }
        }
    }
}

#[test]
fn steps_cover_grid() {
    for (m, p) in [(1, 1), (1, 4), (4, 1), (3, 4)] {
        assert_eq!(steps(m, p).len(), m * p);
    }
}

/// Without the Cauchon property a zero at `(j, a_h)` breaks the exchange
/// identity: here the minor `[1,2|1,2]` goes from 0 to 1 at step (3,3) while
/// the correction term is 0.
#[test]
fn exchange_identity_needs_pivot() {
    let x = Matrix::from_i64_rows(&[&[0, -1, 0], &[0, 0, 1], &[1, 0, 1]]);
    assert!(!is_cauchon_matrix(&x));
    let t = restore(&x).unwrap();
    let before = matrix_at(&t, 3, 3);
    let after = matrix_at(&t, 3, 4);
    assert_eq!(det_at(after, &[1, 2], &[1, 2]), q(1));
    assert_eq!(det_at(before, &[1, 2], &[1, 2]), q(0));
    assert!(entry(&x, 3, 2).is_zero());
}
