use num_traits::Zero;

use super::{ArithError, EntryDomain, Matrix, Rational};

fn check_square<T>(m: &Matrix<T>) -> Result<usize, ArithError> {
    if !m.is_square() {
        return Err(ArithError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if m.rows() == 0 {
        return Err(ArithError::EmptyMatrix);
    }
    Ok(m.rows())
}

/// Exact determinant.
///
/// Runs fraction-free Bareiss elimination with row pivoting. Every Bareiss
/// division is exact in an integral domain, but if the domain ever reports an
/// inexact quotient the computation restarts with cofactor expansion.
pub fn det_exact<T: EntryDomain>(m: &Matrix<T>) -> Result<T, ArithError> {
    check_square(m)?;
    match bareiss(m) {
        Err(ArithError::InexactDivision) => cofactor_det(m),
        other => other,
    }
}

fn bareiss<T: EntryDomain>(m: &Matrix<T>) -> Result<T, ArithError> {
    let n = m.rows();
    let mut a = m.to_rows();
    let one = a[0][0].one_like();
    let mut prev = one.clone();
    let mut negate = false;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&r| !a[r][k].vanishes()) else {
            return Ok(one.zero_like());
        };
        if piv != k {
            a.swap(piv, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.div_exact(&prev)?;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { d.neg() } else { d })
}

/// Laplace expansion along the first row. Exponential; used as the fallback
/// for [`det_exact`] and as a test oracle.
pub fn cofactor_det<T: EntryDomain>(m: &Matrix<T>) -> Result<T, ArithError> {
    let n = check_square(m)?;
    let rows: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = (0..n).collect();
    Ok(cofactor_rec(m, &rows, &cols))
}

fn cofactor_rec<T: EntryDomain>(m: &Matrix<T>, rows: &[usize], cols: &[usize]) -> T {
    if rows.len() == 1 {
        return m.get(rows[0], cols[0]).clone();
    }
    let mut acc = m.get(0, 0).zero_like();
    for (k, &c) in cols.iter().enumerate() {
        let entry = m.get(rows[0], c);
        if entry.vanishes() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = entry.mul(&cofactor_rec(m, &rows[1..], &rest));
        acc = if k % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    acc
}

/// Rank over the rationals by Gaussian elimination.
pub fn rank(m: &Matrix<Rational>) -> usize {
    let mut a = m.to_rows();
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| !Zero::is_zero(&a[i][c])) else {
            continue;
        };
        a.swap(piv, r);
        for i in r + 1..rows {
            if Zero::is_zero(&a[i][c]) {
                continue;
            }
            let f = &a[i][c] / &a[r][c];
            let (top, bottom) = a.split_at_mut(i);
            for (dst, src) in bottom[0][c..cols].iter_mut().zip(&top[r][c..cols]) {
                *dst -= &f * src;
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{LaurentPoly, VarRegistry};

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn two_by_two_closed_form() {
        let m = Matrix::from_i64_rows(&[&[0, 1], &[2, 3]]);
        assert_eq!(det_exact(&m).unwrap(), q(-2));
    }

    #[test]
    fn identity_has_unit_determinant() {
        for n in 1..=6 {
            assert_eq!(det_exact(&Matrix::identity(n)).unwrap(), q(1));
        }
    }

    #[test]
    fn symbolic_two_by_two() {
        let reg = VarRegistry::full(2, 2);
        let m = Matrix::from_fn(2, 2, |r, c| LaurentPoly::cell_var(&reg, (r + 1, c + 1)).unwrap());
        let t = |i, a| LaurentPoly::cell_var(&reg, (i, a)).unwrap();
        let expected = t(1, 1).mul(&t(2, 2)).sub(&t(1, 2).mul(&t(2, 1)));
        assert_eq!(det_exact(&m).unwrap(), expected);
        assert_eq!(cofactor_det(&m).unwrap(), expected);
    }

    #[test]
    fn symbolic_generic_three_by_three_matches_cofactor() {
        let reg = VarRegistry::full(3, 3);
        let m = Matrix::from_fn(3, 3, |r, c| LaurentPoly::cell_var(&reg, (r + 1, c + 1)).unwrap());
        let d = det_exact(&m).unwrap();
        assert_eq!(d, cofactor_det(&m).unwrap());
        assert_eq!(d.num_terms(), 6);
    }

    #[test]
    fn shape_errors() {
        let m = Matrix::from_i64_rows(&[&[1, 2, 3]]);
        assert_eq!(det_exact(&m), Err(ArithError::NotSquare { rows: 1, cols: 3 }));
        assert_eq!(
            det_exact(&Matrix::<Rational>::zeros(0, 0)),
            Err(ArithError::EmptyMatrix)
        );
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&Matrix::zeros(3, 2)), 0);
        assert_eq!(rank(&Matrix::from_i64_rows(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&Matrix::from_i64_rows(&[&[0, 1, 0], &[1, 0, 0]])), 2);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_square() -> impl Strategy<Value = Matrix<Rational>> {
            (1usize..=4).prop_flat_map(|n| {
                proptest::collection::vec(-4i64..=4, n * n)
                    .prop_map(move |v| Matrix::from_fn(n, n, |r, c| q(v[r * n + c])))
            })
        }

        proptest! {
            #[test]
            fn bareiss_agrees_with_cofactor(m in arb_square()) {
                prop_assert_eq!(det_exact(&m).unwrap(), cofactor_det(&m).unwrap());
            }

            #[test]
            fn full_rank_iff_nonzero_det(m in arb_square()) {
                let d = det_exact(&m).unwrap();
                prop_assert_eq!(rank(&m) == m.rows(), !d.vanishes());
            }
        }
    }
}
