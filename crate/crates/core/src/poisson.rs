//! Poisson brackets on Laurent polynomial algebras, given on generators and
//! extended as a biderivation:
//!
//! ```text
//! {f, g} = sum over v < w of b[v,w] * (df/dv * dg/dw - df/dw * dg/dv)
//! ```

use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{ArithError, EntryDomain, LaurentPoly, Rational, VarRegistry};
use crate::cells::symbolic_mc;
use crate::combinat::CauchonDiagram;
use crate::restoration::{restore, steps, MatrixTrace, RestorationError, StepIndex};

/// Brackets of generator pairs `v < w` in registry order. Absent pairs are 0.
#[derive(Debug, Clone)]
pub struct BracketTable {
    reg: Arc<VarRegistry>,
    table: Vec<Vec<Option<LaurentPoly>>>,
}

impl BracketTable {
    /// Builds a table from a rule on cell pairs `(i,a) < (k,g)`.
    pub fn from_rule(
        reg: &Arc<VarRegistry>,
        rule: impl Fn((usize, usize), (usize, usize)) -> LaurentPoly,
    ) -> Self {
        let n = reg.len();
        let table = (0..n)
            .map(|v| {
                (0..n)
                    .map(|w| {
                        if w <= v {
                            return None;
                        }
                        let b = rule(reg.cell(v), reg.cell(w));
                        (!b.vanishes()).then_some(b)
                    })
                    .collect()
            })
            .collect();
        BracketTable {
            reg: Arc::clone(reg),
            table,
        }
    }

    /// The bracket of `A_C` on its registered (white) generators.
    pub fn cauchon(reg: &Arc<VarRegistry>) -> Self {
        let t = |c| LaurentPoly::cell_var(reg, c).unwrap_or_else(|| LaurentPoly::zero(reg));
        Self::from_rule(reg, |(i, a), (k, g)| {
            if i == k || a == g {
                t((i, a)).mul(&t((k, g)))
            } else {
                LaurentPoly::zero(reg)
            }
        })
    }

    /// The standard bracket on the coordinate ring of matrices; generators
    /// missing from the registry count as zero.
    pub fn matrix(reg: &Arc<VarRegistry>) -> Self {
        let y = |c| LaurentPoly::cell_var(reg, c).unwrap_or_else(|| LaurentPoly::zero(reg));
        let two = Rational::from_integer(2.into());
        Self::from_rule(reg, |(i, a), (k, g)| {
            if i == k || a == g {
                y((i, a)).mul(&y((k, g)))
            } else if a < g {
                y((i, g)).mul(&y((k, a))).scale(&two)
            } else {
                LaurentPoly::zero(reg)
            }
        })
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    /// `{t_v, t_w}` with the sign flip for `v > w`.
    pub fn get(&self, v: usize, w: usize) -> LaurentPoly {
        match v.cmp(&w) {
            std::cmp::Ordering::Less => self.table[v][w]
                .clone()
                .unwrap_or_else(|| LaurentPoly::zero(&self.reg)),
            std::cmp::Ordering::Greater => self.get(w, v).neg(),
            std::cmp::Ordering::Equal => LaurentPoly::zero(&self.reg),
        }
    }
}

/// `{f, g}` under `table`.
pub fn bracket(f: &LaurentPoly, g: &LaurentPoly, table: &BracketTable) -> Result<LaurentPoly, ArithError> {
    if f.registry() != &table.reg || g.registry() != &table.reg {
        return Err(ArithError::RegistryMismatch);
    }
    let n = table.reg.len();
    let df: Vec<LaurentPoly> = (0..n).map(|v| f.partial(v)).collect();
    let dg: Vec<LaurentPoly> = (0..n).map(|v| g.partial(v)).collect();
    let mut acc = LaurentPoly::zero(&table.reg);
    for (v, row) in table.table.iter().enumerate() {
        for (w, b) in row.iter().enumerate() {
            let Some(b) = b else { continue };
            let cross = df[v].mul(&dg[w]).sub(&df[w].mul(&dg[v]));
            if !cross.vanishes() {
                acc = acc.add(&b.mul(&cross));
            }
        }
    }
    Ok(acc)
}

/// The expected `{x_(i,a), x_(k,g)}` at step `r` for `(i,a) < (k,g)`, where
/// `x` is the matrix at that step.
fn expected_step_bracket(
    x: &crate::arith::Matrix<LaurentPoly>,
    r: StepIndex,
    (i, a): (usize, usize),
    (k, g): (usize, usize),
) -> LaurentPoly {
    let at = |i: usize, a: usize| x.get(i - 1, a - 1);
    if i == k || a == g {
        at(i, a).mul(at(k, g))
    } else if a > g || StepIndex::new(k, g) >= r {
        at(i, a).zero_like()
    } else {
        at(i, g).mul(at(k, a)).scale(&Rational::from_integer(2.into()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairFailure {
    pub first: (usize, usize),
    pub second: (usize, usize),
    /// Computed bracket minus expected, in text form.
    pub difference: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepBracketReport {
    pub step: String,
    pub pairs_checked: usize,
    pub failures: Vec<PairFailure>,
}

impl StepBracketReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn check_step(
    trace: &MatrixTrace<LaurentPoly>,
    r: StepIndex,
    table: &BracketTable,
) -> Result<StepBracketReport, ArithError> {
    let x = trace.get(r).expect("step label from the same run");
    let (m, p) = (x.rows(), x.cols());
    let cells: Vec<(usize, usize)> = (1..=m).flat_map(|i| (1..=p).map(move |a| (i, a))).collect();
    let pairs: Vec<_> = cells
        .iter()
        .enumerate()
        .flat_map(|(n, &c)| cells[n + 1..].iter().map(move |&d| (c, d)))
        .collect();
    let results = pairs
        .par_iter()
        .map(|&(c, d)| {
            let got = bracket(x.get(c.0 - 1, c.1 - 1), x.get(d.0 - 1, d.1 - 1), table)?;
            let diff = got.sub(&expected_step_bracket(x, r, c, d));
            Ok((!diff.vanishes()).then(|| PairFailure {
                first: c,
                second: d,
                difference: diff.to_string(),
            }))
        })
        .collect::<Result<Vec<_>, ArithError>>()?;
    Ok(StepBracketReport {
        step: r.to_string(),
        pairs_checked: pairs.len(),
        failures: results.into_iter().flatten().collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PoissonError {
    #[error("step {0} is not in the step set")]
    UnknownStep(StepIndex),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Restoration(#[from] RestorationError),
}

/// Checks the bracket of every pair of entries of the symbolic matrix at
/// step `r` of the restoration of `M_C`, computed with the `A_C` table,
/// against the five-case rule.
pub fn verify_step_brackets(c: &CauchonDiagram, r: StepIndex) -> Result<StepBracketReport, PoissonError> {
    let trace = restore(&symbolic_mc(c))?;
    if trace.get(r).is_none() {
        return Err(PoissonError::UnknownStep(r));
    }
    let table = BracketTable::cauchon(trace.first().get(0, 0).registry());
    Ok(check_step(&trace, r, &table)?)
}

/// [`verify_step_brackets`] at every step, sharing one restoration run.
pub fn verify_all_steps(c: &CauchonDiagram) -> Result<Vec<StepBracketReport>, PoissonError> {
    let trace = restore(&symbolic_mc(c))?;
    let table = BracketTable::cauchon(trace.first().get(0, 0).registry());
    steps(c.m(), c.p())
        .into_iter()
        .map(|r| Ok(check_step(&trace, r, &table)?))
        .collect()
}

/// Jacobi identity on every triple drawn from `sample`.
pub fn verify_jacobi(table: &BracketTable, sample: &[LaurentPoly]) -> Result<bool, ArithError> {
    let n = sample.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if !jacobi_holds(table, &sample[a], &sample[b], &sample[c])? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

pub fn jacobi_holds(
    table: &BracketTable,
    f: &LaurentPoly,
    g: &LaurentPoly,
    h: &LaurentPoly,
) -> Result<bool, ArithError> {
    let s = bracket(f, &bracket(g, h, table)?, table)?
        .add(&bracket(g, &bracket(h, f, table)?, table)?)
        .add(&bracket(h, &bracket(f, g, table)?, table)?);
    Ok(s.vanishes())
}

/// `{fg, h} = f{g,h} + {f,h}g`.
pub fn leibniz_holds(
    table: &BracketTable,
    f: &LaurentPoly,
    g: &LaurentPoly,
    h: &LaurentPoly,
) -> Result<bool, ArithError> {
    let lhs = bracket(&f.mul(g), h, table)?;
    let rhs = f.mul(&bracket(g, h, table)?).add(&bracket(f, h, table)?.mul(g));
    Ok(lhs == rhs)
}

/// The `Z^(m+p)` degree of a homogeneous polynomial, with `t[i,a]` of degree
/// `e_i + e_(m+a)`. `None` for zero or inhomogeneous input.
pub fn bidegree(f: &LaurentPoly, m: usize, p: usize) -> Option<Vec<i64>> {
    let reg = f.registry();
    let mut degrees = f.terms().map(|(e, _)| {
        let mut d = vec![0i64; m + p];
        for (v, &k) in e.iter().enumerate() {
            let (i, a) = reg.cell(v);
            d[i - 1] += i64::from(k);
            d[m + a - 1] += i64::from(k);
        }
        d
    });
    let first = degrees.next()?;
    degrees.all(|d| d == first).then_some(first)
}

/// A random Laurent polynomial with up to `max_terms` terms, exponents in
/// `-max_exp..=max_exp` (or `0..=max_exp` when `allow_negative` is false) and
/// small integer coefficients.
pub fn random_laurent(
    reg: &Arc<VarRegistry>,
    rng: &mut impl Rng,
    max_terms: usize,
    max_exp: i32,
    allow_negative: bool,
) -> LaurentPoly {
    let lo = if allow_negative { -max_exp } else { 0 };
    let mut f = LaurentPoly::zero(reg);
    for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
        let exps = (0..reg.len()).map(|_| rng.gen_range(lo..=max_exp)).collect();
        let c = Rational::from_integer(rng.gen_range(-3i64..=3).into());
        f = f.add(&LaurentPoly::monomial(reg, exps, c));
    }
    f
}
