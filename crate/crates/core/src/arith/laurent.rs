use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::rational::{parse_rational, rational_to_string};
use super::{ArithError, EntryDomain, Rational};

/// Dense exponent vector, one slot per registered variable.
pub type Exponents = Box<[i32]>;

/// Ordered set of matrix cells `(i, a)` (1-based) that name the
/// indeterminates `t[i,a]`. Variable indices follow row-major cell order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarRegistry {
    cells: Vec<(usize, usize)>,
}

impl VarRegistry {
    /// Every cell of an `m x p` grid.
    pub fn full(m: usize, p: usize) -> Arc<Self> {
        Self::from_cells((1..=m).flat_map(|i| (1..=p).map(move |a| (i, a))))
    }

    pub fn from_cells(cells: impl IntoIterator<Item = (usize, usize)>) -> Arc<Self> {
        let mut cells: Vec<_> = cells.into_iter().collect();
        cells.sort_unstable();
        cells.dedup();
        Arc::new(VarRegistry { cells })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }

    pub fn cell(&self, var: usize) -> (usize, usize) {
        self.cells[var]
    }

    pub fn index_of(&self, cell: (usize, usize)) -> Option<usize> {
        self.cells.binary_search(&cell).ok()
    }

    pub fn name(&self, var: usize) -> String {
        let (i, a) = self.cells[var];
        format!("t[{i},{a}]")
    }
}

/// Multivariate Laurent polynomial with rational coefficients.
///
/// Terms are kept in a `BTreeMap` keyed by exponent vector, so iteration is
/// in ascending lexicographic order and structural equality is mathematical
/// equality. No stored coefficient is zero.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    reg: Arc<VarRegistry>,
    terms: BTreeMap<Exponents, Rational>,
}

fn same_registry(a: &Arc<VarRegistry>, b: &Arc<VarRegistry>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn add_exponents(a: &[i32], b: &[i32]) -> Result<Exponents, ArithError> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.checked_add(*y).ok_or(ArithError::ExponentOverflow))
        .collect()
}

fn sub_exponents(a: &[i32], b: &[i32]) -> Result<Exponents, ArithError> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.checked_sub(*y).ok_or(ArithError::ExponentOverflow))
        .collect()
}

impl LaurentPoly {
    pub fn zero(reg: &Arc<VarRegistry>) -> Self {
        LaurentPoly {
            reg: Arc::clone(reg),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(reg: &Arc<VarRegistry>, c: Rational) -> Self {
        let mut p = Self::zero(reg);
        if !Zero::is_zero(&c) {
            p.terms.insert(vec![0; reg.len()].into_boxed_slice(), c);
        }
        p
    }

    pub fn one(reg: &Arc<VarRegistry>) -> Self {
        Self::constant(reg, Rational::one())
    }

    /// `coeff * t^exps`. Panics if `exps` has the wrong length.
    pub fn monomial(reg: &Arc<VarRegistry>, exps: Vec<i32>, coeff: Rational) -> Self {
        assert_eq!(exps.len(), reg.len(), "exponent vector length");
        let mut p = Self::zero(reg);
        if !Zero::is_zero(&coeff) {
            p.terms.insert(exps.into_boxed_slice(), coeff);
        }
        p
    }

    /// The indeterminate with index `var`.
    pub fn var(reg: &Arc<VarRegistry>, var: usize) -> Self {
        let mut e = vec![0; reg.len()];
        e[var] = 1;
        Self::monomial(reg, e, Rational::one())
    }

    /// The indeterminate `t[i,a]`, if the cell is registered.
    pub fn cell_var(reg: &Arc<VarRegistry>, cell: (usize, usize)) -> Option<Self> {
        reg.index_of(cell).map(|v| Self::var(reg, v))
    }

    pub fn registry(&self) -> &Arc<VarRegistry> {
        &self.reg
    }

    pub fn num_vars(&self) -> usize {
        self.reg.len()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl Iterator<Item = (&[i32], &Rational)> {
        self.terms.iter().map(|(e, c)| (&e[..], c))
    }

    /// Single-term polynomial (a unit of the Laurent ring).
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Indices of variables that occur with a nonzero exponent in some term.
    pub fn support(&self) -> Vec<usize> {
        (0..self.reg.len())
            .filter(|&v| self.terms.keys().any(|e| e[v] != 0))
            .collect()
    }

    fn accumulate(terms: &mut BTreeMap<Exponents, Rational>, e: Exponents, c: Rational) {
        use std::collections::btree_map::Entry;
        match terms.entry(e) {
            Entry::Vacant(v) => {
                if !Zero::is_zero(&c) {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if Zero::is_zero(o.get()) {
                    o.remove();
                }
            }
        }
    }

    fn check_registry(&self, rhs: &Self) -> Result<(), ArithError> {
        if same_registry(&self.reg, &rhs.reg) {
            Ok(())
        } else {
            Err(ArithError::RegistryMismatch)
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, ArithError> {
        self.check_registry(rhs)?;
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            Self::accumulate(&mut out.terms, e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, ArithError> {
        self.check_registry(rhs)?;
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            Self::accumulate(&mut out.terms, e.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, ArithError> {
        self.check_registry(rhs)?;
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                Self::accumulate(&mut terms, add_exponents(ea, eb)?, ca * cb);
            }
        }
        Ok(LaurentPoly {
            reg: Arc::clone(&self.reg),
            terms,
        })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if Zero::is_zero(c) {
            return Self::zero(&self.reg);
        }
        LaurentPoly {
            reg: Arc::clone(&self.reg),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    fn shift(&self, by: &[i32]) -> Result<Self, ArithError> {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| Ok((add_exponents(e, by)?, c.clone())))
            .collect::<Result<_, ArithError>>()?;
        Ok(LaurentPoly {
            reg: Arc::clone(&self.reg),
            terms,
        })
    }

    fn min_exponents(&self) -> Vec<i32> {
        let mut min = vec![i32::MAX; self.reg.len()];
        for e in self.terms.keys() {
            for (m, x) in min.iter_mut().zip(e.iter()) {
                *m = (*m).min(*x);
            }
        }
        min
    }

    /// Exact quotient `self / rhs` in the Laurent ring.
    ///
    /// Monomial divisors always divide. Otherwise both sides are shifted into
    /// the polynomial ring (so that no variable divides the divisor) and long
    /// division by leading lexicographic terms is run; a nonzero remainder or a
    /// leading term that is not divisible means the quotient does not exist.
    pub fn div_exact(&self, rhs: &Self) -> Result<Self, ArithError> {
        self.check_registry(rhs)?;
        if rhs.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(&self.reg));
        }
        if rhs.is_monomial() {
            let (eb, cb) = rhs.terms.iter().next().unwrap();
            let terms = self
                .terms
                .iter()
                .map(|(e, c)| Ok((sub_exponents(e, eb)?, c / cb)))
                .collect::<Result<_, ArithError>>()?;
            return Ok(LaurentPoly {
                reg: Arc::clone(&self.reg),
                terms,
            });
        }

        let min_a = self.min_exponents();
        let min_b = rhs.min_exponents();
        let neg = |v: &[i32]| v.iter().map(|x| -x).collect::<Vec<_>>();
        let mut rem = self.shift(&neg(&min_a))?;
        let divisor = rhs.shift(&neg(&min_b))?;
        let (lead_e, lead_c) = divisor.terms.iter().next_back().unwrap();

        let mut quot = Self::zero(&self.reg);
        while let Some((re, rc)) = rem.terms.iter().next_back() {
            let d = sub_exponents(re, lead_e)?;
            if d.iter().any(|&x| x < 0) {
                return Err(ArithError::InexactDivision);
            }
            let step = LaurentPoly {
                reg: Arc::clone(&self.reg),
                terms: BTreeMap::from([(d, rc / lead_c)]),
            };
            rem = rem.checked_sub(&step.checked_mul(&divisor)?)?;
            quot = quot.checked_add(&step)?;
        }
        let offset = sub_exponents(&min_a, &min_b)?;
        quot.shift(&offset)
    }

    /// Formal partial derivative with respect to variable `var`; valid for
    /// negative exponents as well.
    pub fn partial(&self, var: usize) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e[var];
            if k == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] = k.checked_sub(1).expect("exponent overflow");
            Self::accumulate(&mut terms, e2, c * Rational::from_integer(k.into()));
        }
        LaurentPoly {
            reg: Arc::clone(&self.reg),
            terms,
        }
    }

    /// Substitutes rational values for every variable. Fails when a variable
    /// with a negative exponent is assigned zero.
    pub fn evaluate(&self, values: &[Rational]) -> Result<Rational, ArithError> {
        assert_eq!(values.len(), self.reg.len(), "one value per variable");
        let mut total = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in values.iter().zip(e.iter()) {
                if k < 0 && Zero::is_zero(x) {
                    return Err(ArithError::DivisionByZero);
                }
                t *= num_traits::pow::Pow::pow(x, k);
            }
            total += t;
        }
        Ok(total)
    }

    /// Parses the canonical text form against an existing registry.
    pub fn parse(reg: &Arc<VarRegistry>, s: &str) -> Result<Self, ArithError> {
        let err = || ArithError::Parse {
            what: "laurent polynomial",
            input: s.to_string(),
        };
        let s = s.trim();
        let mut out = Self::zero(reg);
        if s == "0" {
            return Ok(out);
        }
        for term in s.split(" + ") {
            let mut factors = term.split(" * ");
            let coeff = parse_rational(factors.next().ok_or_else(err)?)?;
            let mut e = vec![0i32; reg.len()];
            for f in factors {
                let f = f.trim();
                let body = f.strip_prefix("t[").ok_or_else(err)?;
                let (cell, exp) = body.split_once("]^").ok_or_else(err)?;
                let (i, a) = cell.split_once(',').ok_or_else(err)?;
                let i: usize = i.trim().parse().map_err(|_| err())?;
                let a: usize = a.trim().parse().map_err(|_| err())?;
                let k: i32 = exp.trim().parse().map_err(|_| err())?;
                let v = reg.index_of((i, a)).ok_or_else(err)?;
                e[v] = e[v].checked_add(k).ok_or(ArithError::ExponentOverflow)?;
            }
            Self::accumulate(&mut out.terms, e.into_boxed_slice(), coeff);
        }
        Ok(out)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            f.write_str(&rational_to_string(c))?;
            for (v, &k) in e.iter().enumerate() {
                if k != 0 {
                    write!(f, " * {}^{}", self.reg.name(v), k)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl EntryDomain for LaurentPoly {
    fn zero_like(&self) -> Self {
        Self::zero(&self.reg)
    }

    fn one_like(&self) -> Self {
        Self::one(&self.reg)
    }

    fn vanishes(&self) -> bool {
        self.terms.is_empty()
    }

    fn add(&self, rhs: &Self) -> Self {
        self.checked_add(rhs).expect("laurent add")
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.checked_sub(rhs).expect("laurent sub")
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.checked_mul(rhs).expect("laurent mul")
    }

    fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    fn div_exact(&self, rhs: &Self) -> Result<Self, ArithError> {
        LaurentPoly::div_exact(self, rhs)
    }
}
