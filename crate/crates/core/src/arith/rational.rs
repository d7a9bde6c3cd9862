use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{ArithError, EntryDomain};

pub type Rational = num_rational::BigRational;

impl EntryDomain for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }

    fn one_like(&self) -> Self {
        Rational::one()
    }

    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn div_exact(&self, rhs: &Self) -> Result<Self, ArithError> {
        if Zero::is_zero(rhs) {
            return Err(ArithError::DivisionByZero);
        }
        Ok(self / rhs)
    }
}

/// Canonical text form: `num/den`, with `/den` omitted when the denominator
/// is one.
pub fn rational_to_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `a`, `a/b` or `-a/b` (surrounding whitespace ignored) into a
/// reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let err = || ArithError::Parse {
        what: "rational",
        input: s.to_string(),
    };
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    // BigRational::new normalises the sign onto the numerator.
    let q = Rational::new(num, den);
    debug_assert!(q.denom().is_positive());
    Ok(q)
}
