use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Writes a rational as `"num/den"`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(parse_int(n)?, d))
        }
        None => Ok(Rational::from_integer(parse_int(s)?)),
    }
}

/// Exact `n`-th root of a rational, if it exists (odd roots of negatives allowed).
pub fn rational_root(r: &Rational, n: u32) -> Option<Rational> {
    if n == 0 {
        return None;
    }
    if r.is_negative() && n % 2 == 0 {
        return None;
    }
    let root_int = |x: &BigInt| -> Option<BigInt> {
        let c = x.nth_root(n);
        (num_traits::pow(c.clone(), n as usize) == *x).then_some(c)
    };
    Some(Rational::new(root_int(r.numer())?, root_int(r.denom())?))
}

impl super::Coefficient for Rational {
    type Ring = ();

    fn ring(&self) -> Self::Ring {}
    fn zero(_: &()) -> Self {
        <Rational as Zero>::zero()
    }
    fn one(_: &()) -> Self {
        <Rational as One>::one()
    }
    fn from_rational(_: &(), r: &Rational) -> Self {
        r.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn pow_rational(&self, r: Rational64) -> Option<Self> {
        if Zero::is_zero(self) {
            return None;
        }
        let den = u32::try_from(*r.denom()).ok()?;
        let root = rational_root(self, den)?;
        super::integer_power(&root, *r.numer())
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format_rational(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Coefficient;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-8/3").unwrap(), q(-8, 3));
        assert_eq!(parse_rational("6/4").unwrap(), q(3, 2));
        assert_eq!(parse_rational("17").unwrap(), q(17, 1));
        assert_eq!(format_rational(&q(10, -4)), "-5/2");
        assert_eq!(format_rational(&q(3, 1)), "3/1");
        assert!(matches!(parse_rational("1/0"), Err(Error::DivisionByZero)));
        assert!(parse_rational("x/2").is_err());
    }

    #[test]
    fn roots() {
        assert_eq!(rational_root(&q(9, 4), 2), Some(q(3, 2)));
        assert_eq!(rational_root(&q(-27, 8), 3), Some(q(-3, 2)));
        assert_eq!(rational_root(&q(2, 1), 2), None);
        assert_eq!(rational_root(&q(-4, 1), 2), None);
        assert_eq!(q(4, 9).pow_rational(Rational64::new(-3, 2)), Some(q(27, 8)));
    }
}
