//! Exact coefficient rings: arbitrary-precision rationals and cyclotomic fields.
//!
//! Every coefficient type used by [`crate::series::PuiseuxSeries`] implements
//! [`Coefficient`]. A coefficient carries its ring (for cyclotomic elements,
//! the field order), and arithmetic between different rings is rejected by
//! the series layer rather than silently lifted.

mod cyclotomic;
mod rational;

use std::fmt::Debug;

use num_rational::Rational64;

pub use cyclotomic::{cyclotomic_polynomial, Cyclotomic, CyclotomicField, DEFAULT_CYCLOTOMIC_ORDER};
pub use rational::{format_rational, parse_rational, rational_root, Rational};

/// Exact coefficient arithmetic as needed by truncated series.
pub trait Coefficient: Clone + PartialEq + Debug + Send + Sync {
    /// Identifies the ring an element lives in.
    type Ring: Clone + PartialEq + Debug + Send + Sync;

    fn ring(&self) -> Self::Ring;
    fn zero(ring: &Self::Ring) -> Self;
    fn one(ring: &Self::Ring) -> Self;
    fn from_rational(ring: &Self::Ring, r: &Rational) -> Self;

    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;

    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn scale(&self, r: &Rational) -> Self;
    fn inverse(&self) -> Option<Self>;

    /// The element as a rational number, if it is one.
    fn to_rational(&self) -> Option<Rational>;

    /// An `r`-th power inside the ring, when one exists and is unambiguous.
    ///
    /// Integer powers always exist for units; fractional powers are only
    /// taken of `1` unless the implementation knows better.
    fn pow_rational(&self, r: Rational64) -> Option<Self> {
        if self.is_one() {
            return Some(self.clone());
        }
        if !r.is_integer() {
            return None;
        }
        integer_power(self, *r.numer())
    }

    /// JSON form used in the series schema.
    fn to_json(&self) -> serde_json::Value;
}

pub(crate) fn integer_power<C: Coefficient>(x: &C, n: i64) -> Option<C> {
    let (base, mut e) = if n < 0 {
        (x.inverse()?, n.unsigned_abs())
    } else {
        (x.clone(), n as u64)
    };
    let mut acc = C::one(&x.ring());
    let mut sq = base;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul_ref(&sq);
        }
        e >>= 1;
        if e > 0 {
            sq = sq.mul_ref(&sq);
        }
    }
    Some(acc)
}
