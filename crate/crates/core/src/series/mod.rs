//! Truncated Puiseux series in a single variable `q`.
//!
//! A [`PuiseuxSeries`] stores finitely many nonzero terms `c_k q^{k/g}` on the
//! lattice `(1/g)ℤ` together with a precision `P`: the series is known modulo
//! `O(q^P)`. A precision of `None` marks an exact (polynomial) value.
//!
//! Precision rules, all exact:
//!
//! | operation | output precision |
//! |-----------|------------------|
//! | `a ± b` | `min(P_a, P_b)` |
//! | `a · b` | `min(P_a + val b, P_b + val a)` |
//! | `1/a` | `P_a − 2·val a` |
//! | `∂_q a` | `P_a − 1` |
//! | `exp a`, `log a` | `P_a` |
//! | `a^r` | `r·val a + (P_a − val a)` |
//! | `f ∘ g` | `min(P_f·val g, P_g + (val f − 1)·val g)` |
//!
//! where `val` is the lowest stored exponent, or the precision when no term is
//! stored.

mod dense;
mod json;
mod matrix;
mod transcendental;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::ring::{Coefficient, Cyclotomic, Rational};

pub use json::{series_from_json, series_to_json};
pub use matrix::{solve_linear_ode_firstorder, SeriesMatrix};

/// lcm(8, 18, 24, 2, 3, 6): every fractional exponent the computations need.
pub const MASTER_GRAIN: i64 = 72;

/// Precision of a series: `Some(P)` means modulo `O(q^P)`, `None` means exact.
pub type Precision = Option<Rational64>;

pub type QSeries = PuiseuxSeries<Rational>;
pub type CycSeries = PuiseuxSeries<Cyclotomic>;

pub(crate) fn prec_min(a: Precision, b: Precision) -> Precision {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

pub(crate) fn prec_shift(a: Precision, by: Rational64) -> Precision {
    a.map(|p| p + by)
}

fn lattice_numerator(e: Rational64, grain: i64) -> Result<i64> {
    let k = e * grain;
    if k.is_integer() {
        Ok(*k.numer())
    } else {
        Err(Error::Grain {
            exponent: e.to_string(),
            grain,
        })
    }
}

#[derive(Clone)]
pub struct PuiseuxSeries<C: Coefficient> {
    grain: i64,
    terms: BTreeMap<i64, C>,
    precision: Precision,
    ring: C::Ring,
}

impl<C: Coefficient> PuiseuxSeries<C> {
    pub fn zero(ring: &C::Ring, precision: Precision) -> Self {
        PuiseuxSeries {
            grain: MASTER_GRAIN,
            terms: BTreeMap::new(),
            precision,
            ring: ring.clone(),
        }
    }

    pub fn one(ring: &C::Ring) -> Self {
        Self::constant(C::one(ring))
    }

    pub fn constant(c: C) -> Self {
        let ring = c.ring();
        let mut s = Self::zero(&ring, None);
        if !c.is_zero() {
            s.terms.insert(0, c);
        }
        s
    }

    /// `c·q^e`, exact. The grain is the master grain refined as needed.
    pub fn monomial(c: C, exponent: Rational64) -> Self {
        let grain = MASTER_GRAIN.lcm(exponent.denom());
        let ring = c.ring();
        let mut s = Self::zero(&ring, None);
        s.grain = grain;
        if !c.is_zero() {
            s.terms.insert(*(exponent * grain).numer(), c);
        }
        s
    }

    /// The variable `q` itself.
    pub fn q(ring: &C::Ring) -> Self {
        Self::monomial(C::one(ring), Rational64::from_integer(1))
    }

    /// Builds a series from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I>(ring: &C::Ring, grain: i64, terms: I, precision: Precision) -> Result<Self>
    where
        I: IntoIterator<Item = (Rational64, C)>,
    {
        if grain <= 0 {
            return Err(Error::InvalidArgument(format!("grain must be positive, got {grain}")));
        }
        let mut s = PuiseuxSeries {
            grain,
            terms: BTreeMap::new(),
            precision,
            ring: ring.clone(),
        };
        for (e, c) in terms {
            if c.ring() != *ring {
                return Err(Error::RingMismatch(format!("{:?} vs {:?}", c.ring(), ring)));
            }
            if precision.is_some_and(|p| e >= p) {
                continue;
            }
            let k = lattice_numerator(e, grain)?;
            s.add_term(k, c);
        }
        Ok(s)
    }

    pub(crate) fn from_raw(ring: &C::Ring, grain: i64, terms: BTreeMap<i64, C>, precision: Precision) -> Self {
        let mut s = PuiseuxSeries {
            grain,
            terms,
            precision,
            ring: ring.clone(),
        };
        s.terms.retain(|_, c| !c.is_zero());
        if let Some(p) = precision {
            let bound = p * grain;
            s.terms.retain(|&k, _| Rational64::from_integer(k) < bound);
        }
        s
    }

    fn add_term(&mut self, k: i64, c: C) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(k) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let sum = o.get().add_ref(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn grain(&self) -> i64 {
        self.grain
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn ring(&self) -> &C::Ring {
        &self.ring
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    /// No stored terms: the series is `O(q^P)` (or exactly zero).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Rational64, &C)> + '_ {
        let g = self.grain;
        self.terms.iter().map(move |(&k, c)| (Rational64::new(k, g), c))
    }

    /// Raw `(k, c)` pairs meaning `c·q^{k/grain}`.
    pub fn raw_terms(&self) -> impl Iterator<Item = (i64, &C)> + '_ {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    /// Lowest stored term.
    pub fn lead(&self) -> Option<(Rational64, &C)> {
        self.terms().next()
    }

    pub fn lead_exponent(&self) -> Option<Rational64> {
        self.lead().map(|(e, _)| e)
    }

    /// Lowest stored exponent, or the precision if nothing is stored
    /// (`None` only for the exact zero).
    pub fn valuation(&self) -> Precision {
        self.lead_exponent().or(self.precision)
    }

    /// Coefficient of `q^e` (zero when absent). Asking beyond the precision is an error.
    pub fn coeff(&self, e: Rational64) -> Result<C> {
        if self.precision.is_some_and(|p| e >= p) {
            return Err(Error::Domain(format!(
                "coefficient of q^{e} is beyond the precision O(q^{})",
                self.precision.unwrap()
            )));
        }
        let k = e * self.grain;
        if !k.is_integer() {
            return Ok(C::zero(&self.ring));
        }
        Ok(self.terms.get(k.numer()).cloned().unwrap_or_else(|| C::zero(&self.ring)))
    }

    /// Coefficient at an integer exponent; panics beyond the precision.
    pub fn coeff_int(&self, n: i64) -> C {
        self.coeff(Rational64::from_integer(n)).expect("coefficient beyond precision")
    }

    /// Re-expresses the series on a finer lattice; `grain` must be a multiple of the current grain.
    pub fn with_grain(&self, grain: i64) -> Result<Self> {
        if grain <= 0 || grain % self.grain != 0 {
            return Err(Error::InvalidArgument(format!(
                "grain {grain} does not refine grain {}",
                self.grain
            )));
        }
        let f = grain / self.grain;
        Ok(PuiseuxSeries {
            grain,
            terms: self.terms.iter().map(|(&k, c)| (k * f, c.clone())).collect(),
            precision: self.precision,
            ring: self.ring.clone(),
        })
    }

    /// Coarsest grain that is a multiple of `base` and still holds every term.
    pub(crate) fn coarsen_to(mut self, base: i64) -> Self {
        let mut g = self.grain;
        for &k in self.terms.keys() {
            g = g.gcd(&k);
        }
        let target = g.lcm(&base);
        if target < self.grain && self.grain % target == 0 {
            let f = self.grain / target;
            self.terms = std::mem::take(&mut self.terms)
                .into_iter()
                .map(|(k, c)| (k / f, c))
                .collect();
            self.grain = target;
        }
        self
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{:?} vs {:?}", self.ring, other.ring)))
        }
    }

    fn unified(&self, other: &Self) -> (Self, Self) {
        let g = self.grain.lcm(&other.grain);
        (
            self.with_grain(g).expect("lcm refines"),
            other.with_grain(g).expect("lcm refines"),
        )
    }

    /// Lowers the precision to `min(P, order)`.
    pub fn truncate(&self, order: Rational64) -> Self {
        Self::from_raw(&self.ring, self.grain, self.terms.clone(), prec_min(self.precision, Some(order)))
    }

    pub fn truncate_int(&self, order: i64) -> Self {
        self.truncate(Rational64::from_integer(order))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let (mut a, b) = self.unified(other);
        for (k, c) in b.terms {
            a.add_term(k, c);
        }
        let p = prec_min(a.precision, b.precision);
        Ok(Self::from_raw(&a.ring, a.grain, a.terms, p))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let (a, b) = self.unified(other);
        let p = prec_min(
            a.precision.map(|p| p + b.valuation().unwrap_or(p)),
            b.precision.map(|p| p + a.valuation().unwrap_or(p)),
        );
        // exact zero times anything is exact zero
        let p = if (a.is_exact() && a.is_zero()) || (b.is_exact() && b.is_zero()) {
            None
        } else {
            p
        };
        let bound = p.map(|p| p * a.grain);
        let mut out: BTreeMap<i64, C> = BTreeMap::new();
        for (&ka, ca) in &a.terms {
            for (&kb, cb) in &b.terms {
                let k = ka + kb;
                if bound.is_some_and(|bd| Rational64::from_integer(k) >= bd) {
                    // terms are sorted, so the rest of this row is out of range too
                    break;
                }
                let prod = ca.mul_ref(cb);
                match out.get_mut(&k) {
                    Some(c) => *c = c.add_ref(&prod),
                    None => {
                        out.insert(k, prod);
                    }
                }
            }
        }
        Ok(Self::from_raw(&a.ring, a.grain, out, p))
    }

    pub fn neg(&self) -> Self {
        PuiseuxSeries {
            grain: self.grain,
            terms: self.terms.iter().map(|(&k, c)| (k, c.neg_ref())).collect(),
            precision: self.precision,
            ring: self.ring.clone(),
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_raw(
            &self.ring,
            self.grain,
            self.terms.iter().map(|(&k, x)| (k, x.mul_ref(c))).collect(),
            self.precision,
        )
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        Self::from_raw(
            &self.ring,
            self.grain,
            self.terms.iter().map(|(&k, x)| (k, x.scale(r))).collect(),
            self.precision,
        )
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale_rational(&Rational::from_integer(n.into()))
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: Rational64) -> Self {
        let s = self.with_grain(self.grain.lcm(e.denom())).expect("lcm refines");
        let dk = *(e * s.grain).numer();
        PuiseuxSeries {
            grain: s.grain,
            terms: s.terms.into_iter().map(|(k, c)| (k + dk, c)).collect(),
            precision: prec_shift(s.precision, e),
            ring: s.ring,
        }
    }

    pub fn shift_int(&self, n: i64) -> Self {
        self.shift(Rational64::from_integer(n))
    }

    /// The substitution `q ↦ q^s` for a positive rational `s`.
    pub fn rescale(&self, s: Rational64) -> Result<Self> {
        if s <= Rational64::from_integer(0) {
            return Err(Error::Domain(format!("rescaling exponent must be positive, got {s}")));
        }
        let grain = self.grain * s.denom();
        let out = PuiseuxSeries {
            grain,
            terms: self.terms.iter().map(|(&k, c)| (k * s.numer(), c.clone())).collect(),
            precision: self.precision.map(|p| p * s),
            ring: self.ring.clone(),
        };
        Ok(out.coarsen_to(self.grain))
    }

    /// `∂_q`: `c q^e ↦ c e q^{e−1}`, precision drops by one.
    pub fn derive(&self) -> Self {
        let g = self.grain;
        let terms = self
            .terms
            .iter()
            .filter(|(&k, _)| k != 0)
            .map(|(&k, c)| (k - g, c.scale(&Rational::new(k.into(), g.into()))))
            .collect();
        Self::from_raw(&self.ring, g, terms, prec_shift(self.precision, Rational64::from_integer(-1)))
    }

    /// Applies a coefficient map into another ring.
    pub fn try_map<D, F>(&self, ring: &D::Ring, mut f: F) -> Result<PuiseuxSeries<D>>
    where
        D: Coefficient,
        F: FnMut(&C) -> Result<D>,
    {
        let mut terms = BTreeMap::new();
        for (&k, c) in &self.terms {
            terms.insert(k, f(c)?);
        }
        Ok(PuiseuxSeries::from_raw(ring, self.grain, terms, self.precision))
    }

    /// Exponent of the first coefficient where `self` and `other` differ,
    /// looking only below their common precision.
    pub fn first_difference(&self, other: &Self) -> Result<Option<Rational64>> {
        let d = self.checked_sub(other)?;
        Ok(d.lead_exponent())
    }

    /// True when `self − other` vanishes modulo `O(q^order)` and both are known that far.
    pub fn agrees_to(&self, other: &Self, order: Rational64) -> bool {
        let known = prec_min(self.precision, other.precision).is_none_or(|p| p >= order);
        known
            && self
                .truncate(order)
                .first_difference(&other.truncate(order))
                .is_ok_and(|d| d.is_none())
    }
}

impl PuiseuxSeries<Rational> {
    /// `Σ coeffs[i] q^i + O(q^precision)` over ℚ.
    pub fn from_int_coeffs(coeffs: &[i64], precision: Precision) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as i64 * MASTER_GRAIN, Rational::from_integer(c.into())))
            .collect();
        Self::from_raw(&(), MASTER_GRAIN, terms, precision)
    }

    /// Integer-exponent coefficients `[c_0, …, c_{n−1}]` (the series must have no
    /// negative or fractional exponents below `n`).
    pub fn int_coeffs(&self, n: i64) -> Vec<Rational> {
        (0..n).map(|i| self.coeff_int(i)).collect()
    }

    /// Lifts rational coefficients into a cyclotomic field.
    pub fn to_cyclotomic(&self, field: &std::sync::Arc<crate::ring::CyclotomicField>) -> CycSeries {
        self.try_map(field, |c| Ok(Cyclotomic::from_rational(field, c.clone())))
            .expect("infallible")
    }
}

impl PuiseuxSeries<Cyclotomic> {
    /// Coerces to rational coefficients, failing on any irrational coefficient.
    pub fn to_rational(&self) -> Result<QSeries> {
        self.try_map(&(), |c| {
            c.to_rational()
                .ok_or_else(|| Error::Consistency(format!("coefficient {c} is not rational")))
        })
    }
}

impl<C: Coefficient> PartialEq for PuiseuxSeries<C> {
    fn eq(&self, other: &Self) -> bool {
        if self.ring != other.ring || self.precision != other.precision {
            return false;
        }
        let (a, b) = self.unified(other);
        a.terms == b.terms
    }
}

impl<C: Coefficient + fmt::Display> fmt::Display for PuiseuxSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if e == Rational64::from_integer(0) {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})q^{e}")?;
            }
        }
        match self.precision {
            Some(p) => {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "O(q^{p})")
            }
            None if first => write!(f, "0"),
            None => Ok(()),
        }
    }
}

impl<C: Coefficient + fmt::Display> fmt::Debug for PuiseuxSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PuiseuxSeries[g={}]({})", self.grain, self)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<C: Coefficient> $tr<&PuiseuxSeries<C>> for &PuiseuxSeries<C> {
            type Output = PuiseuxSeries<C>;
            fn $method(self, rhs: &PuiseuxSeries<C>) -> PuiseuxSeries<C> {
                self.$checked(rhs).expect("series arithmetic over mismatched rings")
            }
        }
        impl<C: Coefficient> $tr<PuiseuxSeries<C>> for PuiseuxSeries<C> {
            type Output = PuiseuxSeries<C>;
            fn $method(self, rhs: PuiseuxSeries<C>) -> PuiseuxSeries<C> {
                (&self).$method(&rhs)
            }
        }
        impl<C: Coefficient> $tr<&PuiseuxSeries<C>> for PuiseuxSeries<C> {
            type Output = PuiseuxSeries<C>;
            fn $method(self, rhs: &PuiseuxSeries<C>) -> PuiseuxSeries<C> {
                (&self).$method(rhs)
            }
        }
        impl<C: Coefficient> $tr<PuiseuxSeries<C>> for &PuiseuxSeries<C> {
            type Output = PuiseuxSeries<C>;
            fn $method(self, rhs: PuiseuxSeries<C>) -> PuiseuxSeries<C> {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl<C: Coefficient> Neg for &PuiseuxSeries<C> {
    type Output = PuiseuxSeries<C>;
    fn neg(self) -> PuiseuxSeries<C> {
        PuiseuxSeries::neg(self)
    }
}

impl<C: Coefficient> Neg for PuiseuxSeries<C> {
    type Output = PuiseuxSeries<C>;
    fn neg(self) -> PuiseuxSeries<C> {
        PuiseuxSeries::neg(&self)
    }
}

#[cfg(test)]
mod tests;
