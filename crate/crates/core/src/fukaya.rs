//! Floer products between the Lagrangians V_{k,ζ_k} of the cubic pencil,
//! written with Jacobi theta functions, and the change of generators that
//! makes them independent of q.

use std::sync::Arc;

use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::modular::{gamma_series, jacobi_theta2, jacobi_theta2_half, jacobi_theta3};
use crate::ring::{Coefficient, Cyclotomic, CyclotomicField};
use crate::series::{CycSeries, SeriesMatrix};

/// Logarithms u_k of holonomies ζ_k = e^{2πiu_k} with ζ_k³ = −1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HolonomyTuple {
    pub u: [Rational64; 4],
}

impl HolonomyTuple {
    /// Reduces each u_k to [0, 1); they must lie in 1/6 + ℤ/3.
    pub fn new(u: [Rational64; 4]) -> Result<Self> {
        let mut out = u;
        for (k, x) in out.iter_mut().enumerate() {
            *x -= x.floor();
            if !((*x - Rational64::new(1, 6)) * 3).is_integer() {
                return Err(Error::InvalidArgument(format!("u{} = {x} is not in 1/6 + Z/3", k + 1)));
            }
        }
        Ok(Self { u: out })
    }

    /// All 81 tuples with entries in {1/6, 1/2, 5/6}.
    pub fn all() -> Vec<Self> {
        let vals = [Rational64::new(1, 6), Rational64::new(1, 2), Rational64::new(5, 6)];
        let mut out = Vec::with_capacity(81);
        for a in vals {
            for b in vals {
                for c in vals {
                    for d in vals {
                        out.push(Self { u: [a, b, c, d] });
                    }
                }
            }
        }
        out
    }
}

/// The four products in the basis of intersection points.
#[derive(Debug, Clone)]
pub struct Products {
    pub p123: CycSeries,
    pub p134: CycSeries,
    /// 1×2 row.
    pub p124: SeriesMatrix<Cyclotomic>,
    /// 2×1 column.
    pub p234: SeriesMatrix<Cyclotomic>,
}

/// e^{πi·x}.
fn half_root(field: &Arc<CyclotomicField>, x: Rational64) -> Result<Cyclotomic> {
    let h = x / 2;
    Cyclotomic::root_of_unity(field, h - h.floor())
}

/// e^{πi·x} + e^{−πi·x}.
fn two_cos(field: &Arc<CyclotomicField>, x: Rational64) -> Result<Cyclotomic> {
    Ok(half_root(field, x)?.add_ref(&half_root(field, -x)?))
}

/// e^{πi·x} − e^{−πi·x}.
fn two_i_sin(field: &Arc<CyclotomicField>, x: Rational64) -> Result<Cyclotomic> {
    Ok(half_root(field, x)?.sub_ref(&half_root(field, -x)?))
}

fn o(order: i64) -> Rational64 {
    Rational64::from_integer(order)
}

/// q^{−1/8}θ₂(x, q^{1/2}) modulo O(q^order).
fn theta2_half_normalised(x: Rational64, order: i64, field: &Arc<CyclotomicField>) -> Result<CycSeries> {
    let e = Rational64::new(1, 8);
    Ok(jacobi_theta2_half(x, o(order) + e, field)?.shift(-e))
}

/// q^{−1/4}θ₂(x, q) modulo O(q^order).
fn theta2_normalised(x: Rational64, order: i64, field: &Arc<CyclotomicField>) -> Result<CycSeries> {
    let e = Rational64::new(1, 4);
    Ok(jacobi_theta2(x, o(order) + e, field)?.shift(-e))
}

/// The products for arbitrary (unreduced) logarithms.
fn products_for(u: [Rational64; 4], order: i64, field: &Arc<CyclotomicField>) -> Result<Products> {
    let [u1, u2, u3, u4] = u;
    let w = u1 * 2 - u2 + u4;
    let x = u2 - u3 * 2 + u4;
    Ok(Products {
        p123: theta2_half_normalised(u1 - u2 + u3, order, field)?,
        p134: theta2_half_normalised(u1 - u3 + u4, order, field)?,
        p124: SeriesMatrix::from_rows(vec![vec![
            jacobi_theta3(w, o(order), field)?,
            theta2_normalised(w, order, field)?,
        ]])?,
        p234: SeriesMatrix::from_rows(vec![
            vec![theta2_normalised(x, order, field)?],
            vec![jacobi_theta3(x, o(order), field)?],
        ])?,
    })
}

/// The products modulo O(q^order), over the given cyclotomic field.
pub fn raw_products(h: &HolonomyTuple, order: i64, field: &Arc<CyclotomicField>) -> Result<Products> {
    products_for(h.u, order, field)
}

/// The change of generators of CF*(V₂, V₄) and its determinant.
#[derive(Debug, Clone)]
pub struct BasisChange {
    pub matrix: SeriesMatrix<Cyclotomic>,
    pub det: CycSeries,
}

impl BasisChange {
    /// M(0) is singular exactly when ζ₂ = −1 or ζ₄ = −1.
    pub fn is_invertible(&self) -> bool {
        self.det.coeff(Rational64::zero()).is_ok_and(|c| !c.is_zero())
    }
}

fn basis_change_for(u2: Rational64, u4: Rational64, order: i64, field: &Arc<CyclotomicField>) -> Result<BasisChange> {
    let s = u2 + u4;
    let d = u4 - u2;
    let matrix = SeriesMatrix::from_rows(vec![
        vec![theta2_normalised(s, order, field)?, theta2_normalised(d, order, field)?],
        vec![jacobi_theta3(s, o(order), field)?.neg(), jacobi_theta3(d, o(order), field)?],
    ])?;
    let det = matrix.det2()?;
    Ok(BasisChange { matrix, det })
}

pub fn basis_change_matrix(h: &HolonomyTuple, order: i64, field: &Arc<CyclotomicField>) -> Result<BasisChange> {
    basis_change_for(h.u[1], h.u[3], order, field)
}

/// The constants the trivialised products should equal.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedConstants {
    pub p123: Cyclotomic,
    pub p134: Cyclotomic,
    pub p124: [Cyclotomic; 2],
}

/// Constants for the logarithms (u₁, u₂, u₃, u₄), using e^{πiu_k} as ζ_k^{1/2}.
/// The (124) row is taken with (u₂, u₄) shifted by `shift`, as in the basis
/// change.
pub fn expected_constants(u: [Rational64; 4], shift: Rational64, field: &Arc<CyclotomicField>) -> Result<ExpectedConstants> {
    let [u1, u2, u3, u4] = u;
    let (v2, v4) = (u2 + shift, u4 + shift);
    let first = two_i_sin(field, u1 + v4)?.mul_ref(&two_i_sin(field, u1 - v2)?).neg_ref();
    let second = two_cos(field, u1 - v2 + v4)?.mul_ref(&two_cos(field, u1)?);
    Ok(ExpectedConstants {
        p123: two_cos(field, u1 - u2 + u3)?,
        p134: two_cos(field, u1 - u3 + u4)?,
        p124: [first, second],
    })
}

fn require_constant(what: &str, s: &CycSeries) -> Result<Cyclotomic> {
    if let Some((e, _)) = s.terms().find(|(e, _)| !e.is_zero()) {
        return Err(Error::NotConstant {
            what: what.into(),
            exponent: e.to_string(),
        });
    }
    Ok(s.coeff(Rational64::zero()).unwrap_or_else(|_| Cyclotomic::zero(s.ring())))
}

/// Products in the modified generators, together with the constants they
/// reduce to.
#[derive(Debug, Clone)]
pub struct Trivialized {
    /// The shift applied to (u₂, u₄) before building the basis change.
    pub shift: Rational64,
    pub products: Products,
    pub p123: Cyclotomic,
    pub p134: Cyclotomic,
    pub p124: [Cyclotomic; 2],
    pub p234: [Cyclotomic; 2],
    pub expected: ExpectedConstants,
}

impl Trivialized {
    pub fn matches_expected(&self) -> bool {
        self.p123 == self.expected.p123 && self.p134 == self.expected.p134 && self.p124 == self.expected.p124
    }
}

fn trivialize_with(
    h: &HolonomyTuple,
    shift: Rational64,
    gamma: &CycSeries,
    order: i64,
    field: &Arc<CyclotomicField>,
) -> Result<Trivialized> {
    let (v2, v4) = (h.u[1] + shift, h.u[3] + shift);
    let bc = basis_change_for(v2, v4, order, field)?;
    if !bc.is_invertible() {
        return Err(Error::NotInvertible(format!(
            "basis change for (u2, u4) = ({v2}, {v4}); try another shift"
        )));
    }
    let raw = raw_products(h, order, field)?;
    let gi = gamma.invert()?;
    let gi2 = &gi * &gi;
    let p124 = raw.p124.map(|s| s.checked_mul(&gi2))?.checked_mul(&bc.matrix)?;
    let p234 = bc.matrix.inverse2()?.checked_mul(&raw.p234)?;
    let products = Products {
        p123: &raw.p123 * &gi,
        p134: &raw.p134 * &gi,
        p124,
        p234,
    };
    Ok(Trivialized {
        shift,
        p123: require_constant("p123", &products.p123)?,
        p134: require_constant("p134", &products.p134)?,
        p124: [
            require_constant("p124[1]", products.p124.get(0, 0))?,
            require_constant("p124[2]", products.p124.get(0, 1))?,
        ],
        p234: [
            require_constant("p234[1]", products.p234.get(0, 0))?,
            require_constant("p234[2]", products.p234.get(1, 0))?,
        ],
        expected: expected_constants(h.u, shift, field)?,
        products,
    })
}

fn gamma_cyc(order: i64, field: &Arc<CyclotomicField>) -> Result<CycSeries> {
    Ok(gamma_series(order)?.to_cyclotomic(field))
}

/// p123/γ, p134/γ, (p124/γ²)·M and M⁻¹·p234, each required to be constant.
///
/// Fails with [`Error::NotInvertible`] when ζ₂ or ζ₄ is −1; use
/// [`shifted_check`] then.
pub fn trivialized_products(h: &HolonomyTuple, order: i64, field: &Arc<CyclotomicField>) -> Result<Trivialized> {
    trivialize_with(h, Rational64::zero(), &gamma_cyc(order, field)?, order, field)
}

/// As [`trivialized_products`] with a caller-supplied γ. Used to show that
/// the rescaling is needed.
pub fn trivialized_products_with_gamma(
    h: &HolonomyTuple,
    gamma: &CycSeries,
    order: i64,
    field: &Arc<CyclotomicField>,
) -> Result<Trivialized> {
    trivialize_with(h, Rational64::zero(), gamma, order, field)
}

/// Tries the shifts (u₂, u₄) + s·(1, 1) for s ∈ {0, 1/3, 2/3} and returns the
/// first that gives an invertible basis change, constant products and the
/// expected constants.
pub fn shifted_trivialization(h: &HolonomyTuple, order: i64, field: &Arc<CyclotomicField>) -> Result<Option<Trivialized>> {
    let gamma = gamma_cyc(order, field)?;
    for s in [Rational64::zero(), Rational64::new(1, 3), Rational64::new(2, 3)] {
        match trivialize_with(h, s, &gamma, order, field) {
            Ok(t) if t.matches_expected() => return Ok(Some(t)),
            Ok(_) | Err(Error::NotInvertible(_)) | Err(Error::NotConstant { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// True when some shift trivializes the products; vacuously true for order ≤ 0.
pub fn shifted_check(h: &HolonomyTuple, order: i64, field: &Arc<CyclotomicField>) -> Result<bool> {
    if order <= 0 {
        return Ok(true);
    }
    Ok(shifted_trivialization(h, order, field)?.is_some())
}

/// θ₂(u, q^{1/2}) − (e^{πiu} + e^{−πiu})q^{1/8}γ(q) modulo O(q^order).
pub fn special_value_check(u: Rational64, order: i64, field: &Arc<CyclotomicField>) -> Result<CycSeries> {
    let theta = jacobi_theta2_half(u, order, field)?;
    let rhs = gamma_cyc(order, field)?
        .shift(Rational64::new(1, 8))
        .scale(&two_cos(field, u)?)
        .truncate(o(order));
    theta.checked_sub(&rhs)
}

#[cfg(test)]
mod tests;
