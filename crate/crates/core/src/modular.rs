//! Named q-series: eta products, Δ, E₄, the classical j-function, lattice
//! thetas and Jacobi θ₂/θ₃ with rational characteristics.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::Rational64;

use crate::error::Result;
use crate::lattice::{group_e8, SurfaceModel};
use crate::ring::{Coefficient, Cyclotomic, CyclotomicField, Rational, DEFAULT_CYCLOTOMIC_ORDER};
use crate::series::{CycSeries, QSeries, MASTER_GRAIN};

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn ceil(r: Rational64) -> i64 {
    r.ceil().to_integer()
}

/// ∏_{n≥1}(1 − qⁿ) modulo O(q^order), by Euler's pentagonal theorem.
pub fn euler_function(order: i64) -> QSeries {
    let mut terms = Vec::new();
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        for j in if k == 0 { vec![0] } else { vec![k, -k] } {
            let e = j * (3 * j - 1) / 2;
            if e < order {
                terms.push((Rational64::from_integer(e), int(if j.is_odd() { -1 } else { 1 })));
                any = true;
            }
        }
        if !any && k > 0 {
            break;
        }
        k += 1;
    }
    QSeries::from_terms(&(), MASTER_GRAIN, terms, Some(Rational64::from_integer(order.max(0))))
        .expect("integer exponents fit the grain")
}

/// q^r · ∏_{(m,e)} ∏_{n≥1}(1 − q^{mn})^e modulo O(q^order).
pub fn eta_product(spec: &[(i64, Rational64)], prefix: Rational64, order: i64) -> Result<QSeries> {
    let target = Rational64::from_integer(order) - prefix;
    let base = ceil(target).max(0);
    let mut acc = QSeries::one(&()).truncate_int(base);
    for &(m, e) in spec {
        assert!(m > 0, "eta scales must be positive");
        let euler = euler_function(Integer::div_ceil(&base, &m));
        acc = &acc * &euler.pow_rational(e)?.rescale(Rational64::from_integer(m))?;
    }
    Ok(acc.truncate(target).shift(prefix))
}

/// Δ(q) = q∏(1 − qⁿ)²⁴.
pub fn delta(order: i64) -> QSeries {
    eta_product(&[(1, 24.into())], 1.into(), order).expect("integral eta product")
}

fn sigma3(n: i64) -> i64 {
    (1..=n).filter(|d| n % d == 0).map(|d| d * d * d).sum()
}

/// E₄ = 1 + 240 Σ σ₃(n) qⁿ.
pub fn eisenstein_e4(order: i64) -> QSeries {
    let coeffs: Vec<i64> = (0..order).map(|n| if n == 0 { 1 } else { 240 * sigma3(n) }).collect();
    QSeries::from_int_coeffs(&coeffs, Some(Rational64::from_integer(order.max(0))))
}

/// j = E₄³/Δ modulo O(q^order).
pub fn classical_j(order: i64) -> Result<QSeries> {
    let e4 = eisenstein_e4(order + 1);
    let j = &(&(&e4 * &e4) * &e4) * &delta(order + 2).invert()?;
    Ok(j.truncate_int(order))
}

/// Θ_{E8}(q) = Σ_X q^{−X·X/2} by lattice enumeration.
pub fn theta_e8(order: i64) -> QSeries {
    let mut coeffs = vec![0i64; order.max(0) as usize];
    if order > 0 {
        for g in group_e8(2 * (order - 1), &[(1..=8).collect()]).iter() {
            coeffs[(g.norm / 2) as usize] += g.count as i64;
        }
    }
    QSeries::from_int_coeffs(&coeffs, Some(Rational64::from_integer(order.max(0))))
}

/// Σ_X q^{δE|·X − (d/2)X·X} over the E8 sublattice, modulo O(q^order).
pub fn theta_shifted(surface: &SurfaceModel, order: i64) -> QSeries {
    let d = surface.d();
    let mut coeffs: BTreeMap<i64, i64> = BTreeMap::new();
    if let Some(n_max) = surface.max_half_norm(order) {
        let delta = surface.delta();
        for g in group_e8(2 * n_max, &surface.symmetry_blocks()).iter() {
            let e = g.pair(&delta) + d * g.half_norm();
            if e < order {
                *coeffs.entry(e).or_default() += g.count as i64;
            }
        }
    }
    QSeries::from_terms(
        &(),
        MASTER_GRAIN,
        coeffs.into_iter().map(|(e, c)| (Rational64::from_integer(e), int(c))),
        Some(Rational64::from_integer(order)),
    )
    .expect("integer exponents fit the grain")
}

fn hex_sum(offset: Rational64, order: i64) -> QSeries {
    // Q(x, y) ≥ (x² + y²)/2, so |x|, |y| < √(2·order) + 1 suffices.
    let b = ((2.0 * order.max(0) as f64).sqrt() as i64) + 2;
    let bound = Rational64::from_integer(order);
    let mut terms = Vec::new();
    for m in -b..=b {
        for n in -b..=b {
            let x = Rational64::from_integer(m) + offset;
            let y = Rational64::from_integer(n) + offset;
            let e = x * x + x * y + y * y;
            if e < bound {
                terms.push((e, int(1)));
            }
        }
    }
    QSeries::from_terms(&(), MASTER_GRAIN, terms, Some(bound)).expect("thirds fit the grain")
}

/// Theta function of the hexagonal lattice, Q(m, n) = m² + mn + n².
pub fn theta_hex(order: i64) -> QSeries {
    hex_sum(0.into(), order)
}

/// The same sum shifted by the deep hole (1/3, 1/3).
pub fn theta_hex_deep(order: i64) -> QSeries {
    hex_sum(Rational64::new(1, 3), order)
}

fn jacobi(u: Rational64, order: Rational64, half: bool, field: &Arc<CyclotomicField>) -> Result<CycSeries> {
    let mut terms = Vec::new();
    let bound = (order.to_integer().max(0) as f64).sqrt() as i64 + 2;
    for j in -bound..=bound {
        let d = if half { Rational64::new(2 * j + 1, 2) } else { Rational64::from_integer(j) };
        let e = d * d;
        if e < order {
            let phase = u * d;
            let reduced = phase - phase.floor();
            terms.push((e, Cyclotomic::root_of_unity(field, reduced)?));
        }
    }
    CycSeries::from_terms(field, MASTER_GRAIN, terms, Some(order))
}

/// θ₂(u, q) = Σ_{d ∈ ℤ+½} e^{2πiud} q^{d²} modulo O(q^order).
pub fn jacobi_theta2(u: Rational64, order: impl Into<Rational64>, field: &Arc<CyclotomicField>) -> Result<CycSeries> {
    jacobi(u, order.into(), true, field)
}

/// θ₃(u, q) = Σ_{d ∈ ℤ} e^{2πiud} q^{d²} modulo O(q^order).
pub fn jacobi_theta3(u: Rational64, order: impl Into<Rational64>, field: &Arc<CyclotomicField>) -> Result<CycSeries> {
    jacobi(u, order.into(), false, field)
}

/// θ₂(u, q^{1/2}) modulo O(q^order).
pub fn jacobi_theta2_half(u: Rational64, order: impl Into<Rational64>, field: &Arc<CyclotomicField>) -> Result<CycSeries> {
    let order = order.into();
    jacobi_theta2(u, order * 2, field)?.rescale(Rational64::new(1, 2))
}

/// γ(q) = q^{−1/8}θ₂(1/6, q^{1/2}) / (ζ₁₂ + ζ₁₂⁻¹), with rational coefficients.
pub fn gamma_series(order: i64) -> Result<QSeries> {
    let field = CyclotomicField::new(DEFAULT_CYCLOTOMIC_ORDER);
    let eighth = Rational64::new(1, 8);
    let theta = jacobi_theta2_half(Rational64::new(1, 6), Rational64::from_integer(order) + eighth, &field)?;
    let norm = Cyclotomic::root_of_unity(&field, Rational64::new(1, 12))?
        .add_ref(&Cyclotomic::root_of_unity(&field, Rational64::new(-1, 12) + 1)?);
    theta.shift(-eighth).scale(&norm.invert()?).to_rational()
}

/// θ₃(u+v)θ₂(u−v) + θ₂(u+v)θ₃(u−v) − θ₂(u, q^{1/2})θ₂(v, q^{1/2}).
pub fn watson_residual(u: Rational64, v: Rational64, order: i64, field: &Arc<CyclotomicField>) -> Result<CycSeries> {
    let o = Rational64::from_integer(order);
    let lhs = &(&jacobi_theta3(u + v, o, field)? * &jacobi_theta2(u - v, o, field)?)
        + &(&jacobi_theta2(u + v, o, field)? * &jacobi_theta3(u - v, o, field)?);
    let rhs = &jacobi_theta2_half(u, o, field)? * &jacobi_theta2_half(v, o, field)?;
    Ok(&lhs - &rhs)
}
