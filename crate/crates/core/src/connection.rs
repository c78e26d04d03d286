//! The fundamental solution Θ of (∂_q + Γ)Θ = 0, the Möbius action it
//! induces on eigenvalues and disc potentials, and the mirror map.

use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gw::{gamma_matrix, GammaMatrix};
use crate::lattice::SurfaceModel;
use crate::modular::{classical_j, eta_product, theta_hex, theta_hex_deep};
use crate::ring::Rational;
use crate::series::{solve_linear_ode_firstorder, QSeries, SeriesMatrix};

/// Θ ∈ GL₂(ℚ[[q]]) with Θ(0) = Id, known modulo O(q^order).
#[derive(Debug, Clone)]
pub struct FundamentalSolution {
    pub theta: SeriesMatrix<Rational>,
    pub gamma: GammaMatrix,
    pub order: i64,
}

impl FundamentalSolution {
    /// Entry (i, j), 1-based as in Θ₁₁ … Θ₂₂.
    pub fn entry(&self, i: usize, j: usize) -> &QSeries {
        self.theta.get(i - 1, j - 1)
    }

    /// ∂_qΘ + ΓΘ.
    pub fn residual(&self) -> Result<SeriesMatrix<Rational>> {
        self.theta.derive().checked_add(&self.gamma.matrix().checked_mul(&self.theta)?)
    }

    /// ∂_q det Θ + tr(Γ)·det Θ, which vanishes by Abel's identity.
    pub fn abel_residual(&self) -> Result<QSeries> {
        let det = self.theta.det2()?;
        Ok(&det.derive() + &(&self.gamma.matrix().trace()? * &det))
    }
}

/// Solves (∂_q + Γ)Θ = 0 order by order.
pub fn fundamental_solution(gamma: &GammaMatrix, order: i64) -> Result<FundamentalSolution> {
    let theta = solve_linear_ode_firstorder(gamma.matrix(), order)?;
    let order = theta.precision().map_or(order, |p| p.to_integer());
    Ok(FundamentalSolution {
        theta,
        gamma: gamma.clone(),
        order,
    })
}

/// Θ for a surface, modulo O(q^order).
pub fn surface_solution(surface: &SurfaceModel, order: i64) -> Result<FundamentalSolution> {
    fundamental_solution(&gamma_matrix(surface, order - 1)?, order)
}

/// (Θ₂₁r + Θ₂₂s)/(Θ₁₁r + Θ₁₂s).
pub fn moebius_value(fs: &FundamentalSolution, r: &Rational, s: &Rational) -> Result<QSeries> {
    if r.is_zero() && s.is_zero() {
        return Err(Error::InvalidArgument("(r, s) must not both vanish".into()));
    }
    let num = &fs.entry(2, 1).scale_rational(r) + &fs.entry(2, 2).scale_rational(s);
    let den = &fs.entry(1, 1).scale_rational(r) + &fs.entry(1, 2).scale_rational(s);
    Ok(&num * &den.invert()?)
}

/// The solution W = s + O(q) of the Riccati equation.
pub fn riccati_solution(fs: &FundamentalSolution, s: &Rational) -> Result<QSeries> {
    moebius_value(fs, &Rational::from_integer(1.into()), s)
}

/// z = −Θ₁₁/Θ₁₂.
pub fn mirror_map(fs: &FundamentalSolution) -> Result<QSeries> {
    let t12 = fs.entry(1, 2);
    if t12.is_zero() {
        return Err(Error::Domain("Θ₁₂ vanishes to the known precision".into()));
    }
    Ok(-(fs.entry(1, 1) * &t12.invert()?))
}

fn check_leading(z: &QSeries) -> Result<()> {
    match z.lead() {
        Some((e, c)) if e == Rational64::from_integer(-1) && *c == Rational::from_integer(1.into()) => Ok(()),
        _ => Err(Error::Domain("expected a series q⁻¹ + …".into())),
    }
}

/// j(z) = z³(z³ − 24)³/(z³ − 27), expanded as w⁻³(1 − 24w)³/(1 − 27w)
/// with w = z⁻³.
pub fn j_of_z(z: &QSeries) -> Result<QSeries> {
    check_leading(z)?;
    let zi = z.invert()?;
    let w = &(&zi * &zi) * &zi;
    let one = QSeries::one(&());
    let a = &one - &w.scale_int(24);
    let num = &(&a * &a) * &a;
    let den = (&one - &w.scale_int(27)).invert()?;
    let wi = w.invert()?;
    Ok(&(&(&wi * &wi) * &wi) * &(&num * &den))
}

/// The classical j-function at parameter q⁹, modulo O(q^order).
pub fn classical_j_q9(order: i64) -> Result<QSeries> {
    let inner = (order + 9).div_euclid(9) + 1;
    Ok(classical_j(inner)?.rescale(Rational64::from_integer(9))?.truncate_int(order))
}

/// z̃ = z⁻³ written in q̃ = q³; every exponent of z⁻³ must be a multiple of 3.
pub fn hesse_reparam(z: &QSeries) -> Result<QSeries> {
    check_leading(z)?;
    let zi = z.invert()?;
    let w = &(&zi * &zi) * &zi;
    for (e, _) in w.terms() {
        if !(e / 3).is_integer() {
            return Err(Error::Grain {
                exponent: e.to_string(),
                grain: 3,
            });
        }
    }
    w.rescale(Rational64::new(1, 3))
}

/// Exponent up to which two series agree: the first differing exponent,
/// or the common precision when none differs.
pub fn agreement(a: &QSeries, b: &QSeries) -> Result<Option<Rational64>> {
    let diff = a.checked_sub(b)?;
    Ok(diff.lead_exponent().or(diff.precision()))
}

/// Agreement orders for the closed forms suggested for Θ₁₁ and Θ₁₂ on dp9.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OberdieckReport {
    /// Θ₁₁ against Θ_hex(q³).
    pub theta11_hex: Option<Rational64>,
    /// Θ₁₂ against −⅓Θ_{hex+d}(q³).
    pub theta12_deep_hole: Option<Rational64>,
    /// Θ₁₂ against −Δ(q⁹)^{1/8}/Δ(q³)^{1/24}.
    pub theta12_eta: Option<Rational64>,
    /// −⅓Θ_{hex+d}(q³) against the same eta quotient.
    pub deep_hole_eta: Option<Rational64>,
    /// Θ₁₂ divided by −Δ(q⁹)^{1/8}/(3Δ(q³)^{1/24}) when that ratio is a
    /// constant; the extra 3 in the denominator makes it 3, not 1.
    pub three_denominator_ratio: Option<Rational>,
}

/// −Δ(q⁹)^{1/8}/Δ(q³)^{1/24} = −q ∏(1 − q⁹ⁿ)³/(1 − q³ⁿ).
pub fn oberdieck_eta_quotient(order: i64) -> Result<QSeries> {
    let p = eta_product(&[(9, 3.into()), (3, (-1).into())], 1.into(), order)?;
    Ok(-p)
}

/// The ratio a/b when it is constant to the known precision.
fn constant_ratio(a: &QSeries, b: &QSeries) -> Result<Option<Rational>> {
    let Some((e, c)) = b.lead() else { return Ok(None) };
    let c = a.coeff(e)? / c.clone();
    Ok(a.checked_sub(&b.scale_rational(&c))?.is_zero().then_some(c))
}

fn hex_at_q3(deep: bool, order: i64) -> Result<QSeries> {
    let inner = order.div_euclid(3) + 1;
    let t = if deep { theta_hex_deep(inner) } else { theta_hex(inner) };
    Ok(t.rescale(Rational64::from_integer(3))?.truncate_int(order))
}

/// Compares Θ for dp9 (modulo O(q^order)) with the closed forms; the
/// deep-hole identity, which does not involve Θ, is checked to `order + 8`.
pub fn oberdieck_check(order: i64) -> Result<OberdieckReport> {
    let fs = surface_solution(&SurfaceModel::del_pezzo(9)?, order)?;
    let third = Rational::new((-1).into(), 3.into());
    let deep = hex_at_q3(true, order + 8)?.scale_rational(&third);
    let eta = oberdieck_eta_quotient(order)?;
    Ok(OberdieckReport {
        theta11_hex: agreement(fs.entry(1, 1), &hex_at_q3(false, order)?)?,
        theta12_deep_hole: agreement(fs.entry(1, 2), &hex_at_q3(true, order)?.scale_rational(&third))?,
        theta12_eta: agreement(fs.entry(1, 2), &eta)?,
        deep_hole_eta: agreement(&deep, &oberdieck_eta_quotient(order + 8)?)?,
        three_denominator_ratio: constant_ratio(fs.entry(1, 2), &eta.scale_rational(&(-third.clone())))?,
    })
}
