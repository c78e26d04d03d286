//! Genus-zero section counts on the rational elliptic surface and the
//! fundamental equation
//!
//! q⁻¹[δE|] + ∂_q B = ψ·z⁽¹⁾(B) − η·[M̄],
//!
//! for a bulk class B = log b̄, together with the scalar quantities (ψ, η,
//! λ, z⁽²⁾) that assemble the 2×2 connection Γ.

mod solve;
mod sums;

pub use solve::{
    fit_psi_eta, fundamental_residual, gauge_transform, solve_f1_ansatz, solve_fundamental_general, F1Solution,
    FitReport, Gauge, Triple,
};
pub use sums::{bryan_leung, lambda_eig, psi_eta, trivial_bulk, z1, BulkClass, PsiEta};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::{in_span, RationalClass, SeriesClass, SurfaceModel};
use crate::ring::Rational;
use crate::series::{QSeries, SeriesMatrix};

/// z⁽²⁾ = ¼(λ² − ∂_q(λ/ψ)) modulo O(q^order).
///
/// λ is taken for a pair (i, j) inside one block of δE|-symmetric indices,
/// so that S_ij pairs to zero with both [δE|] and [M̄].
pub fn z2(surface: &SurfaceModel, order: i64) -> Result<QSeries> {
    let (i, j) = eigen_pair(surface);
    // λ/ψ has valuation −1 before it is differentiated, so ψ needs two extra orders
    let lambda = lambda_eig(surface, i, j, order + 1)?;
    let PsiEta { psi, .. } = psi_eta(surface, order + 2)?;
    z2_from(&lambda, &psi, order)
}

pub(crate) fn z2_from(lambda: &QSeries, psi: &QSeries, order: i64) -> Result<QSeries> {
    let ratio = lambda * &psi.invert()?;
    let z = (&(lambda * lambda) - &ratio.derive()).scale_rational(&Rational::new(1.into(), 4.into()));
    if let Some(e) = z.lead_exponent() {
        if e < 0.into() {
            return Err(Error::Consistency(format!("z2 has a surviving q^{e} term")));
        }
    }
    Ok(z.truncate_int(order))
}

/// First pair of exceptional indices that a δE|-preserving permutation swaps.
pub fn eigen_pair(surface: &SurfaceModel) -> (usize, usize) {
    let delta = surface.delta();
    for i in 0..9 {
        for j in i + 1..9 {
            if delta.0[1 + i] == delta.0[1 + j] {
                return (i, j);
            }
        }
    }
    unreachable!("nine indices always contain a repeated δE| coefficient")
}

/// The connection matrix Γ = [[0, ψ], [4ψz⁽²⁾, η]] and its ingredients.
#[derive(Debug, Clone)]
pub struct GammaMatrix {
    pub psi: QSeries,
    pub eta: QSeries,
    pub z2: QSeries,
    matrix: SeriesMatrix<Rational>,
}

impl GammaMatrix {
    pub fn from_parts(psi: QSeries, eta: QSeries, z2: QSeries) -> Result<Self> {
        let g21 = (&psi * &z2).scale_int(4);
        let zero = QSeries::zero(&(), None);
        let matrix = SeriesMatrix::from_rows(vec![vec![zero, psi.clone()], vec![g21, eta.clone()]])?;
        Ok(GammaMatrix { psi, eta, z2, matrix })
    }

    pub fn matrix(&self) -> &SeriesMatrix<Rational> {
        &self.matrix
    }

    /// Γ for the triple transformed by α: [[0, ψ/α], [α·4ψz⁽²⁾, η − α′/α]].
    pub fn alpha_transform(&self, alpha: &QSeries) -> Result<Self> {
        let inv = alpha.invert()?;
        let psi = &self.psi * &inv;
        let eta = &self.eta - &(&alpha.derive() * &inv);
        // 4ψ'z⁽²⁾' = α·4ψz⁽²⁾ with ψ' = ψ/α forces z⁽²⁾' = α²z⁽²⁾
        let z2 = &(alpha * alpha) * &self.z2;
        Self::from_parts(psi, eta, z2)
    }
}

/// Γ for a surface modulo O(q^order).
pub fn gamma_matrix(surface: &SurfaceModel, order: i64) -> Result<GammaMatrix> {
    let PsiEta { psi, eta, .. } = psi_eta(surface, order + 1)?;
    let z = z2(surface, order)?;
    GammaMatrix::from_parts(psi.truncate_int(order), eta.truncate_int(order), z)
}

/// ∂_qW − (ψW² − ηW − 4ψz⁽²⁾).
pub fn riccati_residual(w: &QSeries, gamma: &GammaMatrix) -> QSeries {
    let rhs = &(&(&gamma.psi * &(w * w)) - &(&gamma.eta * w)) - &(&gamma.psi * &gamma.z2).scale_int(4);
    &w.derive() - &rhs
}

/// Whether every q-coefficient of `x` lies in the span of `basis`.
pub fn coefficientwise_in_span(x: &SeriesClass, basis: &[RationalClass]) -> bool {
    let mut exponents: Vec<_> = x.0.iter().flat_map(|s| s.terms().map(|(e, _)| e)).collect();
    exponents.sort();
    exponents.dedup();
    exponents.into_iter().all(|e| {
        let v = x.map(|s| s.coeff(e).unwrap_or_else(|_| <Rational as Zero>::zero()));
        in_span(basis, &v)
    })
}

/// Coefficient vector of q^e of a series-valued class.
pub fn class_coeff(x: &SeriesClass, e: i64) -> RationalClass {
    x.map(|s| s.coeff_int(e))
}
