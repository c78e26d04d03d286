//! Order-by-order solvers for the fundamental equation and its symmetries.

use num_rational::Rational64;
use num_traits::{One, Zero};

use super::sums::{trivial_bulk, z1, BulkClass};
use super::class_coeff;
use crate::error::{Error, Result};
use crate::lattice::{linalg, H2Class, RationalClass, SeriesClass, SurfaceModel};
use crate::ring::Rational;
use crate::series::{QSeries, MASTER_GRAIN};

/// A candidate solution (B, ψ, η) of the fundamental equation.
#[derive(Debug, Clone)]
pub struct Triple {
    pub bulk: BulkClass,
    pub psi: QSeries,
    pub eta: QSeries,
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn series_from_coeffs(coeffs: &[Rational], precision: i64) -> QSeries {
    QSeries::from_terms(
        &(),
        MASTER_GRAIN,
        coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| (Rational64::from_integer(k as i64), c.clone())),
        Some(precision.into()),
    )
    .expect("integer exponents fit the grain")
}

/// q⁻¹[δE|] + ∂_qB − ψ·z⁽¹⁾(B) + η[M̄] modulo O(q^order).
///
/// B and ψ should be known to O(q^{order+1}) and η to O(q^order).
pub fn fundamental_residual(surface: &SurfaceModel, triple: &Triple, order: i64) -> Result<SeriesClass> {
    let z = z1(surface, &triple.bulk, order)?;
    let delta = surface.delta();
    let mbar = H2Class::m_bar();
    let qinv = QSeries::monomial(Rational::one(), (-1).into());
    Ok(SeriesClass::from_fn(|slot| {
        let mut r = &triple.bulk.0[slot].derive() - &(&triple.psi * &z.0[slot]);
        if delta.0[slot] != 0 {
            r = &r + &qinv.scale_int(delta.0[slot]);
        }
        if mbar.0[slot] != 0 {
            r = &r + &triple.eta.scale_int(mbar.0[slot]);
        }
        r.truncate_int(order)
    }))
}

/// The solution with ψ = 1 and η = 0, B known modulo O(q^{order+1}).
///
/// The q^{j−1} coefficient of the equation reads (j − C)B_j = R_j, where R_j
/// only involves B_1, …, B_{j−1}. Since C² = −C, the inverse of j − C is
/// (1 + C/(j+1))/j.
pub fn solve_fundamental_general(surface: &SurfaceModel, order: i64) -> Result<BulkClass> {
    let mut coeffs: Vec<RationalClass> = Vec::new();
    let mut bulk = trivial_bulk();
    for j in 1..=order {
        let r = class_coeff(&z1(surface, &bulk, j)?, j - 1);
        let c = surface.operator_c(&r);
        let bj = H2Class::from_fn(|s| {
            (&r.0[s] + &c.0[s] / rat(j + 1)) / rat(j)
        });
        coeffs.push(bj);
        bulk = bulk_from_coeffs(&coeffs, None);
    }
    Ok(bulk_from_coeffs(&coeffs, Some(order + 1)))
}

/// Σ_j coeffs[j−1]·q^j, with the given precision (`None` for exact).
fn bulk_from_coeffs(coeffs: &[RationalClass], precision: Option<i64>) -> BulkClass {
    SeriesClass::from_fn(|s| {
        QSeries::from_terms(
            &(),
            MASTER_GRAIN,
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (Rational64::from_integer(k as i64 + 1), c.0[s].clone())),
            precision.map(Rational64::from_integer),
        )
        .expect("integer exponents fit the grain")
    })
}

/// Result of the F1 ansatz B = log β·A₀.
#[derive(Debug, Clone)]
pub struct F1Solution {
    /// β modulo O(q^{max_consistent_order+1}).
    pub beta: QSeries,
    pub psi: QSeries,
    pub eta: QSeries,
    /// The equation holds modulo O(q^max_consistent_order).
    pub max_consistent_order: i64,
}

/// Outcome of solving for (ψ, η) against a fixed bulk term.
#[derive(Debug, Clone)]
pub struct FitReport {
    pub psi: QSeries,
    pub eta: QSeries,
    /// The equation holds modulo O(q^max_consistent_order).
    pub max_consistent_order: i64,
}

/// Solves (m+1)·x·A₀ − y·[δE|] + z·[M̄] = rhs, dropping the first column
/// when `with_a0` is false. Returns (x, y, z) or `None` when inconsistent.
fn solve_step(surface: &SurfaceModel, m: i64, rhs: &RationalClass, with_a0: bool) -> Option<[Rational; 3]> {
    let delta = surface.delta();
    let a0 = H2Class::a(0);
    let mbar = H2Class::m_bar();
    let rows: Vec<Vec<Rational>> = (0..10)
        .map(|s| {
            let mut row = Vec::with_capacity(3);
            if with_a0 {
                row.push(rat((m + 1) * a0.0[s]));
            }
            row.push(rat(-delta.0[s]));
            row.push(rat(mbar.0[s]));
            row
        })
        .collect();
    let x = linalg::solve(&rows, &rhs.0)?;
    Some(if with_a0 {
        [x[0].clone(), x[1].clone(), x[2].clone()]
    } else {
        [Rational::zero(), x[0].clone(), x[1].clone()]
    })
}

/// Σ_{i=0}^{m} ψ_i·z_{m−i}, with z_k the q^k coefficient of z⁽¹⁾.
fn convolve(psi: &[Rational], z: &SeriesClass, m: i64) -> RationalClass {
    let mut acc = RationalClass::from_fn(|_| Rational::zero());
    for (i, p) in psi.iter().enumerate().take(m as usize + 1) {
        if p.is_zero() {
            continue;
        }
        let c = class_coeff(z, m - i as i64);
        acc = acc.plus(&c.times_scalar(p));
    }
    acc
}

fn check_leading(surface: &SurfaceModel, z: &SeriesClass) -> bool {
    class_coeff(z, -1) == surface.delta().to_rational()
}

/// Solves for ψ ∈ 1 + qℚ[[q]] and η with the bulk held fixed, stopping at
/// the first order where no (ψ, η) exists.
pub fn fit_psi_eta(surface: &SurfaceModel, bulk: &BulkClass, order: i64) -> Result<FitReport> {
    let z = z1(surface, bulk, order)?;
    let mut psi = vec![Rational::one()];
    let mut eta = Vec::new();
    let mut reached = if check_leading(surface, &z) { order } else { -1 };
    for m in 0..order.max(0) {
        if reached < order {
            break;
        }
        let mut rhs = convolve(&psi, &z, m);
        let b_next = class_coeff(bulk, m + 1);
        rhs = rhs.minus(&b_next.times_int(m + 1));
        match solve_step(surface, m, &rhs, false) {
            Some([_, y, e]) => {
                psi.push(y);
                eta.push(e);
            }
            None => reached = m,
        }
    }
    let reached = reached.max(0).min(order);
    psi.truncate(reached as usize + 1);
    eta.truncate(reached as usize);
    Ok(FitReport {
        psi: series_from_coeffs(&psi, reached + 1),
        eta: series_from_coeffs(&eta, reached),
        max_consistent_order: reached,
    })
}

/// Solves the fundamental equation on dp8 with B = log β·A₀, unknowns
/// (β, ψ, η), up to O(q^order) or the first inconsistent order.
pub fn solve_f1_ansatz(order: i64) -> Result<F1Solution> {
    let surface = SurfaceModel::del_pezzo(8)?;
    let a0 = H2Class::a(0);
    let mut logb = vec![Rational::zero()];
    let mut psi = vec![Rational::one()];
    let mut eta = Vec::new();
    let mut reached = order.max(0);
    for m in 0..order.max(0) {
        let log_beta = QSeries::from_terms(
            &(),
            MASTER_GRAIN,
            logb.iter().enumerate().map(|(k, c)| (Rational64::from_integer(k as i64), c.clone())),
            None,
        )?;
        let bulk = SeriesClass::from_fn(|_| QSeries::zero(&(), None)).add_multiple(&log_beta, &a0);
        let z = z1(&surface, &bulk, m + 1)?;
        if m == 0 && !check_leading(&surface, &z) {
            return Err(Error::Consistency("z1 does not start with q^-1[δE|]".into()));
        }
        let rhs = convolve(&psi, &z, m);
        match solve_step(&surface, m, &rhs, true) {
            Some([l, y, e]) => {
                logb.push(l);
                psi.push(y);
                eta.push(e);
            }
            None => {
                reached = m;
                break;
            }
        }
    }
    let log_beta = series_from_coeffs(&logb, reached + 1);
    Ok(F1Solution {
        beta: log_beta.exp_series()?,
        psi: series_from_coeffs(&psi, reached + 1),
        eta: series_from_coeffs(&eta, reached),
        max_consistent_order: reached,
    })
}

/// The symmetries of the fundamental equation.
#[derive(Debug, Clone)]
pub enum Gauge {
    /// α ∈ 1 + qℚ[[q]]: (B + log α·[M̄], ψ/α, η − α′/α).
    Alpha(QSeries),
    /// β ∈ q + q²ℚ[[q]]: (B∘β + log(β/q)·[δE|], ψ(β)·β′, η(β)·β′).
    Beta(QSeries),
    /// [`Gauge::Beta`] followed by `Alpha(β′)`, which keeps ψ = 1 when it was 1.
    BetaNormalized(QSeries),
}

fn unit_lead(s: &QSeries, exponent: i64) -> bool {
    s.lead()
        .is_some_and(|(e, c)| e == Rational64::from_integer(exponent) && c.is_one())
}

pub fn gauge_transform(surface: &SurfaceModel, triple: &Triple, gauge: &Gauge) -> Result<Triple> {
    match gauge {
        Gauge::Alpha(alpha) => {
            if !unit_lead(alpha, 0) {
                return Err(Error::InvalidArgument("α must lie in 1 + qℚ[[q]]".into()));
            }
            let inv = alpha.invert()?;
            Ok(Triple {
                bulk: triple.bulk.add_multiple(&alpha.log_series()?, &H2Class::m_bar()),
                psi: &triple.psi * &inv,
                eta: &triple.eta - &(&alpha.derive() * &inv),
            })
        }
        Gauge::Beta(beta) => {
            if !unit_lead(beta, 1) {
                return Err(Error::InvalidArgument("β must lie in q + q²ℚ[[q]]".into()));
            }
            let db = beta.derive();
            let sub = |s: &QSeries| -> Result<QSeries> {
                if s.is_exact() && s.is_zero() {
                    Ok(s.clone())
                } else {
                    s.compose(beta)
                }
            };
            let log_ratio = beta.shift_int(-1).log_series()?;
            let mut bulk = triple.bulk.clone();
            for s in bulk.0.iter_mut() {
                *s = sub(s)?;
            }
            Ok(Triple {
                bulk: bulk.add_multiple(&log_ratio, &surface.delta()),
                psi: &sub(&triple.psi)? * &db,
                eta: &sub(&triple.eta)? * &db,
            })
        }
        Gauge::BetaNormalized(beta) => {
            let t = gauge_transform(surface, triple, &Gauge::Beta(beta.clone()))?;
            gauge_transform(surface, &t, &Gauge::Alpha(beta.derive()))
        }
    }
}
