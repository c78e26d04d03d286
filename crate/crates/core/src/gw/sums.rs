//! Lattice sums over section classes A = A₀ + X + (½(−X·X) + k)[M̄].

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::lattice::{group_e8, linalg, H2Class, LatticeGroup, SeriesClass, SurfaceModel};
use crate::modular::{eta_product, theta_shifted};
use crate::ring::Rational;
use crate::series::{QSeries, MASTER_GRAIN};

/// B = log b̄, one series per slot; every coefficient has valuation ≥ 1.
pub type BulkClass = SeriesClass;

pub fn trivial_bulk() -> BulkClass {
    SeriesClass::from_fn(|_| QSeries::zero(&(), None))
}

/// Σ z_k q^k = ∏ (1 − qᵐ)^{−12}.
pub fn bryan_leung(order: i64) -> QSeries {
    eta_product(&[(1, (-12).into())], 0.into(), order).expect("integral eta product")
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn is_exact_zero(s: &QSeries) -> bool {
    s.is_exact() && s.is_zero()
}

fn check_bulk(bulk: &BulkClass) -> Result<()> {
    for (slot, s) in bulk.0.iter().enumerate() {
        if let Some(e) = s.lead_exponent() {
            if e < Rational64::from_integer(1) {
                return Err(Error::InvalidArgument(format!(
                    "bulk coefficient in slot {slot} has a q^{e} term, valuation must be at least 1"
                )));
            }
        }
    }
    Ok(())
}

/// Symmetry blocks split further wherever the bulk coefficients differ,
/// so that B is constant on every block.
fn bulk_blocks(surface: &SurfaceModel, bulk: &BulkClass) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for block in surface.symmetry_blocks() {
        let mut parts: Vec<Vec<usize>> = Vec::new();
        for i in block {
            match parts.iter_mut().find(|p| bulk.0[1 + p[0]] == bulk.0[1 + i]) {
                Some(p) => p.push(i),
                None => parts.push(vec![i]),
            }
        }
        out.extend(parts);
    }
    out
}

/// exp(s) to O(q^prec), exact 1 when s is the exact zero.
fn exp_to(s: &QSeries, prec: i64) -> Result<QSeries> {
    if is_exact_zero(s) {
        Ok(QSeries::one(&()))
    } else {
        s.truncate_int(prec).exp_series()
    }
}

/// Z(w) and Σ k z_k w^k for w = q^d·e^{s}, modulo O(q^prec).
fn bl_sums(w_log: &QSeries, d: i64, prec: i64) -> Result<(QSeries, QSeries)> {
    let n = Integer::div_ceil(&prec.max(0), &d) + 1;
    let z = bryan_leung(n);
    let zk = QSeries::from_terms(
        &(),
        MASTER_GRAIN,
        (0..n).map(|k| (Rational64::from_integer(k), z.coeff_int(k) * rat(k))),
        z.precision(),
    )?;
    let w = exp_to(w_log, prec)?.shift_int(d);
    let w = if w.is_exact() { w } else { w.truncate_int(prec + d) };
    Ok((z.compose(&w)?.truncate_int(prec), zk.compose(&w)?.truncate_int(prec)))
}

/// x ↦ B·x factored through a few integral functionals: B·x = Σ_i φ_i(x)·Φ_i(q).
struct PairingBasis {
    functionals: Vec<[i64; 10]>,
    series: Vec<QSeries>,
}

impl PairingBasis {
    fn new(bulk: &BulkClass) -> Self {
        // diagonal of the intersection form
        let weights: [i64; 10] = std::array::from_fn(|s| if s == 0 { 1 } else { -1 });
        let bulk = &bulk.0;
        let mut exps: Vec<Rational64> = bulk.iter().flat_map(|b| b.terms().map(|(e, _)| e)).collect();
        exps.sort();
        exps.dedup();
        // row t: x ↦ coefficient of q^{exps[t]} in B·x
        let rows: Vec<Vec<Rational>> = exps
            .iter()
            .map(|&e| (0..10).map(|s| bulk[s].coeff(e).expect("below precision") * rat(weights[s])).collect())
            .collect();
        let mut reduced = rows.clone();
        let pivots = linalg::rref(&mut reduced);
        let mut functionals = Vec::new();
        let mut series = Vec::new();
        for (i, &p) in pivots.iter().enumerate() {
            // clear denominators of the reduced row
            let l = reduced[i].iter().fold(num_bigint::BigInt::from(1), |acc, c| acc.lcm(c.denom()));
            let scaled: [i64; 10] = std::array::from_fn(|s| {
                i64::try_from((&reduced[i][s] * Rational::from_integer(l.clone())).to_integer()).expect("small functional")
            });
            functionals.push(scaled);
            // F = C·R with C = F[:, pivots], and φ_i = l·R_i
            let terms = exps.iter().zip(&rows).map(|(&e, row)| (e, &row[p] / Rational::from_integer(l.clone())));
            series.push(QSeries::from_terms(&(), MASTER_GRAIN, terms, None).expect("bulk exponents fit the grain"));
        }
        PairingBasis { functionals, series }
    }

    fn key(&self, sum: &[i64; 10], count: i64) -> Vec<Rational64> {
        self.functionals
            .iter()
            .map(|f| Rational64::new(f.iter().zip(sum).map(|(a, b)| a * b).sum(), count))
            .collect()
    }

    fn series(&self, key: &[Rational64]) -> QSeries {
        let mut acc = QSeries::zero(&(), None);
        for (k, s) in key.iter().zip(&self.series) {
            if !num_traits::Zero::is_zero(k) {
                acc = &acc + &s.scale_rational(&Rational::new((*k.numer()).into(), (*k.denom()).into()));
            }
        }
        acc
    }
}

fn exponent(g: &LatticeGroup, delta: &H2Class, d: i64) -> i64 {
    g.pair(delta) + d * g.half_norm()
}

/// Σ over section classes of q^{δE|·A}·e^{B·A}·z_k·A modulo O(q^order).
pub fn z1(surface: &SurfaceModel, bulk: &BulkClass, order: i64) -> Result<SeriesClass> {
    check_bulk(bulk)?;
    let d = surface.d();
    let delta = surface.delta();
    let a0 = H2Class::a(0);
    let mbar = H2Class::m_bar();
    let e_a0 = delta.intersect(&a0);
    let target = order - e_a0;
    let empty = || QSeries::zero(&(), Some(Rational64::from_integer(target)));
    let Some(n_max) = surface.max_half_norm(target) else {
        return Ok(SeriesClass::from_fn(|_| QSeries::zero(&(), Some(order.into()))));
    };
    let blocks = bulk_blocks(surface, bulk);
    let groups = group_e8(2 * n_max, &blocks);
    let b_m = bulk.pair_int(&mbar);

    // Groups with equal (exponent, n, B·X) share their weight; merging them
    // first means one exponential per distinct key. When B lies in
    // span{[δE|], [M̄]} that is one per value of δE|·X.
    let pairing = PairingBasis::new(bulk);
    let mut merged: BTreeMap<(i64, i64, Vec<Rational64>), (i64, [i64; 10])> = BTreeMap::new();
    let mut emin = 0;
    for g in groups.iter() {
        let e = exponent(g, &delta, d);
        if e >= target {
            continue;
        }
        emin = emin.min(e);
        let count = g.count as i64;
        let key = pairing.key(&g.sum, count);
        let slot = merged.entry((e, g.half_norm(), key)).or_insert((0, [0; 10]));
        slot.0 += count;
        for (acc, c) in slot.1.iter_mut().zip(g.sum) {
            *acc += c;
        }
    }

    let mut s0 = empty();
    let mut sn = empty();
    let mut sx: [QSeries; 10] = std::array::from_fn(|_| empty());
    for ((e, n, key), (count, sum)) in merged {
        let bx = pairing.series(&key);
        let weight = exp_to(&(&bx + &b_m.scale_int(n)), target - e)?.shift_int(e);
        s0 = &s0 + &weight.scale_int(count);
        sn = &sn + &weight.scale_int(n * count);
        for (slot, &c) in sum.iter().enumerate() {
            if c != 0 {
                sx[slot] = &sx[slot] + &weight.scale_int(c);
            }
        }
    }

    let (z, zk) = bl_sums(&b_m, d, target - emin)?;
    let zk_s0 = &zk * &s0;
    let pre = exp_to(&bulk.pair_int(&a0), target - emin)?.shift_int(e_a0);
    let out = SeriesClass::from_fn(|slot| {
        let mut inner = sx[slot].clone();
        if a0.0[slot] != 0 {
            inner = &inner + &s0.scale_int(a0.0[slot]);
        }
        let mut total = &z * &inner;
        if mbar.0[slot] != 0 {
            total = &total + &(&(&z * &sn) + &zk_s0).scale_int(mbar.0[slot]);
        }
        (&pre * &total).truncate_int(order)
    });
    Ok(out)
}

/// ψ and η = −∂_qψ/ψ for the trivial bulk term.
#[derive(Debug, Clone)]
pub struct PsiEta {
    pub psi: QSeries,
    pub eta: QSeries,
    /// False for surfaces where the trivial bulk does not solve the equation;
    /// the series are still computed from the same formula.
    pub admits_trivial_bulk: bool,
}

/// 1/ψ = (1/d)·q^{1 + δE|·A₀}·Z(q^d)·Σ_X q^{δE|·X − (d/2)X·X}, both modulo O(q^order).
pub fn psi_eta(surface: &SurfaceModel, order: i64) -> Result<PsiEta> {
    let d = surface.d();
    let s = 1 + surface.delta().intersect(&H2Class::a(0));
    let inner_order = order + 4;
    let z = bryan_leung(Integer::div_ceil(&inner_order.max(0), &d) + 1)
        .rescale(Rational64::from_integer(d))?
        .truncate_int(inner_order);
    let inner = &z * &theta_shifted(surface, inner_order);
    let psi = inner.invert()?.scale_int(d).shift_int(-s);
    debug_assert!(psi.precision().is_some_and(|p| p >= Rational64::from_integer(order + 1)));
    let psi = psi.truncate_int(order + 1);
    let eta = -(&psi.derive() * &psi.invert()?);
    Ok(PsiEta {
        psi: psi.truncate_int(order),
        eta: eta.truncate_int(order),
        admits_trivial_bulk: surface.admits_trivial_bulk(),
    })
}

/// λ = −½ Σ_{M̄·A = 1} q^{δE|·A} z_k (A·S_ij)², S_ij = A_i − A_j, modulo O(q^order).
pub fn lambda_eig(surface: &SurfaceModel, i: usize, j: usize, order: i64) -> Result<QSeries> {
    if i >= j || j > 8 {
        return Err(Error::InvalidArgument(format!("need 0 ≤ i < j ≤ 8, got ({i}, {j})")));
    }
    let d = surface.d();
    let delta = surface.delta();
    let e_a0 = delta.intersect(&H2Class::a(0));
    let target = order - e_a0;
    let Some(n_max) = surface.max_half_norm(target) else {
        return Ok(QSeries::zero(&(), Some(order.into())));
    };
    let blocks = surface.symmetry_blocks();
    let groups = group_e8(2 * n_max, &blocks);
    // A·S_ij = a + c_j − c_i for A = A₀ + X + m[M̄]
    let a = (j == 0) as i64 - (i == 0) as i64;
    let mut terms = Vec::new();
    let mut emin = 0;
    for g in groups.iter() {
        let e = exponent(g, &delta, d);
        if e >= target {
            continue;
        }
        emin = emin.min(e);
        let count = g.count as i64;
        let linear = g.sum[1 + j] - g.sum[1 + i];
        let m2 = rat(count * a * a + 2 * a * linear) + g.second_moment(&blocks, j, j) + g.second_moment(&blocks, i, i)
            - g.second_moment(&blocks, i, j) * rat(2);
        terms.push((Rational64::from_integer(e), m2));
    }
    let sum = QSeries::from_terms(&(), MASTER_GRAIN, terms, Some(target.into()))?;
    let prec = target - emin;
    let z = bryan_leung(Integer::div_ceil(&prec.max(0), &d) + 1)
        .rescale(Rational64::from_integer(d))?
        .truncate_int(prec);
    Ok((&z * &sum).shift_int(e_a0).scale_rational(&Rational::new((-1).into(), 2.into())).truncate_int(order))
}
