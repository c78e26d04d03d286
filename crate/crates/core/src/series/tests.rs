use num_rational::Rational64;
use proptest::prelude::*;

use super::*;
use crate::ring::{Coefficient, CyclotomicField};

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn big(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn poly(coeffs: &[i64], prec: i64) -> QSeries {
    QSeries::from_int_coeffs(coeffs, Some(r(prec, 1)))
}

fn exact(coeffs: &[i64]) -> QSeries {
    QSeries::from_int_coeffs(coeffs, None)
}

fn mono(c: i64, e: Rational64) -> QSeries {
    QSeries::monomial(big(c, 1), e)
}

/// Brute-force ∏_{m≥1} (1 − q^m)^e over i128, truncated below q^n.
fn euler_power_oracle(e: u32, n: usize) -> Vec<i128> {
    let mut acc = vec![0i128; n];
    acc[0] = 1;
    for m in 1..n {
        for _ in 0..e {
            for i in (m..n).rev() {
                acc[i] -= acc[i - m];
            }
        }
    }
    acc
}

#[test]
fn product_examples() {
    let a = poly(&[1, 1], 3);
    let b = poly(&[1, -1], 3);
    assert_eq!(&a * &b, poly(&[1, 0, -1], 3));

    let h = mono(1, r(1, 2));
    assert_eq!(&h * &h, mono(1, r(1, 1)));

    // (q^{-1} + O(q^0)) · (q + O(q^2)) = 1 + O(q)
    let x = mono(1, r(-1, 1)).truncate(r(0, 1));
    let y = mono(1, r(1, 1)).truncate(r(2, 1));
    let p = &x * &y;
    assert_eq!(p, poly(&[1], 1));
    assert_eq!(p.precision(), Some(r(1, 1)));
}

#[test]
fn sum_precision_is_minimum() {
    let s = &poly(&[1, 2, 3, 4], 4) + &poly(&[1], 2);
    assert_eq!(s, poly(&[2, 2], 2));
}

#[test]
fn ring_mismatch_is_an_error() {
    let f12 = CyclotomicField::new(12);
    let f8 = CyclotomicField::new(8);
    let a = CycSeries::one(&f12);
    let b = CycSeries::one(&f8);
    assert!(matches!(a.checked_add(&b), Err(Error::RingMismatch(_))));
    assert!(matches!(a.checked_mul(&b), Err(Error::RingMismatch(_))));
}

#[test]
fn inversion_examples() {
    assert_eq!(poly(&[1, -1], 4).invert().unwrap(), poly(&[1, 1, 1, 1], 4));

    let inv = mono(1, r(1, 1)).truncate(r(3, 1)).invert().unwrap();
    assert_eq!(inv, mono(1, r(-1, 1)).truncate(r(1, 1)));

    let eta12: Vec<i64> = euler_power_oracle(12, 3).iter().map(|&c| c as i64).collect();
    assert_eq!(poly(&eta12, 3).invert().unwrap(), poly(&[1, 12, 90], 3));

    assert!(matches!(QSeries::zero(&(), Some(r(3, 1))).invert(), Err(Error::NotInvertible(_))));
    let f = CyclotomicField::new(12);
    let non_unit = CycSeries::zero(&f, Some(r(2, 1)));
    assert!(non_unit.invert().is_err());
}

#[test]
fn derivative_examples() {
    assert_eq!(exact(&[0, 0, 1]).derive(), exact(&[0, 2]));
    assert_eq!(
        mono(1, r(1, 2)).derive(),
        QSeries::monomial(big(1, 2), r(-1, 2))
    );
    let d = poly(&[5], 3).derive();
    assert!(d.is_zero());
    assert_eq!(d.precision(), Some(r(2, 1)));
}

#[test]
fn exp_log_examples() {
    assert_eq!(QSeries::zero(&(), None).exp_series().unwrap(), QSeries::one(&()));
    let l = poly(&[1, 1], 3).log_series().unwrap();
    let expected = QSeries::from_terms(&(), 72, [(r(1, 1), big(1, 1)), (r(2, 1), big(-1, 2))], Some(r(3, 1))).unwrap();
    assert_eq!(l, expected);
    let e = poly(&[0, 1, 1], 3).exp_series().unwrap();
    let expected = QSeries::from_terms(
        &(),
        72,
        [(r(0, 1), big(1, 1)), (r(1, 1), big(1, 1)), (r(2, 1), big(3, 2))],
        Some(r(3, 1)),
    )
    .unwrap();
    assert_eq!(e, expected);
    assert!(matches!(poly(&[1, 1], 3).exp_series(), Err(Error::Domain(_))));
    assert!(matches!(poly(&[2, 1], 3).log_series(), Err(Error::Domain(_))));
}

#[test]
fn pow_examples() {
    assert_eq!(exact(&[0, 0, 1]).pow_rational(r(1, 2)).unwrap(), mono(1, r(1, 1)));
    assert_eq!(poly(&[1, 1], 3).pow_rational(r(2, 1)).unwrap(), poly(&[1, 2, 1], 3));

    // Δ^{1/2} = q^{1/2}(1 − 12q + 54q² − 88q³ + O(q⁴))
    let mut delta = vec![0i64];
    delta.extend(euler_power_oracle(24, 4).iter().map(|&c| c as i64));
    let root = poly(&delta, 5).pow_rational(r(1, 2)).unwrap();
    let expected = poly(&[1, -12, 54, -88], 4).shift(r(1, 2));
    assert_eq!(root, expected);
    let oracle12 = euler_power_oracle(12, 4);
    assert_eq!(oracle12, vec![1, -12, 54, -88]);

    assert!(matches!(poly(&[2, 1], 3).pow_rational(r(1, 2)), Err(Error::Domain(_))));
    assert!(matches!(
        QSeries::monomial(big(1, 1), r(1, 72)).pow_rational(r(1, 2)),
        Err(Error::Grain { .. })
    ));
    // rational leading coefficient with an exact root
    assert_eq!(
        poly(&[4, 4], 3).pow_rational(r(1, 2)).unwrap(),
        QSeries::from_terms(&(), 72, [(r(0, 1), big(2, 1)), (r(1, 1), big(1, 1)), (r(2, 1), big(-1, 4))], Some(r(3, 1))).unwrap()
    );
}

#[test]
fn compose_examples() {
    let f = poly(&[3, 1, 4, 1, 5, 9], 6);
    assert_eq!(f.compose(&QSeries::q(&())).unwrap(), f);

    let geometric = poly(&[1, -1], 10).invert().unwrap();
    let c = geometric.compose(&exact(&[0, 0, 1])).unwrap();
    assert_eq!(c, poly(&[1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0], 20));

    let mut delta = vec![0i64];
    delta.extend(euler_power_oracle(24, 6).iter().map(|&c| c as i64));
    let d3 = poly(&delta, 7).compose(&exact(&[0, 0, 0, 1])).unwrap();
    assert_eq!(d3.lead_exponent(), Some(r(3, 1)));
    assert_eq!(d3, poly(&delta, 7).rescale(r(3, 1)).unwrap());

    assert!(matches!(f.compose(&poly(&[1, 1], 3)), Err(Error::Domain(_))));
}

#[test]
fn compose_precision_rule() {
    // f = 1 + q + O(q^3), g = q + q^2 + O(q^4): min(3·1, 4 + (0 − 1)·1) = 3
    let f = poly(&[1, 1], 3);
    let g = poly(&[0, 1, 1], 4);
    let c = f.compose(&g).unwrap();
    assert_eq!(c.precision(), Some(r(3, 1)));
    assert_eq!(c, poly(&[1, 1, 1], 3));
    // Laurent f: q^{-1} + O(q^2), g = q + q^2 + O(q^3): min(2, 3 − 2) = 1
    let f = mono(1, r(-1, 1)).truncate(r(2, 1));
    let g = poly(&[0, 1, 1], 3);
    let c = f.compose(&g).unwrap();
    assert_eq!(c.precision(), Some(r(1, 1)));
    assert_eq!(c, &mono(1, r(-1, 1)) + &poly(&[-1], 1));
}

#[test]
fn puiseux_compose_and_rescale() {
    // (1 + q^{1/2})(q ↦ q^2) = 1 + q
    let f = QSeries::from_terms(&(), 72, [(r(0, 1), big(1, 1)), (r(1, 2), big(1, 1))], None).unwrap();
    assert_eq!(f.compose(&exact(&[0, 0, 1])).unwrap(), exact(&[1, 1]));
    assert_eq!(f.rescale(r(2, 1)).unwrap(), exact(&[1, 1]));
}

#[test]
fn ode_examples() {
    let zero = QSeries::zero(&(), None);
    let one = QSeries::one(&());
    let gamma0 = SeriesMatrix::from_rows(vec![vec![zero.clone(), zero.clone()], vec![zero.clone(), zero.clone()]]).unwrap();
    let theta = solve_linear_ode_firstorder(&gamma0, 5).unwrap();
    let id = SeriesMatrix::identity(&(), 2).map(|x| Ok(x.truncate(r(5, 1)))).unwrap();
    assert_eq!(theta, id);

    let nil = SeriesMatrix::from_rows(vec![vec![zero.clone(), one.clone()], vec![zero.clone(), zero.clone()]]).unwrap();
    let theta = solve_linear_ode_firstorder(&nil, 5).unwrap();
    assert_eq!(theta.get(0, 1), &poly(&[0, -1], 5));
    assert_eq!(theta.get(0, 0), &poly(&[1], 5));
    assert_eq!(theta.get(1, 1), &poly(&[1], 5));
    assert!(theta.get(1, 0).is_zero());

    let pole = SeriesMatrix::from_rows(vec![vec![mono(1, r(-1, 1))]]).unwrap();
    assert!(matches!(solve_linear_ode_firstorder(&pole, 4), Err(Error::SingularConnection(_))));
}

#[test]
fn ode_residual_vanishes() {
    // Γ = [[q, 1 + q^2], [3q, 2]] with exact entries
    let g = SeriesMatrix::from_rows(vec![
        vec![exact(&[0, 1]), exact(&[1, 0, 1])],
        vec![exact(&[0, 3]), exact(&[2])],
    ])
    .unwrap();
    let theta = solve_linear_ode_firstorder(&g, 12).unwrap();
    let residual = theta.derive().checked_add(&g.checked_mul(&theta).unwrap()).unwrap();
    for e in residual.entries() {
        assert!(e.is_zero(), "{e:?}");
        assert_eq!(e.precision(), Some(r(11, 1)));
    }
}

#[test]
fn json_roundtrip() {
    let s = QSeries::from_terms(&(), 72, [(r(-1, 1), big(1, 1)), (r(1, 2), big(-8, 3))], Some(r(5, 2))).unwrap();
    let v = series_to_json(&s);
    assert_eq!(v["grain"], 72);
    assert_eq!(v["precision"], "5/2");
    assert_eq!(v["terms"][0][0], -72);
    assert_eq!(v["terms"][1][1], "-8/3");
    assert_eq!(series_from_json(&v).unwrap(), s);
}

fn arb_series(val: i64) -> impl Strategy<Value = QSeries> {
    (prop::collection::vec(-5i64..=5, 1..8), 1i64..=3).prop_map(move |(cs, den)| {
        let terms: Vec<_> = cs
            .iter()
            .enumerate()
            .map(|(i, &c)| (r(val * den + i as i64, den), big(c, 1)))
            .collect();
        let prec = r(val * den + cs.len() as i64, den);
        QSeries::from_terms(&(), 72, terms, Some(prec)).unwrap()
    })
}

fn arb_monic(val: i64) -> impl Strategy<Value = QSeries> {
    arb_series(1).prop_map(move |t| (&QSeries::one(&()) + &t).shift_int(val))
}

fn arb_unit_series() -> impl Strategy<Value = QSeries> {
    arb_series(1).prop_map(|t| &QSeries::one(&()) + &t)
}

proptest! {
    #[test]
    fn exp_log_roundtrip(t in arb_series(1)) {
        let e = t.exp_series().unwrap();
        prop_assert_eq!(e.log_series().unwrap(), t.clone());
        let u = &QSeries::one(&()) + &t;
        prop_assert_eq!(u.log_series().unwrap().exp_series().unwrap(), u);
    }

    #[test]
    fn leibniz(a in arb_series(0), b in arb_series(-1)) {
        let lhs = (&a * &b).derive();
        let rhs = &(&a.derive() * &b) + &(&a * &b.derive());
        let p = prec_min(lhs.precision(), rhs.precision()).unwrap();
        prop_assert!(lhs.agrees_to(&rhs, p));
    }

    #[test]
    fn pow_additive(a in arb_unit_series(), rn in -4i64..=4, sn in -4i64..=4, d in 1i64..=3) {
        let (rr, ss) = (r(rn, d), r(sn, d));
        let lhs = &a.pow_rational(rr).unwrap() * &a.pow_rational(ss).unwrap();
        let rhs = a.pow_rational(rr + ss).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_is_inverse(a in arb_series(-1)) {
        prop_assume!(!a.is_zero() && a.lead().is_some());
        let p = &a * &a.invert().unwrap();
        let one = QSeries::one(&()).truncate(p.precision().unwrap());
        prop_assert_eq!(p, one);
    }

    #[test]
    fn compose_associative(f in arb_series(0), g in arb_monic(1), h in arb_monic(1)) {
        let lhs = f.compose(&g).unwrap().compose(&h).unwrap();
        let rhs = f.compose(&g.compose(&h).unwrap()).unwrap();
        let p = prec_min(lhs.precision(), rhs.precision()).unwrap();
        prop_assert!(lhs.agrees_to(&rhs, p), "{:?} vs {:?}", lhs, rhs);
    }
}

#[test]
fn cyclotomic_series_arithmetic() {
    let f = CyclotomicField::new(12);
    let z = crate::ring::Cyclotomic::zeta_power(&f, 1);
    let s = CycSeries::monomial(z.clone(), r(1, 4));
    let sq = &s * &s;
    assert_eq!(sq, CycSeries::monomial(z.mul_ref(&z), r(1, 2)));
    assert!(sq.to_rational().is_err());
    let rat = CycSeries::monomial(crate::ring::Cyclotomic::from_rational(&f, big(3, 1)), r(1, 1));
    assert_eq!(rat.to_rational().unwrap(), mono(3, r(1, 1)));
}
