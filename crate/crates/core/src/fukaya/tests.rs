use super::*;
use crate::gw::psi_eta;
use crate::lattice::SurfaceModel;
use crate::ring::Rational;
use crate::series::QSeries;

fn f12() -> Arc<CyclotomicField> {
    CyclotomicField::new(12)
}

fn r(a: i64, b: i64) -> Rational64 {
    Rational64::new(a, b)
}

fn tuple(a: [i64; 4]) -> HolonomyTuple {
    HolonomyTuple::new(a.map(|n| r(n, 6))).unwrap()
}

fn int(f: &Arc<CyclotomicField>, n: i64) -> Cyclotomic {
    Cyclotomic::from_rational(f, Rational::from_integer(n.into()))
}

/// ∏_{n≥1}(1 − q^{3n}) expanded one factor at a time.
fn gamma_oracle(order: usize) -> Vec<i64> {
    let mut c = vec![0i64; order];
    c[0] = 1;
    let mut n = 3;
    while n < order {
        for k in (n..order).rev() {
            c[k] -= c[k - n];
        }
        n += 3;
    }
    c
}

#[test]
fn holonomy_tuples() {
    assert_eq!(tuple([7, 3, 5, -1]).u, [r(1, 6), r(1, 2), r(5, 6), r(5, 6)]);
    assert!(HolonomyTuple::new([r(0, 1), r(1, 6), r(1, 6), r(1, 6)]).is_err());
    let all = HolonomyTuple::all();
    assert_eq!(all.len(), 81);
    assert!(all.iter().all(|h| HolonomyTuple::new(h.u).unwrap() == *h));
}

#[test]
fn raw_product_shapes() {
    let f = f12();
    let h = tuple([1, 3, 5, 1]);
    let p = raw_products(&h, 10, &f).unwrap();
    let [u1, u2, u3, _] = h.u;
    assert_eq!(p.p123.coeff_int(0), two_cos(&f, u1 - u2 + u3).unwrap());
    assert_eq!(p.p124.get(0, 1).lead_exponent(), Some(0.into()));
    assert_eq!(p.p124.get(0, 0).coeff_int(0), int(&f, 1));
    assert_eq!(p.p234.get(1, 0).coeff_int(0), int(&f, 1));
    assert_eq!(p.p234.get(0, 0).lead_exponent(), Some(0.into()));
    assert_eq!(p.p123.precision(), Some(10.into()));
}

#[test]
fn periodicity_flips_signs() {
    let f = f12();
    let u = [r(1, 6), r(1, 2), r(5, 6), r(1, 6)];
    let a = products_for(u, 12, &f).unwrap();
    let b = products_for([u[0] + 1, u[1], u[2], u[3]], 12, &f).unwrap();
    assert_eq!(b.p123, a.p123.neg());
    assert_eq!(b.p134, a.p134.neg());
    assert_eq!(b.p124.get(0, 0), a.p124.get(0, 0));
    assert_eq!(b.p124.get(0, 1), a.p124.get(0, 1));
}

#[test]
fn basis_change_constant_term() {
    let f = f12();
    for h in HolonomyTuple::all() {
        let bc = basis_change_matrix(&h, 8, &f).unwrap();
        let (u2, u4) = (h.u[1], h.u[3]);
        let m0 = |i, j| bc.matrix.get(i, j).coeff_int(0);
        assert_eq!(m0(0, 0), two_cos(&f, u2 + u4).unwrap());
        assert_eq!(m0(0, 1), two_cos(&f, u4 - u2).unwrap());
        assert_eq!(m0(1, 0), int(&f, -1));
        assert_eq!(m0(1, 1), int(&f, 1));
    }
}

#[test]
fn basis_change_determinant() {
    let f = f12();
    let g = gamma_cyc(20, &f).unwrap();
    let g2 = &g * &g;
    for h in HolonomyTuple::all() {
        let bc = basis_change_matrix(&h, 20, &f).unwrap();
        let c = two_cos(&f, h.u[1]).unwrap().mul_ref(&two_cos(&f, h.u[3]).unwrap());
        assert_eq!(bc.det, g2.scale(&c), "{h:?}");
        let singular = h.u[1] == r(1, 2) || h.u[3] == r(1, 2);
        assert_eq!(bc.is_invertible(), !singular);
    }
    let bc = basis_change_matrix(&tuple([1, 1, 1, 1]), 20, &f).unwrap();
    assert_eq!(bc.det, g2.scale(&int(&f, 3)));
    let bc = basis_change_matrix(&tuple([1, 3, 1, 1]), 20, &f).unwrap();
    assert!(bc.det.is_zero());
}

#[test]
fn trivialized_constants() {
    let f = f12();
    let t = trivialized_products(&tuple([1, 1, 1, 1]), 20, &f).unwrap();
    assert!(t.matches_expected());
    let sqrt3 = two_cos(&f, r(1, 6)).unwrap();
    assert_eq!(t.p123, sqrt3);
    // Σ_k ... for all u = 1/6: (e^{iπ/3} − e^{−iπ/3})·0 and (√3)(√3)
    assert_eq!(t.p124, [int(&f, 0), int(&f, 3)]);
}

#[test]
fn trivialization_needs_gamma() {
    let f = f12();
    let one = CycSeries::one(&f).truncate(20.into());
    let err = trivialized_products_with_gamma(&tuple([1, 1, 1, 1]), &one, 20, &f).unwrap_err();
    assert_eq!(
        err,
        Error::NotConstant {
            what: "p123".into(),
            exponent: "3".into()
        }
    );
}

#[test]
fn singular_basis_change_is_reported() {
    let f = f12();
    let err = trivialized_products(&tuple([1, 3, 1, 3]), 10, &f).unwrap_err();
    assert!(matches!(err, Error::NotInvertible(_)));
    let t = shifted_trivialization(&tuple([1, 3, 1, 3]), 20, &f).unwrap().unwrap();
    assert_eq!(t.shift, r(1, 3));
}

#[test]
fn all_holonomies_trivialize() {
    let f = f12();
    for h in HolonomyTuple::all() {
        assert!(shifted_check(&h, 20, &f).unwrap(), "{h:?}");
    }
}

#[test]
fn vacuous_precision() {
    let f = f12();
    assert!(shifted_check(&tuple([1, 3, 5, 3]), 0, &f).unwrap());
}

#[test]
fn special_values() {
    let f = f12();
    for u in [r(1, 6), r(1, 2), r(5, 6)] {
        assert!(special_value_check(u, 30, &f).unwrap().is_zero(), "{u}");
    }
    let res = special_value_check(r(0, 1), 30, &f).unwrap();
    assert!(!res.is_zero());
}

#[test]
fn gamma_is_a_product() {
    let g = gamma_series(40).unwrap();
    let oracle = gamma_oracle(40);
    let expected = QSeries::from_int_coeffs(&oracle, Some(40.into()));
    assert_eq!(g, expected);
    let psi = psi_eta(&SurfaceModel::del_pezzo(9).unwrap(), 40).unwrap().psi;
    let g4 = &(&g * &g) * &(&g * &g);
    assert!(g4.agrees_to(&psi, 40.into()));
}

