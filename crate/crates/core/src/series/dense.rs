//! Coefficient recurrences on a dense lattice `c_0, c_1, …` where index `i`
//! stands for the exponent `i·step/grain` relative to some base. Only the ratios
//! of exponents enter, so the same recurrences serve every lattice.

use crate::ring::{Coefficient, Rational};

fn nonzero<C: Coefficient>(a: &[C]) -> Vec<(usize, &C)> {
    a.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
}

fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// `1/a` to `n` coefficients; `a[0]` must be a unit.
pub(crate) fn inverse<C: Coefficient>(a: &[C], n: usize, ring: &C::Ring) -> Option<Vec<C>> {
    let a0_inv = a.first()?.inverse()?;
    let nz: Vec<_> = nonzero(a).into_iter().filter(|(k, _)| *k > 0).collect();
    let mut b: Vec<C> = Vec::with_capacity(n);
    for i in 0..n {
        if i == 0 {
            b.push(a0_inv.clone());
            continue;
        }
        let mut acc = C::zero(ring);
        for &(k, ak) in &nz {
            if k > i {
                break;
            }
            let bk = &b[i - k];
            if !bk.is_zero() {
                acc = acc.add_ref(&ak.mul_ref(bk));
            }
        }
        b.push(acc.mul_ref(&a0_inv).neg_ref());
    }
    Some(b)
}

/// `exp(a)` to `n` coefficients; requires `a[0] = 0`.
pub(crate) fn exp<C: Coefficient>(a: &[C], n: usize, ring: &C::Ring) -> Vec<C> {
    debug_assert!(a.first().is_none_or(|c| c.is_zero()));
    let nz: Vec<_> = nonzero(a).into_iter().filter(|(k, _)| *k > 0).collect();
    let mut f: Vec<C> = Vec::with_capacity(n);
    for i in 0..n {
        if i == 0 {
            f.push(C::one(ring));
            continue;
        }
        // i f_i = Σ_k k a_k f_{i−k}
        let mut acc = C::zero(ring);
        for &(k, ak) in &nz {
            if k > i {
                break;
            }
            let fk = &f[i - k];
            if !fk.is_zero() {
                acc = acc.add_ref(&ak.mul_ref(fk).scale(&ratio(k as i64, 1)));
            }
        }
        f.push(acc.scale(&ratio(1, i as i64)));
    }
    f
}

/// `log(f)` to `n` coefficients; requires `f[0] = 1`.
pub(crate) fn log<C: Coefficient>(f: &[C], n: usize, ring: &C::Ring) -> Vec<C> {
    let nz: Vec<_> = nonzero(f).into_iter().filter(|(k, _)| *k > 0).collect();
    let get = |i: usize| f.get(i).cloned().unwrap_or_else(|| C::zero(ring));
    let mut g: Vec<C> = Vec::with_capacity(n);
    for i in 0..n {
        if i == 0 {
            g.push(C::zero(ring));
            continue;
        }
        // i g_i = i f_i − Σ_{k=1}^{i−1} (i−k) g_{i−k} f_k
        let mut acc = get(i).scale(&ratio(i as i64, 1));
        for &(k, fk) in &nz {
            if k >= i {
                break;
            }
            let gk = &g[i - k];
            if !gk.is_zero() {
                acc = acc.sub_ref(&gk.mul_ref(fk).scale(&ratio((i - k) as i64, 1)));
            }
        }
        g.push(acc.scale(&ratio(1, i as i64)));
    }
    g
}

/// `f^r` to `n` coefficients; requires `f[0] = 1`.
pub(crate) fn pow<C: Coefficient>(f: &[C], r: &Rational, n: usize, ring: &C::Ring) -> Vec<C> {
    let nz: Vec<_> = nonzero(f).into_iter().filter(|(k, _)| *k > 0).collect();
    let mut h: Vec<C> = Vec::with_capacity(n);
    for i in 0..n {
        if i == 0 {
            h.push(C::one(ring));
            continue;
        }
        // h_i = (1/i) Σ_{k=1}^{i} (r k − (i − k)) f_k h_{i−k}
        let mut acc = C::zero(ring);
        for &(k, fk) in &nz {
            if k > i {
                break;
            }
            let hk = &h[i - k];
            if !hk.is_zero() {
                let w = r * ratio(k as i64, 1) - ratio((i - k) as i64, 1);
                acc = acc.add_ref(&fk.mul_ref(hk).scale(&w));
            }
        }
        h.push(acc.scale(&ratio(1, i as i64)));
    }
    h
}
