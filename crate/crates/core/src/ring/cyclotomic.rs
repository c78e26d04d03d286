use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};

use super::{format_rational, Rational};
use crate::error::{Error, Result};

/// Covers every root of unity (and square root of a sixth root of −1) used by
/// the cubic-pencil theta computations.
pub const DEFAULT_CYCLOTOMIC_ORDER: u32 = 12;

/// The N-th cyclotomic polynomial, integer coefficients, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n > 0, "cyclotomic order must be positive");
    // x^n - 1 = prod_{d | n} Phi_d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            num = exact_int_div(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_int_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    debug_assert_eq!(den[dd], 1);
    let mut quot = vec![0i64; rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[i + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// ℚ(ζ_N), represented as ℚ[x]/Φ_N(x).
#[derive(Debug)]
pub struct CyclotomicField {
    order: u32,
    modulus: Vec<i64>,
    /// x^k mod Φ_N for k in 0..N
    zeta_powers: Vec<Vec<Rational>>,
}

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl CyclotomicField {
    /// Shared handle to ℚ(ζ_N); fields are cached per order.
    pub fn new(order: u32) -> Arc<Self> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CyclotomicField>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let mut cache = cache.lock().expect("cyclotomic cache poisoned");
        cache
            .entry(order)
            .or_insert_with(|| Arc::new(Self::build(order)))
            .clone()
    }

    fn build(order: u32) -> Self {
        let modulus = cyclotomic_polynomial(order);
        let deg = modulus.len() - 1;
        let mut zeta_powers = Vec::with_capacity(order as usize);
        let mut cur = vec![Rational::zero(); deg];
        cur[0] = Rational::one();
        for _ in 0..order {
            zeta_powers.push(cur.clone());
            // multiply by x
            let top = cur[deg - 1].clone();
            for i in (1..deg).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = Rational::zero();
            if !top.is_zero() {
                for (i, c) in cur.iter_mut().enumerate() {
                    *c -= &top * Rational::from_integer(modulus[i].into());
                }
            }
        }
        CyclotomicField {
            order,
            modulus,
            zeta_powers,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// φ(N), the dimension over ℚ.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    fn reduce(&self, mut poly: Vec<Rational>) -> Vec<Rational> {
        let deg = self.degree();
        while poly.len() > deg {
            let top = poly.pop().expect("nonempty");
            if top.is_zero() {
                continue;
            }
            let shift = poly.len() - deg;
            for (i, &m) in self.modulus[..deg].iter().enumerate() {
                if m != 0 {
                    poly[shift + i] -= &top * Rational::from_integer(m.into());
                }
            }
        }
        poly.resize(deg, Rational::zero());
        poly
    }
}

/// An element of ℚ(ζ_N) in canonical form: a polynomial in ζ of degree < φ(N).
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<CyclotomicField>,
    coeffs: Vec<Rational>,
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.coeffs == other.coeffs
    }
}

impl Eq for Cyclotomic {}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic<{}>({})", self.field.order, self)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})ζ")?,
                _ => write!(f, "({c})ζ^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Cyclotomic {
    /// Reduces an arbitrary polynomial in ζ (lowest degree first) to canonical form.
    pub fn from_poly(field: &Arc<CyclotomicField>, poly: Vec<Rational>) -> Self {
        Cyclotomic {
            field: field.clone(),
            coeffs: field.reduce(poly),
        }
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, r: Rational) -> Self {
        Self::from_poly(field, vec![r])
    }

    /// ζ_N^k for any integer k.
    pub fn zeta_power(field: &Arc<CyclotomicField>, k: i64) -> Self {
        let idx = k.rem_euclid(field.order as i64) as usize;
        Cyclotomic {
            field: field.clone(),
            coeffs: field.zeta_powers[idx].clone(),
        }
    }

    /// e^{2πi r} as a power of ζ_N; `r`'s reduced denominator must divide N.
    pub fn root_of_unity(field: &Arc<CyclotomicField>, r: Rational64) -> Result<Self> {
        let n = field.order as i64;
        let den = *r.denom();
        if n % den != 0 {
            return Err(Error::UnsupportedOrder {
                denominator: den,
                order: field.order,
            });
        }
        Ok(Self::zeta_power(field, r.numer() * (n / den)))
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    /// Canonical coefficients, lowest power of ζ first.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Inverse via the extended Euclidean algorithm in ℚ[x] modulo Φ_N.
    pub fn invert(&self) -> Result<Self> {
        if self.coeffs.iter().all(Zero::is_zero) {
            return Err(Error::DivisionByZero);
        }
        let modulus: Vec<Rational> = self
            .field
            .modulus
            .iter()
            .map(|&m| Rational::from_integer(m.into()))
            .collect();
        // invariant: s * self ≡ r (mod Φ)
        let (mut r0, mut r1) = (modulus, trim(self.coeffs.clone()));
        let (mut s0, mut s1) = (Vec::<Rational>::new(), vec![Rational::one()]);
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // Φ is irreducible, so the last nonzero remainder is a unit.
        let c = r1[0].recip();
        let s: Vec<Rational> = s1.into_iter().map(|x| x * &c).collect();
        Ok(Self::from_poly(&self.field, s))
    }

    /// Numerical value at ζ = e^{2πi/N}, as (re, im).
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.field.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(re, im), (k, c)| {
                let v = c.to_f64().unwrap_or(f64::NAN);
                let t = std::f64::consts::TAU * k as f64 / n;
                (re + v * t.cos(), im + v * t.sin())
            })
    }

    fn check_field(&self, other: &Self) {
        assert_eq!(
            self.field.order, other.field.order,
            "mixing cyclotomic fields of different orders"
        );
    }
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
            x - y
        })
        .collect();
    trim(out)
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead_inv = b.last().expect("nonzero divisor").recip();
    let mut quot = vec![Rational::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() && !rem.is_empty() {
        let shift = rem.len() - b.len();
        let c = rem.last().expect("nonempty") * &lead_inv;
        for (j, bj) in b.iter().enumerate() {
            rem[shift + j] -= &c * bj;
        }
        quot[shift] = c;
        rem.pop();
        rem = trim(rem);
    }
    (trim(quot), rem)
}

impl super::Coefficient for Cyclotomic {
    type Ring = Arc<CyclotomicField>;

    fn ring(&self) -> Self::Ring {
        self.field.clone()
    }
    fn zero(ring: &Self::Ring) -> Self {
        Cyclotomic {
            field: ring.clone(),
            coeffs: vec![<Rational as Zero>::zero(); ring.degree()],
        }
    }
    fn one(ring: &Self::Ring) -> Self {
        Self::zeta_power(ring, 0)
    }
    fn from_rational(ring: &Self::Ring, r: &Rational) -> Self {
        Cyclotomic::from_rational(ring, r.clone())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
    fn is_one(&self) -> bool {
        One::is_one(&self.coeffs[0]) && self.coeffs[1..].iter().all(Zero::is_zero)
    }
    fn add_ref(&self, other: &Self) -> Self {
        self.check_field(other);
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.check_field(other);
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.check_field(other);
        let prod = poly_mul(&self.coeffs, &other.coeffs);
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.field.reduce(prod),
        }
    }
    fn neg_ref(&self) -> Self {
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
    fn scale(&self, r: &Rational) -> Self {
        Cyclotomic {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| a * r).collect(),
        }
    }
    fn inverse(&self) -> Option<Self> {
        self.invert().ok()
    }
    fn to_rational(&self) -> Option<Rational> {
        self.coeffs[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeffs[0].clone())
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs
                .iter()
                .map(|c| serde_json::Value::String(format_rational(c)))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Coefficient;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(24).len(), 9);
    }

    #[test]
    fn roots_of_unity() {
        let f = CyclotomicField::new(12);
        let minus_one = Cyclotomic::from_rational(&f, q(-1, 1));
        assert_eq!(Cyclotomic::root_of_unity(&f, r(1, 2)).unwrap(), minus_one);
        let i = Cyclotomic::root_of_unity(&f, r(1, 4)).unwrap();
        assert_eq!(i.mul_ref(&i), minus_one);
        let s = Cyclotomic::root_of_unity(&f, r(1, 6))
            .unwrap()
            .add_ref(&Cyclotomic::root_of_unity(&f, r(-1, 6)).unwrap());
        // numerically 2cos(π/3) = 1
        let (re, im) = s.to_complex();
        assert_eq!((re.round(), im.round()), (1.0, 0.0));
        assert_eq!(s, Cyclotomic::one(&f));
        assert_eq!(
            Cyclotomic::root_of_unity(&f, r(1, 5)),
            Err(Error::UnsupportedOrder {
                denominator: 5,
                order: 12
            })
        );
    }

    #[test]
    fn zeta_identities() {
        for n in [1u32, 3, 4, 8, 12, 24] {
            let f = CyclotomicField::new(n);
            assert!(Cyclotomic::zeta_power(&f, n as i64).is_one());
            let phi: Vec<Rational> = f.modulus().iter().map(|&m| q(m, 1)).collect();
            assert!(Cyclotomic::from_poly(&f, phi).is_zero());
        }
    }

    #[test]
    fn inversion() {
        let f = CyclotomicField::new(12);
        let one = Cyclotomic::one(&f);
        assert_eq!(one.invert().unwrap(), one);
        let m1 = one.neg_ref();
        assert_eq!(m1.invert().unwrap(), m1);
        assert_eq!(Cyclotomic::zero(&f).invert(), Err(Error::DivisionByZero));

        let g = CyclotomicField::new(4);
        let x = Cyclotomic::from_poly(&g, vec![q(1, 1), q(1, 1)]);
        let expected = Cyclotomic::from_poly(&g, vec![q(1, 2), q(-1, 2)]);
        assert_eq!(x.invert().unwrap(), expected);
    }

    #[test]
    #[should_panic(expected = "different orders")]
    fn mixing_fields_panics() {
        let a = Cyclotomic::one(&CyclotomicField::new(12));
        let b = Cyclotomic::one(&CyclotomicField::new(8));
        let _ = a.add_ref(&b);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn element(order: u32) -> impl Strategy<Value = Cyclotomic> {
            let field = CyclotomicField::new(order);
            let deg = field.degree();
            prop::collection::vec((-6i64..=6, 1i64..=4), deg).prop_map(move |cs| {
                Cyclotomic::from_poly(&field, cs.into_iter().map(|(n, d)| q(n, d)).collect())
            })
        }

        proptest! {
            #[test]
            fn field_axioms(a in element(12), b in element(12), c in element(12)) {
                prop_assert_eq!(a.mul_ref(&b).mul_ref(&c), a.mul_ref(&b.mul_ref(&c)));
                prop_assert_eq!(a.add_ref(&b).add_ref(&c), a.add_ref(&b.add_ref(&c)));
                prop_assert_eq!(a.mul_ref(&b.add_ref(&c)), a.mul_ref(&b).add_ref(&a.mul_ref(&c)));
                prop_assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
                if !a.is_zero() {
                    prop_assert!(a.mul_ref(&a.invert().unwrap()).is_one());
                }
            }

            #[test]
            fn roots_multiply(n in prop::sample::select(vec![5u32, 8, 12, 24]), a in -30i64..30, b in -30i64..30) {
                let f = CyclotomicField::new(n);
                let d = n as i64;
                let x = Cyclotomic::root_of_unity(&f, r(a, d)).unwrap();
                let y = Cyclotomic::root_of_unity(&f, r(b, d)).unwrap();
                let s = Cyclotomic::root_of_unity(&f, r((a + b).rem_euclid(d), d)).unwrap();
                prop_assert_eq!(x.mul_ref(&y), s);
            }
        }
    }
}
