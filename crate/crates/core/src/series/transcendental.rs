use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::Rational64;

use super::{dense, prec_min, PuiseuxSeries, Precision};
use crate::error::{Error, Result};
use crate::ring::{Coefficient, Rational};

fn ceil_index(r: Rational64) -> usize {
    let c = r.ceil();
    if c <= Rational64::from_integer(0) {
        0
    } else {
        *c.numer() as usize
    }
}

fn big(r: Rational64) -> Rational {
    Rational::new((*r.numer()).into(), (*r.denom()).into())
}

impl<C: Coefficient> PuiseuxSeries<C> {
    /// gcd of the offsets of all terms from `base` (grain if there are none).
    fn lattice_step(&self, base: i64) -> i64 {
        let step = self.terms.keys().fold(0i64, |acc, &k| acc.gcd(&(k - base)));
        if step == 0 {
            self.grain
        } else {
            step
        }
    }

    fn dense_from(&self, base: i64, step: i64, n: usize) -> Vec<C> {
        let mut out = vec![C::zero(&self.ring); n];
        for (&k, c) in self.terms.range(base..) {
            let off = k - base;
            if off % step != 0 {
                continue;
            }
            let i = (off / step) as usize;
            if i < n {
                out[i] = c.clone();
            }
        }
        out
    }

    fn from_dense(ring: &C::Ring, grain: i64, base: i64, step: i64, coeffs: Vec<C>, precision: Precision) -> Self {
        let terms: BTreeMap<i64, C> = coeffs
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (base + i as i64 * step, c))
            .collect();
        Self::from_raw(ring, grain, terms, precision)
    }

    /// Number of lattice points `base + i·step` (at this grain) strictly below `p`.
    fn lattice_len(&self, base: i64, step: i64, p: Rational64) -> usize {
        ceil_index((p * self.grain - base) / step)
    }

    /// Multiplicative inverse. Requires a unit leading coefficient.
    pub fn invert(&self) -> Result<Self> {
        let (&kv, lead) = self
            .terms
            .iter()
            .next()
            .ok_or_else(|| Error::NotInvertible("zero series".into()))?;
        let lead_inv = lead
            .inverse()
            .ok_or_else(|| Error::NotInvertible("leading coefficient is not a unit".into()))?;
        let Some(p) = self.precision else {
            if self.terms.len() == 1 {
                return Ok(Self::from_raw(&self.ring, self.grain, BTreeMap::from([(-kv, lead_inv)]), None));
            }
            return Err(Error::InfinitePrecision("inverse of an exact non-monomial".into()));
        };
        let v = Rational64::new(kv, self.grain);
        let step = self.lattice_step(kv);
        let n = self.lattice_len(kv, step, p);
        let a = self.dense_from(kv, step, n);
        let b = dense::inverse(&a, n, &self.ring).expect("unit leading coefficient");
        Ok(Self::from_dense(&self.ring, self.grain, -kv, step, b, Some(p - v * 2)))
    }

    /// Formal exponential; requires strictly positive valuation.
    pub fn exp_series(&self) -> Result<Self> {
        if self.terms.is_empty() {
            return Ok(Self::from_raw(
                &self.ring,
                self.grain,
                BTreeMap::from([(0, C::one(&self.ring))]),
                self.precision,
            ));
        }
        if self.terms.keys().next().is_some_and(|&k| k <= 0) {
            return Err(Error::Domain("exp needs a series of positive valuation".into()));
        }
        let p = self
            .precision
            .ok_or_else(|| Error::InfinitePrecision("exp of an exact nonzero series".into()))?;
        let step = self.lattice_step(0);
        let n = self.lattice_len(0, step, p);
        let a = self.dense_from(0, step, n);
        let f = dense::exp(&a, n, &self.ring);
        Ok(Self::from_dense(&self.ring, self.grain, 0, step, f, Some(p)))
    }

    /// Formal logarithm of `1 + (positive valuation)`.
    pub fn log_series(&self) -> Result<Self> {
        let ok = self.terms.iter().next().is_some_and(|(&k, c)| k == 0 && c.is_one());
        if !ok {
            return Err(Error::Domain("log needs a series of the form 1 + O(q^{>0})".into()));
        }
        let Some(p) = self.precision else {
            if self.terms.len() == 1 {
                return Ok(Self::zero(&self.ring, None));
            }
            return Err(Error::InfinitePrecision("log of an exact non-constant series".into()));
        };
        let step = self.lattice_step(0);
        let n = self.lattice_len(0, step, p);
        let f = self.dense_from(0, step, n);
        let g = dense::log(&f, n, &self.ring);
        Ok(Self::from_dense(&self.ring, self.grain, 0, step, g, Some(p)))
    }

    /// `a^r` for `a = c q^v (1 + tail)`: `c^r q^{rv} (1 + tail)^r`.
    pub fn pow_rational(&self, r: Rational64) -> Result<Self> {
        let (&kv, lead) = self
            .terms
            .iter()
            .next()
            .ok_or_else(|| Error::Domain("power of a zero series".into()))?;
        let c_r = lead
            .pow_rational(r)
            .ok_or_else(|| Error::Domain(format!("leading coefficient {lead:?} has no exact {r}-th power")))?;
        let v = Rational64::new(kv, self.grain);
        let new_lead = r * v;
        let k_new = new_lead * self.grain;
        if !k_new.is_integer() {
            return Err(Error::Grain {
                exponent: new_lead.to_string(),
                grain: self.grain,
            });
        }
        let k_new = *k_new.numer();
        let lead_inv = lead.inverse().expect("pow_rational succeeded, so lead is a unit");
        let Some(p) = self.precision else {
            if self.terms.len() == 1 {
                return Ok(Self::from_raw(&self.ring, self.grain, BTreeMap::from([(k_new, c_r)]), None));
            }
            if r.is_integer() && *r.numer() >= 0 {
                let mut acc = Self::one(&self.ring);
                for _ in 0..*r.numer() {
                    acc = acc.checked_mul(self)?;
                }
                return Ok(acc);
            }
            return Err(Error::InfinitePrecision("fractional power of an exact non-monomial".into()));
        };
        let step = self.lattice_step(kv);
        let n = self.lattice_len(kv, step, p);
        let f: Vec<C> = self.dense_from(kv, step, n).iter().map(|c| c.mul_ref(&lead_inv)).collect();
        let h: Vec<C> = dense::pow(&f, &big(r), n, &self.ring)
            .into_iter()
            .map(|c| c.mul_ref(&c_r))
            .collect();
        Ok(Self::from_dense(&self.ring, self.grain, k_new, step, h, Some(new_lead + p - v)))
    }

    /// Formal substitution `q ↦ g` into `self`; `g` must have positive valuation.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        self.check_ring(g)?;
        let (&kg, g_lead) = g
            .terms
            .iter()
            .next()
            .ok_or_else(|| Error::Domain("cannot substitute a zero series".into()))?;
        if kg <= 0 {
            return Err(Error::Domain("substituted series must have positive valuation".into()));
        }
        let Some(val_f) = self.valuation() else {
            return Ok(Self::zero(&self.ring, None));
        };
        let vg = Rational64::new(kg, g.grain);
        let p_res = prec_min(
            self.precision.map(|p| p * vg),
            g.precision.map(|pg| pg + (val_f - 1) * vg),
        );
        let base_grain = self.grain.lcm(&g.grain);

        // exponents of self live in (1/df)ℤ
        let df = self.grain / self.terms.keys().fold(self.grain, |acc, &k| acc.gcd(&k));
        let df_r = Rational64::new(1, df);
        let c_root = g_lead
            .pow_rational(df_r)
            .ok_or_else(|| Error::Domain(format!("leading coefficient {g_lead:?} has no exact {df_r}-th power")))?;
        let grain = g.grain * df;
        let mut out: BTreeMap<i64, C> = BTreeMap::new();
        let mut push = |k: i64, c: C| {
            if c.is_zero() {
                return;
            }
            match out.get_mut(&k) {
                Some(x) => *x = x.add_ref(&c),
                None => {
                    out.insert(k, c);
                }
            }
        };

        let g_is_monomial = g.terms.len() == 1;
        if !g_is_monomial && p_res.is_none() {
            return Err(Error::InfinitePrecision("substituting an exact non-monomial".into()));
        }
        let lead_inv = g_lead.inverse().expect("root exists, so lead is a unit");
        let step = g.lattice_step(kg);
        let tail: Vec<C> = if g_is_monomial {
            Vec::new()
        } else {
            let n = g.lattice_len(kg, step, g.precision.expect("non-exact"));
            g.dense_from(kg, step, n).iter().map(|c| c.mul_ref(&lead_inv)).collect()
        };

        for (&k, fc) in &self.terms {
            // e = k / grain_f = m / df
            let m = k * df / self.grain;
            let e = Rational64::new(m, df);
            let lead_exp = vg * e;
            if p_res.is_some_and(|p| lead_exp >= p) {
                continue;
            }
            let coeff = fc.mul_ref(&crate::ring::integer_power(&c_root, m).expect("unit"));
            // exponent v·e at grain g.grain·df: kg·m
            let k0 = kg * m;
            if g_is_monomial {
                push(k0, coeff);
                continue;
            }
            let p = p_res.expect("checked above");
            let n = ceil_index(((p - lead_exp) * g.grain) / step);
            let powered = dense::pow(&tail, &big(e), n, &self.ring);
            for (i, c) in powered.into_iter().enumerate() {
                if !c.is_zero() {
                    push(k0 + i as i64 * step * df, c.mul_ref(&coeff));
                }
            }
        }
        Ok(Self::from_raw(&self.ring, grain, out, p_res).coarsen_to(base_grain))
    }
}
