use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::Rational64;

use super::{prec_min, prec_shift, Precision, PuiseuxSeries};
use crate::error::{Error, Result};
use crate::ring::{Coefficient, Rational};

/// Dense row-major matrix of series over a common coefficient ring.
#[derive(Clone, PartialEq)]
pub struct SeriesMatrix<C: Coefficient> {
    rows: usize,
    cols: usize,
    entries: Vec<PuiseuxSeries<C>>,
}

impl<C: Coefficient + std::fmt::Display> std::fmt::Debug for SeriesMatrix<C> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| &self.entries[i * self.cols..(i + 1) * self.cols]))
            .finish()
    }
}

impl<C: Coefficient> SeriesMatrix<C> {
    pub fn from_rows(rows: Vec<Vec<PuiseuxSeries<C>>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidArgument("ragged matrix rows".into()));
        }
        Ok(SeriesMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn identity(ring: &C::Ring, n: usize) -> Self {
        let entries = (0..n * n)
            .map(|idx| {
                if idx / n == idx % n {
                    PuiseuxSeries::one(ring)
                } else {
                    PuiseuxSeries::zero(ring, None)
                }
            })
            .collect();
        SeriesMatrix {
            rows: n,
            cols: n,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &PuiseuxSeries<C> {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[PuiseuxSeries<C>] {
        &self.entries
    }

    pub fn map<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&PuiseuxSeries<C>) -> Result<PuiseuxSeries<C>>,
    {
        Ok(SeriesMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(&mut f).collect::<Result<_>>()?,
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(SeriesMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.checked_add(b))
                .collect::<Result<_>>()?,
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        self.checked_add(&other.map(|x| Ok(x.neg()))?)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::InvalidArgument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.get(i, 0).checked_mul(other.get(0, j))?;
                for k in 1..self.cols {
                    acc = acc.checked_add(&self.get(i, k).checked_mul(other.get(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        Ok(SeriesMatrix {
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    pub fn derive(&self) -> Self {
        self.map(|x| Ok(x.derive())).expect("infallible")
    }

    pub fn trace(&self) -> Result<PuiseuxSeries<C>> {
        let mut acc = self.get(0, 0).clone();
        for i in 1..self.rows.min(self.cols) {
            acc = acc.checked_add(self.get(i, i))?;
        }
        Ok(acc)
    }

    /// Determinant of a 2×2 matrix.
    pub fn det2(&self) -> Result<PuiseuxSeries<C>> {
        if self.rows != 2 || self.cols != 2 {
            return Err(Error::InvalidArgument("det2 needs a 2x2 matrix".into()));
        }
        self.get(0, 0)
            .checked_mul(self.get(1, 1))?
            .checked_sub(&self.get(0, 1).checked_mul(self.get(1, 0))?)
    }

    /// Inverse of a 2×2 matrix via the adjugate.
    pub fn inverse2(&self) -> Result<Self> {
        let det_inv = self.det2()?.invert()?;
        let e = |i, j| self.get(i, j).checked_mul(&det_inv);
        Self::from_rows(vec![
            vec![e(1, 1)?, e(0, 1)?.neg()],
            vec![e(1, 0)?.neg(), e(0, 0)?],
        ])
    }

    /// Smallest precision among the entries.
    pub fn precision(&self) -> Precision {
        self.entries.iter().fold(None, |p, e| prec_min(p, e.precision()))
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.rows == other.rows && self.cols == other.cols {
            Ok(())
        } else {
            Err(Error::InvalidArgument("matrix shape mismatch".into()))
        }
    }
}

/// Fundamental solution `Θ` of `(∂_q + Γ)Θ = 0` with `Θ(0) = Id`.
///
/// Coefficients are determined one lattice step at a time from
/// `e·Θ_e = −Σ_{a+b=e−1} Γ_a Θ_b`. The result is known modulo
/// `O(q^{min(order, P_Γ + 1)})`.
pub fn solve_linear_ode_firstorder<C: Coefficient>(gamma: &SeriesMatrix<C>, order: i64) -> Result<SeriesMatrix<C>> {
    let m = gamma.rows;
    if gamma.cols != m || m == 0 {
        return Err(Error::InvalidArgument("connection matrix must be square".into()));
    }
    let ring = gamma.entries[0].ring().clone();
    let mut grain = 1i64;
    for e in &gamma.entries {
        if e.ring() != &ring {
            return Err(Error::RingMismatch("connection entries over different rings".into()));
        }
        if let Some(v) = e.lead_exponent() {
            if v < Rational64::from_integer(0) {
                return Err(Error::SingularConnection(format!("entry with term q^{v}")));
            }
        }
        grain = grain.lcm(&e.grain());
    }
    let entries: Vec<PuiseuxSeries<C>> = gamma
        .entries
        .iter()
        .map(|e| e.with_grain(grain).expect("lcm refines"))
        .collect();
    let mut step = grain;
    for e in &entries {
        for (k, _) in e.raw_terms() {
            step = step.gcd(&k);
        }
    }
    let p_theta = prec_min(Some(Rational64::from_integer(order)), prec_shift(gamma.precision(), 1.into()))
        .expect("order is finite");
    let n = {
        let c = (p_theta * grain / step).ceil();
        if c <= Rational64::from_integer(0) {
            0
        } else {
            *c.numer() as usize
        }
    };

    // Γ grouped by index offset d = (k + grain)/step
    let mut by_offset: BTreeMap<usize, Vec<(usize, usize, C)>> = BTreeMap::new();
    for (idx, e) in entries.iter().enumerate() {
        for (k, c) in e.raw_terms() {
            let d = ((k + grain) / step) as usize;
            by_offset.entry(d).or_default().push((idx / m, idx % m, c.clone()));
        }
    }

    let zero = C::zero(&ring);
    let mut theta: Vec<Vec<C>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut cur = vec![zero.clone(); m * m];
        if i == 0 {
            for d in 0..m {
                cur[d * m + d] = C::one(&ring);
            }
        } else {
            for (&d, terms) in by_offset.range(..=i) {
                let prev = &theta[i - d];
                for (r, c, g) in terms {
                    for col in 0..m {
                        let t = &prev[c * m + col];
                        if !t.is_zero() {
                            cur[r * m + col] = cur[r * m + col].add_ref(&g.mul_ref(t));
                        }
                    }
                }
            }
            // e = i·step/grain
            let factor = -Rational::new(grain.into(), (i as i64 * step).into());
            for x in cur.iter_mut() {
                *x = x.scale(&factor);
            }
        }
        theta.push(cur);
    }

    let mut out = Vec::with_capacity(m * m);
    for idx in 0..m * m {
        let terms: BTreeMap<i64, C> = theta
            .iter()
            .enumerate()
            .filter(|(_, mat)| !mat[idx].is_zero())
            .map(|(i, mat)| (i as i64 * step, mat[idx].clone()))
            .collect();
        out.push(PuiseuxSeries::from_raw(&ring, grain, terms, Some(p_theta)));
    }
    Ok(SeriesMatrix {
        rows: m,
        cols: m,
        entries: out,
    })
}
