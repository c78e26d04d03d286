//! Second homology of the rational elliptic surface in the blowup basis
//! (L, A₀, …, A₈), the E8 sublattice, and monodromy invariants.

mod enumerate;
pub mod linalg;

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ring::Rational;
use crate::series::QSeries;

pub use enumerate::{for_each_e8_vector, group_e8, LatticeGroup};

/// Scalars a homology class may carry: integers, rationals or q-series.
pub trait LatticeScalar: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn times_int(&self, n: i64) -> Self;
    fn vanishes(&self) -> bool;
}

impl LatticeScalar for i64 {
    fn zero_like(&self) -> Self {
        0
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn times_int(&self, n: i64) -> Self {
        self * n
    }
    fn vanishes(&self) -> bool {
        *self == 0
    }
}

impl LatticeScalar for Rational {
    fn zero_like(&self) -> Self {
        <Rational as Zero>::zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn times_int(&self, n: i64) -> Self {
        self * Rational::from_integer(n.into())
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl LatticeScalar for QSeries {
    fn zero_like(&self) -> Self {
        QSeries::zero(&(), None)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn times_int(&self, n: i64) -> Self {
        self.scale_int(n)
    }
    fn vanishes(&self) -> bool {
        self.is_zero()
    }
}

/// A class Σ c·(L, A₀, …, A₈); slot 0 is L and slot 1 + i is A_i.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct H2Class<T = i64>(pub [T; 10]);

/// Rational classes, used for invariant subspaces and operator C.
pub type RationalClass = H2Class<Rational>;
/// Classes with q-series coefficients, such as bulk terms and z⁽¹⁾.
pub type SeriesClass = H2Class<QSeries>;

impl H2Class<i64> {
    pub fn zero() -> Self {
        H2Class([0; 10])
    }

    #[allow(non_snake_case)]
    pub fn l() -> Self {
        let mut c = [0; 10];
        c[0] = 1;
        H2Class(c)
    }

    /// The exceptional class A_i, 0 ≤ i ≤ 8.
    pub fn a(i: usize) -> Self {
        assert!(i <= 8, "exceptional index out of range");
        let mut c = [0; 10];
        c[1 + i] = 1;
        H2Class(c)
    }

    /// The fibre class [M̄] = 3L − Σ A_i.
    pub fn m_bar() -> Self {
        let mut c = [-1; 10];
        c[0] = 3;
        H2Class(c)
    }

    /// Weights w with X·self = Σ w_i X_i.
    pub fn pairing_weights(&self) -> [i64; 10] {
        let mut w = self.0;
        for x in &mut w[1..] {
            *x = -*x;
        }
        w
    }

    pub fn to_rational(&self) -> RationalClass {
        self.map(|&c| Rational::from_integer(c.into()))
    }

    pub fn to_series(&self) -> SeriesClass {
        self.map(|&c| QSeries::constant(Rational::from_integer(c.into())))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self.0)
    }
}

impl<T: LatticeScalar> H2Class<T> {
    pub fn from_fn(f: impl FnMut(usize) -> T) -> Self {
        H2Class(std::array::from_fn(f))
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> H2Class<U> {
        H2Class(self.0.each_ref().map(f))
    }

    pub fn coeffs(&self) -> &[T; 10] {
        &self.0
    }

    /// The intersection pairing, diag(1, −1, …, −1).
    pub fn intersect(&self, other: &Self) -> T {
        let mut acc = self.0[0].times(&other.0[0]);
        for i in 1..10 {
            acc = acc.minus(&self.0[i].times(&other.0[i]));
        }
        acc
    }

    /// Pairing against an integral class.
    pub fn pair_int(&self, other: &H2Class) -> T {
        let mut acc = self.0[0].zero_like();
        for (x, w) in self.0.iter().zip(other.pairing_weights()) {
            if w != 0 {
                acc = acc.plus(&x.times_int(w));
            }
        }
        acc
    }

    pub fn plus(&self, other: &Self) -> Self {
        H2Class(std::array::from_fn(|i| self.0[i].plus(&other.0[i])))
    }

    pub fn minus(&self, other: &Self) -> Self {
        H2Class(std::array::from_fn(|i| self.0[i].minus(&other.0[i])))
    }

    pub fn times_int(&self, n: i64) -> Self {
        self.map(|x| x.times_int(n))
    }

    /// Multiplies every coefficient by a scalar.
    pub fn times_scalar(&self, s: &T) -> Self {
        self.map(|x| x.times(s))
    }

    /// self + s·v for an integral class v.
    pub fn add_multiple(&self, s: &T, v: &H2Class) -> Self {
        H2Class(std::array::from_fn(|i| match v.0[i] {
            0 => self.0[i].clone(),
            w => self.0[i].plus(&s.times_int(w)),
        }))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(LatticeScalar::vanishes)
    }
}

impl std::ops::Add for H2Class {
    type Output = H2Class;
    fn add(self, rhs: H2Class) -> H2Class {
        self.plus(&rhs)
    }
}

impl std::ops::Sub for H2Class {
    type Output = H2Class;
    fn sub(self, rhs: H2Class) -> H2Class {
        self.minus(&rhs)
    }
}

impl std::ops::Neg for H2Class {
    type Output = H2Class;
    fn neg(self) -> H2Class {
        self.times_int(-1)
    }
}

impl std::ops::Mul<H2Class> for i64 {
    type Output = H2Class;
    fn mul(self, rhs: H2Class) -> H2Class {
        rhs.times_int(self)
    }
}

const NAMES: [&str; 10] = ["L", "A0", "A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8"];

impl<T: fmt::Display + LatticeScalar> fmt::Display for H2Class<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, name) in self.0.iter().zip(NAMES) {
            if c.vanishes() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({c}){name}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for H2Class<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// The pencils covered: degree-d del Pezzo surfaces and ℂP¹×ℂP¹.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SurfaceKind {
    DelPezzo(u8),
    P1xP1,
}

/// A pencil together with the component classes of its divisor at infinity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceModel {
    kind: SurfaceKind,
    components: Vec<H2Class>,
}

impl SurfaceModel {
    pub fn new(kind: SurfaceKind) -> Result<Self> {
        let components = match kind {
            SurfaceKind::DelPezzo(d @ 1..=7) | SurfaceKind::DelPezzo(d @ 9) => (0..d as usize).map(H2Class::a).collect(),
            // F1: A₀ stays a free section, the eight components are A₁..A₈.
            SurfaceKind::DelPezzo(8) => (1..=8).map(H2Class::a).collect(),
            SurfaceKind::P1xP1 => {
                let mut v: Vec<H2Class> = (0..7).map(H2Class::a).collect();
                v.push(H2Class::l() - H2Class::a(7) - H2Class::a(8));
                v
            }
            SurfaceKind::DelPezzo(d) => {
                return Err(Error::InvalidArgument(format!("del Pezzo degree {d} is not in 1..=9")))
            }
        };
        Ok(SurfaceModel { kind, components })
    }

    pub fn del_pezzo(d: u8) -> Result<Self> {
        Self::new(SurfaceKind::DelPezzo(d))
    }

    pub fn p1xp1() -> Self {
        Self::new(SurfaceKind::P1xP1).expect("valid surface")
    }

    /// Every supported surface, in a fixed order.
    pub fn all() -> Vec<Self> {
        let mut v: Vec<Self> = (1..=9).map(|d| Self::del_pezzo(d).expect("valid degree")).collect();
        v.push(Self::p1xp1());
        v
    }

    pub fn kind(&self) -> SurfaceKind {
        self.kind
    }

    pub fn components(&self) -> &[H2Class] {
        &self.components
    }

    /// Number of components d.
    pub fn d(&self) -> i64 {
        self.components.len() as i64
    }

    /// [δE|], the sum of the components.
    pub fn delta(&self) -> H2Class {
        self.components.iter().fold(H2Class::zero(), |a, b| a + b.clone())
    }

    /// Whether the constant bulk term solves the fundamental equation.
    pub fn admits_trivial_bulk(&self) -> bool {
        !matches!(self.kind, SurfaceKind::DelPezzo(7) | SurfaceKind::DelPezzo(8))
    }

    /// Operator C(x) = Σ (x·D)·D over the components D.
    pub fn operator_c<T: LatticeScalar>(&self, x: &H2Class<T>) -> H2Class<T> {
        let mut out = x.map(LatticeScalar::zero_like);
        for d in &self.components {
            out = out.add_multiple(&x.pair_int(d), d);
        }
        out
    }

    /// The blocks of A₁..A₈ permuted by δE|-preserving permutations; E8
    /// vectors are grouped along them by [`group_e8`].
    pub fn symmetry_blocks(&self) -> Vec<Vec<usize>> {
        self.index_blocks()
            .into_iter()
            .map(|b| b.into_iter().filter(|&i| i > 0).collect::<Vec<_>>())
            .filter(|b| !b.is_empty())
            .collect()
    }

    /// Projection of [δE|] onto E8 ⊗ ℚ, the orthogonal complement of
    /// span{A₀, [M̄]}; returns −p·p, so that (δE|·X)² ≤ (−p·p)(−X·X).
    pub fn delta_projection_norm(&self) -> i64 {
        let delta = self.delta();
        let a = self.d();
        let b = delta.intersect(&H2Class::a(0)) + a;
        let p = delta - a * H2Class::a(0) - b * H2Class::m_bar();
        -p.intersect(&p)
    }

    /// Largest half-norm n for which some E8 vector X with −X·X = 2n could
    /// satisfy d·n + δE|·X < t, or `None` if no n ≥ 0 qualifies.
    pub fn max_half_norm(&self, t: i64) -> Option<i64> {
        let big_p = self.delta_projection_norm();
        let d = self.d();
        // d·n − √(2nP) < t  ⇔  d·n − t < 0  or  (d·n − t)² < 2nP
        let ok = |n: i64| {
            let lhs = d * n - t;
            lhs < 0 || (lhs as i128) * (lhs as i128) < 2 * (n as i128) * (big_p as i128)
        };
        // beyond n₀ = P/(2d²) the lower bound d·n − √(2nP) is increasing
        let turn = big_p / (2 * d * d) + 1;
        let mut best = None;
        let mut n = 0;
        loop {
            if ok(n) {
                best = Some(n);
            } else if n >= turn {
                return best;
            }
            n += 1;
        }
    }

    /// Level sets of i ↦ coefficient of A_i in [δE|]; a permutation of the
    /// A_i fixes [δE|] exactly when it preserves each of them.
    pub(crate) fn index_blocks(&self) -> Vec<Vec<usize>> {
        let delta = self.delta();
        let mut blocks: std::collections::BTreeMap<i64, Vec<usize>> = Default::default();
        for i in 0..9 {
            blocks.entry(delta.0[1 + i]).or_default().push(i);
        }
        blocks.into_values().collect()
    }
}

impl fmt::Display for SurfaceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            SurfaceKind::DelPezzo(d) => write!(f, "dp{d}"),
            SurfaceKind::P1xP1 => write!(f, "p1xp1"),
        }
    }
}

impl FromStr for SurfaceModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "p1xp1" => Ok(Self::p1xp1()),
            "f1" => Self::del_pezzo(8),
            "cp2" => Self::del_pezzo(9),
            _ => t
                .strip_prefix("dp")
                .and_then(|d| d.parse::<u8>().ok())
                .ok_or_else(|| Error::Parse(format!("unknown surface `{s}`")))
                .and_then(Self::del_pezzo),
        }
    }
}

/// A section class A = A₀ + X − ½(X·X)[M̄] + k[M̄].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionClass {
    pub x: H2Class,
    pub k: i64,
}

impl SectionClass {
    pub fn new(x: H2Class, k: i64) -> Result<Self> {
        if x.0[1] != 0 || x.intersect(&H2Class::m_bar()) != 0 {
            return Err(Error::InvalidArgument(format!("{x:?} is not in the E8 sublattice")));
        }
        if k < 0 {
            return Err(Error::InvalidArgument("k must be nonnegative".into()));
        }
        Ok(SectionClass { x, k })
    }

    pub fn class(&self) -> H2Class {
        let n = -self.x.intersect(&self.x) / 2;
        H2Class::a(0) + self.x.clone() + (n + self.k) * H2Class::m_bar()
    }
}

/// The basis A_i − A_{i+1} (i = 1..7) and L − A₁ − A₂ − A₃ of E8.
pub fn e8_basis() -> Vec<H2Class> {
    let mut v: Vec<H2Class> = (1..8).map(|i| H2Class::a(i) - H2Class::a(i + 1)).collect();
    v.push(H2Class::l() - H2Class::a(1) - H2Class::a(2) - H2Class::a(3));
    v
}

/// All E8 vectors with −X·X ≤ bound, sorted lexicographically.
pub fn short_vectors(bound: i64) -> Vec<H2Class> {
    let mut out = Vec::new();
    for_each_e8_vector(bound, |x, _| out.push(x.clone()));
    out.sort();
    out
}

/// 10×10 integer matrix acting on coefficient columns.
pub type ClassMatrix = [[i64; 10]; 10];

pub fn apply(m: &ClassMatrix, x: &H2Class) -> H2Class {
    H2Class::from_fn(|i| (0..10).map(|j| m[i][j] * x.0[j]).sum())
}

fn transposition(i: usize, j: usize) -> ClassMatrix {
    let mut m = [[0; 10]; 10];
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = 1;
    }
    let (a, b) = (1 + i, 1 + j);
    m[a][a] = 0;
    m[b][b] = 0;
    m[a][b] = 1;
    m[b][a] = 1;
    m
}

/// The reflection X ↦ X + (X·S)S.
pub fn reflection(s: &H2Class) -> ClassMatrix {
    let mut m = [[0; 10]; 10];
    for j in 0..10 {
        let mut e = H2Class::zero();
        e.0[j] = 1;
        let image = e.clone() + e.intersect(s) * s.clone();
        for i in 0..10 {
            m[i][j] = image.0[i];
        }
    }
    m
}

/// Generators of the monodromy group considered: adjacent transpositions
/// inside each block of δE|-compatible indices, plus the reflection in
/// S = L − A₆ − A₇ − A₈ when S·[δE|] = 0.
pub fn monodromy_generators(surface: &SurfaceModel) -> Vec<ClassMatrix> {
    let mut gens = Vec::new();
    for block in surface.index_blocks() {
        for w in block.windows(2) {
            gens.push(transposition(w[0], w[1]));
        }
    }
    let s = H2Class::l() - H2Class::a(6) - H2Class::a(7) - H2Class::a(8);
    if s.intersect(&surface.delta()) == 0 {
        gens.push(reflection(&s));
    }
    gens
}

/// Exact kernel of the stacked (M − Id).
pub fn invariant_subspace(generators: &[ClassMatrix]) -> Vec<RationalClass> {
    let mut rows = Vec::new();
    for m in generators {
        for i in 0..10 {
            rows.push(
                (0..10)
                    .map(|j| Rational::from_integer((m[i][j] - i64::from(i == j)).into()))
                    .collect::<Vec<_>>(),
            );
        }
    }
    if rows.is_empty() {
        return (0..10)
            .map(|i| H2Class::from_fn(|j| if i == j { Rational::one() } else { <Rational as Zero>::zero() }))
            .collect();
    }
    linalg::nullspace(&rows, 10)
        .into_iter()
        .map(|v| H2Class::from_fn(|i| v[i].clone()))
        .collect()
}

/// Whether `x` lies in the rational span of `basis`.
pub fn in_span(basis: &[RationalClass], x: &RationalClass) -> bool {
    let rows: Vec<Vec<Rational>> = basis.iter().map(|b| b.0.to_vec()).collect();
    let mut with = rows.clone();
    with.push(x.0.to_vec());
    linalg::rank(&with) == linalg::rank(&rows)
}

/// Whether two families span the same rational subspace.
pub fn same_span(a: &[RationalClass], b: &[RationalClass]) -> bool {
    let ra: Vec<Vec<Rational>> = a.iter().map(|v| v.0.to_vec()).collect();
    let rb: Vec<Vec<Rational>> = b.iter().map(|v| v.0.to_vec()).collect();
    let mut both = ra.clone();
    both.extend(rb.iter().cloned());
    let r = linalg::rank(&both);
    r == linalg::rank(&ra) && r == linalg::rank(&rb)
}
