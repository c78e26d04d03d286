//! Exhaustive enumeration of the E8 sublattice in blowup coordinates.
//!
//! A vector X = c_L·L + Σ_{i≥1} c_i·A_i lies in E8 iff c_A0 = 0 and
//! 3c_L + Σ c_i = 0. Its norm is −X·X = Σ c_i² − c_L². Because Σ c_i = −3c_L,
//! Cauchy–Schwarz gives Σ c_i² ≥ 9c_L²/8, hence |c_L| ≤ √(8·norm). The
//! remaining coordinates are pruned by the same inequality on the tail.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use super::H2Class;
use crate::ring::Rational;

fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as i64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Visits every E8 vector with `−X·X ≤ max_norm` in lexicographic order of
/// its coordinates, passing the vector and its norm.
pub fn for_each_e8_vector<F: FnMut(&H2Class, i64)>(max_norm: i64, mut f: F) {
    if max_norm < 0 {
        return;
    }
    let bound = isqrt(8 * max_norm);
    let mut x = H2Class::zero();
    for cl in -bound..=bound {
        // Σ c_i² ≤ max_norm + c_L², Σ c_i = −3c_L over the eight A_1..A_8 slots.
        let budget = max_norm + cl * cl;
        if 9 * cl * cl > 8 * budget {
            continue;
        }
        x.0[0] = cl;
        descend(&mut x, 2, -3 * cl, budget, cl * cl, &mut f);
    }
}

fn descend<F: FnMut(&H2Class, i64)>(x: &mut H2Class, slot: usize, sum: i64, budget: i64, cl2: i64, f: &mut F) {
    if slot == 9 {
        // last coordinate is forced
        let c = sum;
        if c * c <= budget {
            x.0[9] = c;
            let norm = x.0[2..].iter().map(|c| c * c).sum::<i64>() - cl2;
            f(x, norm);
        }
        return;
    }
    let rest = (10 - slot - 1) as i64;
    let m = isqrt(budget);
    for c in -m..=m {
        let left = budget - c * c;
        let s = sum - c;
        // the remaining `rest` slots must realise sum s with squares ≤ left
        if s * s > rest * left {
            continue;
        }
        x.0[slot] = c;
        descend(x, slot + 1, s, left, cl2, f);
    }
    x.0[slot] = 0;
}

/// Aggregate of all E8 vectors sharing c_L, a norm, and the coordinate sum
/// over each block of a partition of {A₁, …, A₈}.
///
/// Every class that is constant on the blocks pairs to the same value with
/// all members of a group; see [`LatticeGroup::pair`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeGroup {
    /// −X·X, always even.
    pub norm: i64,
    pub c_l: i64,
    /// Σ c_i over each block, in block order.
    pub block_sums: Vec<i64>,
    pub count: u64,
    /// Σ X over the group.
    pub sum: [i64; 10],
    /// Σ over the group of Σ_{i ∈ block} c_i², in block order.
    pub block_sumsq: Vec<i64>,
}

impl LatticeGroup {
    /// The common value of X·v over the group, for v constant on the blocks.
    pub fn pair(&self, v: &H2Class) -> i64 {
        let total = H2Class(self.sum).intersect(v);
        let n = self.count as i64;
        debug_assert_eq!(total % n, 0, "probe is not constant on the blocks");
        total / n
    }

    pub fn half_norm(&self) -> i64 {
        self.norm / 2
    }

    /// Σ_X c_i·c_j over the group for exceptional indices i, j ∈ 0..=8, where
    /// `blocks` is the partition the group was built with.
    pub fn second_moment(&self, blocks: &[Vec<usize>], i: usize, j: usize) -> Rational {
        if i == 0 || j == 0 {
            return Rational::from_integer(0.into());
        }
        let find = |x: usize| blocks.iter().position(|b| b.contains(&x)).expect("index in some block");
        let (bi, bj) = (find(i), find(j));
        let count = Rational::from_integer((self.count as i64).into());
        let r = |x: i64| Rational::from_integer(x.into());
        let (mi, mj) = (blocks[bi].len() as i64, blocks[bj].len() as i64);
        if i == j {
            r(self.block_sumsq[bi]) / r(mi)
        } else if bi == bj {
            let s = r(self.block_sums[bi]);
            (count * &s * &s - r(self.block_sumsq[bi])) / r(mi * (mi - 1))
        } else {
            count * r(self.block_sums[bi]) * r(self.block_sums[bj]) / r(mi * mj)
        }
    }
}

/// Counts of m-tuples of integers by (sum, sum of squares), sum of squares ≤ tmax.
struct TupleTable {
    offset: i64,
    tmax: i64,
    counts: Vec<Vec<u64>>, // [s + offset][t]
}

impl TupleTable {
    fn new(m: usize, tmax: i64) -> Self {
        let offset = isqrt(m as i64 * tmax) + 1;
        let width = (2 * offset + 1) as usize;
        let mut counts = vec![vec![0u64; tmax as usize + 1]; width];
        counts[offset as usize][0] = 1;
        let cmax = isqrt(tmax);
        for _ in 0..m {
            let mut next = vec![vec![0u64; tmax as usize + 1]; width];
            for (si, row) in counts.iter().enumerate() {
                for (t, &n) in row.iter().enumerate() {
                    if n == 0 {
                        continue;
                    }
                    for c in -cmax..=cmax {
                        let t2 = t as i64 + c * c;
                        let s2 = si as i64 + c;
                        if t2 <= tmax && (0..width as i64).contains(&s2) {
                            next[s2 as usize][t2 as usize] += n;
                        }
                    }
                }
            }
            counts = next;
        }
        TupleTable { offset, tmax, counts }
    }

    fn get(&self, s: i64, t: i64) -> u64 {
        let si = s + self.offset;
        if t < 0 || t > self.tmax || si < 0 || si >= self.counts.len() as i64 {
            0
        } else {
            self.counts[si as usize][t as usize]
        }
    }

    /// Nonzero (s, t, count) entries.
    fn entries(&self) -> impl Iterator<Item = (i64, i64, u64)> + '_ {
        self.counts.iter().enumerate().flat_map(move |(si, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, &n)| n > 0)
                .map(move |(t, &n)| (si as i64 - self.offset, t as i64, n))
        })
    }
}

type GroupKey = (i64, Vec<Vec<usize>>);

fn cache() -> &'static Mutex<HashMap<GroupKey, Arc<Vec<LatticeGroup>>>> {
    static CACHE: OnceLock<Mutex<HashMap<GroupKey, Arc<Vec<LatticeGroup>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Groups every E8 vector with `−X·X ≤ max_norm` by c_L, norm and block
/// sums, where `blocks` partitions the exceptional indices 1..=8. Counting
/// is done per block by dynamic programming over (sum, sum of squares), so
/// the cost does not grow with the number of vectors. Results are sorted
/// and memoised.
pub fn group_e8(max_norm: i64, blocks: &[Vec<usize>]) -> Arc<Vec<LatticeGroup>> {
    let mut seen: Vec<usize> = blocks.iter().flatten().copied().collect();
    seen.sort_unstable();
    assert_eq!(seen, (1..=8).collect::<Vec<_>>(), "blocks must partition 1..=8");
    let key = (max_norm, blocks.to_vec());
    if let Some(hit) = cache().lock().expect("lattice cache poisoned").get(&key) {
        return hit.clone();
    }
    let groups = Arc::new(if max_norm < 0 { Vec::new() } else { compute_groups(max_norm, blocks) });
    cache().lock().expect("lattice cache poisoned").insert(key, groups.clone());
    groups
}

fn compute_groups(max_norm: i64, blocks: &[Vec<usize>]) -> Vec<LatticeGroup> {
    let cl_max = isqrt(8 * max_norm);
    let tmax = max_norm + cl_max * cl_max;
    let mut tables: HashMap<usize, TupleTable> = HashMap::new();
    for b in blocks {
        tables.entry(b.len()).or_insert_with(|| TupleTable::new(b.len(), tmax));
    }
    let (init, last) = blocks.split_at(blocks.len() - 1);
    let last_table = &tables[&last[0].len()];
    // partial states over all but the last block: (sums, squares) → count
    let mut states: BTreeMap<(Vec<i64>, Vec<i64>), u64> = BTreeMap::new();
    states.insert((Vec::new(), Vec::new()), 1);
    for b in init {
        let mut next = BTreeMap::new();
        for ((sums, squares), n) in &states {
            let t: i64 = squares.iter().sum();
            for (s, t2, m) in tables[&b.len()].entries() {
                if t + t2 <= tmax {
                    let mut k = sums.clone();
                    k.push(s);
                    let mut sq = squares.clone();
                    sq.push(t2);
                    *next.entry((k, sq)).or_insert(0) += n * m;
                }
            }
        }
        states = next;
    }
    let mut out = Vec::new();
    for cl in -cl_max..=cl_max {
        let budget = max_norm + cl * cl;
        let target = -3 * cl;
        let mut acc: BTreeMap<(i64, Vec<i64>), (u64, Vec<i64>)> = BTreeMap::new();
        for ((sums, squares), n) in &states {
            let t: i64 = squares.iter().sum();
            if t > budget {
                continue;
            }
            let s_last = target - sums.iter().sum::<i64>();
            for t_last in 0..=budget - t {
                let m = last_table.get(s_last, t_last);
                if m > 0 {
                    let mut k = sums.clone();
                    k.push(s_last);
                    let c = n * m;
                    let e = acc.entry((t + t_last - cl * cl, k)).or_insert_with(|| (0, vec![0; blocks.len()]));
                    e.0 += c;
                    for (slot, tb) in squares.iter().chain([&t_last]).enumerate() {
                        e.1[slot] += c as i64 * tb;
                    }
                }
            }
        }
        for ((norm, block_sums), (count, block_sumsq)) in acc {
            let mut sum = [0i64; 10];
            sum[0] = cl * count as i64;
            for (b, s) in blocks.iter().zip(&block_sums) {
                for &i in b {
                    sum[1 + i] = s * count as i64 / b.len() as i64;
                }
            }
            out.push(LatticeGroup { norm, c_l: cl, block_sums, count, sum, block_sumsq });
        }
    }
    out.sort_by(|a, b| (a.norm, a.c_l, &a.block_sums).cmp(&(b.norm, b.c_l, &b.block_sums)));
    out
}
