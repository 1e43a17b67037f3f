//! Trees with few short leaf-to-leaf path lengths.
//!
//! [`build_tree`] turns a positive integer sequence into a 1–3 tree: a spine
//! `v_0 … v_{t+1}` with a perfect binary tree hanging from each internal
//! spine vertex, the depths cycling through the sequence, and a trimmed
//! binary tree at `v_t` to hit the vertex count exactly. Sequences come from
//! sumset pairs `(U, V)` with `U − V ⊇ [m]` (via `a_i = u_i + v_i` where
//! `u_i − v_i = i`) or from the staircase family.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::{GraphError, Tree};
use crate::treelen::leaf_lengths;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("vertex count must be even and at least 4, got {0}")]
    BadOrder(usize),
    #[error("sequence is empty")]
    EmptySequence,
    #[error("sequence entry {index} is not positive")]
    NonPositive { index: usize },
    #[error("sumset parameter k = {0} out of range (1..=8)")]
    SumsetRange(u32),
    #[error("{0} is not a difference u − v")]
    Unrepresentable(i64),
    #[error("search space of {explored}+ candidates exceeds the cap of {cap}")]
    SearchCap { explored: u64, cap: u64 },
    #[error("invalid search parameters: {0}")]
    SearchParams(String),
    #[error("bad sequence spec {0:?}: expected constant:a, staircase:m, sumset:k or list:a,b,...")]
    BadSpec(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A sequence family: `constant:a`, `staircase:m`, `sumset:k` or
/// `list:a,b,c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SequenceSpec {
    Constant(u32),
    Staircase(u32),
    Sumset(u32),
    List(Vec<u32>),
}

impl SequenceSpec {
    /// The generated values `a_1, …, a_m`.
    pub fn values(&self) -> Result<Vec<u32>, ConstructionError> {
        let vals = match self {
            SequenceSpec::Constant(a) => vec![*a],
            SequenceSpec::Staircase(m) => staircase_values(*m),
            SequenceSpec::Sumset(k) => match sequence_from_sumset(&sumset_uv(*k)?)? {
                SequenceSpec::List(v) => v,
                _ => unreachable!(),
            },
            SequenceSpec::List(v) => v.clone(),
        };
        if vals.is_empty() {
            return Err(ConstructionError::EmptySequence);
        }
        if let Some(i) = vals.iter().position(|&a| a == 0) {
            return Err(ConstructionError::NonPositive { index: i + 1 });
        }
        Ok(vals)
    }
}

impl FromStr for SequenceSpec {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<SequenceSpec, ConstructionError> {
        let bad = || ConstructionError::BadSpec(s.to_string());
        let (tag, rest) = s.split_once(':').ok_or_else(bad)?;
        let num = |x: &str| x.trim().parse::<u32>().map_err(|_| bad());
        match tag {
            "constant" => Ok(SequenceSpec::Constant(num(rest)?)),
            "staircase" => Ok(SequenceSpec::Staircase(num(rest)?)),
            "sumset" => Ok(SequenceSpec::Sumset(num(rest)?)),
            "list" => rest
                .split(',')
                .map(num)
                .collect::<Result<Vec<_>, _>>()
                .map(SequenceSpec::List),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSpec::Constant(a) => write!(f, "constant:{a}"),
            SequenceSpec::Staircase(m) => write!(f, "staircase:{m}"),
            SequenceSpec::Sumset(k) => write!(f, "sumset:{k}"),
            SequenceSpec::List(v) => {
                let parts: Vec<String> = v.iter().map(u32::to_string).collect();
                write!(f, "list:{}", parts.join(","))
            }
        }
    }
}

impl Serialize for SequenceSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SequenceSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<SequenceSpec, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Bookkeeping of one [`build_tree`] run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionTrace {
    /// Number of hanging subtrees.
    pub t: usize,
    /// `2 + Σ_{i≤t} 2^{a'_i}`, saturating.
    pub s_sum: u128,
    /// `S − 2^{a'_t}`.
    pub prefix_sum: u128,
    /// Vertex count of the last subtree.
    pub leftover: usize,
    /// `a'_t`, the depth the sequence prescribes for the last subtree.
    pub last_prescribed: u32,
    /// Layers of each hanging subtree; the last entry is `⌈log(L+1)⌉`.
    pub layers: Vec<u32>,
}

impl ConstructionTrace {
    /// Vertex index of the root of the last subtree.
    pub fn last_root(&self, n: usize) -> usize {
        n - self.leftover
    }

    pub fn check(&self, n: usize) -> Result<(), String> {
        let n128 = n as u128;
        if self.s_sum < n128 {
            return Err(format!("S = {} < n = {n}", self.s_sum));
        }
        if self.prefix_sum + 2 > n128 {
            return Err(format!("S − 2^a't = {} > n − 2", self.prefix_sum));
        }
        let cap = pow2_u128(self.last_prescribed).saturating_sub(1);
        if self.leftover % 2 == 0 || self.leftover == 0 || self.leftover as u128 > cap {
            return Err(format!("leftover {} not odd in [1, 2^a't − 1]", self.leftover));
        }
        if self.layers.len() != self.t {
            return Err("layer list does not match t".into());
        }
        Ok(())
    }
}

fn pow2_u128(e: u32) -> u128 {
    if e >= 127 {
        u128::MAX
    } else {
        1u128 << e
    }
}

fn layers_for(size: usize) -> u32 {
    (size + 1).next_power_of_two().trailing_zeros()
}

/// The tree `T_n((a_i))` for the sequence `spec` generates.
pub fn build_tree(spec: &SequenceSpec, n: usize) -> Result<(Tree, ConstructionTrace), ConstructionError> {
    build_tree_from_values(&spec.values()?, n)
}

/// [`build_tree`] for an explicit sequence.
///
/// Vertex numbering: the spine is `0..=t+1` (`v_i = i`), followed by the
/// hanging subtrees in spine order, each heap-indexed from its root. The last
/// subtree is the first `L` heap slots of a perfect binary tree, which is what
/// deleting sibling leaf pairs from the bottom layer (highest slots first)
/// leaves behind.
pub fn build_tree_from_values(a: &[u32], n: usize) -> Result<(Tree, ConstructionTrace), ConstructionError> {
    if n < 4 || n % 2 == 1 {
        return Err(ConstructionError::BadOrder(n));
    }
    if a.is_empty() {
        return Err(ConstructionError::EmptySequence);
    }
    if let Some(i) = a.iter().position(|&x| x == 0) {
        return Err(ConstructionError::NonPositive { index: i + 1 });
    }
    let target = n as u128;
    let mut prefix: u128 = 2;
    let mut depths: Vec<u32> = Vec::new();
    loop {
        let ai = a[depths.len() % a.len()];
        depths.push(ai);
        let next = prefix.saturating_add(pow2_u128(ai));
        if next >= target {
            break;
        }
        prefix = next;
    }
    let t = depths.len();
    let last = depths[t - 1];
    let leftover = n - (prefix as usize) - 1;
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(n - 1);
    for i in 1..=t + 1 {
        edges.push((i - 1, i));
    }
    let mut next = t + 2;
    let mut attach = |spine: usize, size: usize, edges: &mut Vec<(usize, usize)>| {
        let root = next;
        edges.push((spine, root));
        for j in 1..size {
            edges.push((root + (j - 1) / 2, root + j));
        }
        next += size;
    };
    for (i, &d) in depths[..t - 1].iter().enumerate() {
        attach(i + 1, (1usize << d) - 1, &mut edges);
    }
    attach(t, leftover, &mut edges);
    let tree = Tree::from_edges(n, &edges)?;
    let mut layers = depths.clone();
    layers[t - 1] = layers_for(leftover);
    let trace = ConstructionTrace {
        t,
        s_sum: prefix.saturating_add(pow2_u128(last)),
        prefix_sum: prefix,
        leftover,
        last_prescribed: last,
        layers,
    };
    Ok((tree, trace))
}

/// Sets `U`, `V` with `U − V ⊇ [m]`, and `β = log|U+V| / log m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumsetPair {
    pub u: Vec<i64>,
    pub v: Vec<i64>,
    pub m: u64,
    pub sum_size: usize,
    pub beta: f64,
}

impl SumsetPair {
    pub fn new(mut u: Vec<i64>, mut v: Vec<i64>, m: u64) -> SumsetPair {
        u.sort_unstable();
        u.dedup();
        v.sort_unstable();
        v.dedup();
        let sum_size = sumset(&u, &v).len();
        let beta = (sum_size as f64).ln() / (m as f64).ln();
        SumsetPair { u, v, m, sum_size, beta }
    }

    pub fn sum_set(&self) -> BTreeSet<i64> {
        sumset(&self.u, &self.v)
    }

    pub fn difference_set(&self) -> BTreeSet<i64> {
        let mut out = BTreeSet::new();
        for &x in &self.u {
            for &y in &self.v {
                out.insert(x - y);
            }
        }
        out
    }

    /// `U − V ⊇ [1, m]`.
    pub fn covers_interval(&self) -> bool {
        let d = self.difference_set();
        (1..=self.m as i64).all(|i| d.contains(&i))
    }

    /// `U − V = [1, m]` exactly.
    pub fn difference_is_interval(&self) -> bool {
        let d = self.difference_set();
        d.len() as u64 == self.m && d.first() == Some(&1) && d.last() == Some(&(self.m as i64))
    }

    /// `|U+V| ≥ |U−V|^{2/3}`.
    pub fn ruzsa_floor_holds(&self) -> bool {
        let diff = self.difference_set().len() as f64;
        self.sum_size as f64 >= diff.powf(2.0 / 3.0) - crate::util::BOUND_SLACK
    }
}

fn sumset(u: &[i64], v: &[i64]) -> BTreeSet<i64> {
    let mut out = BTreeSet::new();
    for &x in u {
        for &y in v {
            out.insert(x + y);
        }
    }
    out
}

/// Digit sets of the base-13 family.
pub const DIGITS_X: [i64; 4] = [1, 2, 5, 7];
pub const DIGITS_Y: [i64; 4] = [-5, -4, -1, 1];

fn digit_expansions(digits: &[i64], k: u32) -> Vec<i64> {
    let mut out = vec![0i64];
    let mut place = 1i64;
    for _ in 0..k {
        out = out
            .iter()
            .flat_map(|&s| digits.iter().map(move |&d| s + d * place))
            .collect();
        place *= 13;
    }
    out
}

/// `U = {Σ x_i 13^i : x_i ∈ X} + (13^k−1)/6 + 1` and
/// `V = {Σ y_i 13^i : y_i ∈ Y} + (13^k−1)/6` with `m = 13^k`.
pub fn sumset_uv(k: u32) -> Result<SumsetPair, ConstructionError> {
    if !(1..=8).contains(&k) {
        return Err(ConstructionError::SumsetRange(k));
    }
    let m = 13i64.pow(k);
    let offset = (m - 1) / 6;
    let u = digit_expansions(&DIGITS_X, k).into_iter().map(|s| s + offset + 1).collect();
    let v = digit_expansions(&DIGITS_Y, k).into_iter().map(|s| s + offset).collect();
    Ok(SumsetPair::new(u, v, m as u64))
}

/// `a_i = u_i + v_i` where `(u_i, v_i)` is the representation `i = u_i − v_i`
/// with the smallest `u_i`.
pub fn sequence_from_sumset(pair: &SumsetPair) -> Result<SequenceSpec, ConstructionError> {
    let vset: HashSet<i64> = pair.v.iter().copied().collect();
    let mut out = Vec::with_capacity(pair.m as usize);
    for i in 1..=pair.m as i64 {
        let u = pair
            .u
            .iter()
            .copied()
            .find(|&u| vset.contains(&(u - i)))
            .ok_or(ConstructionError::Unrepresentable(i))?;
        let a = 2 * u - i;
        if a <= 0 {
            return Err(ConstructionError::NonPositive { index: i as usize });
        }
        out.push(a as u32);
    }
    Ok(SequenceSpec::List(out))
}

pub fn staircase_sequence(m: u32) -> SequenceSpec {
    SequenceSpec::Staircase(m)
}

/// `a_i = ⌈i/m⌉·m − ((i−1) mod m)` for `i ∈ [m²]`.
pub fn staircase_values(m: u32) -> Vec<u32> {
    (1..=m * m).map(|i| i.div_ceil(m) * m - (i - 1) % m).collect()
}

/// First `s` with `a_s + s ≢ 1 (mod m)`, if any.
pub fn staircase_congruence_violation(m: u32) -> Option<u32> {
    let a = staircase_values(m);
    (1..=m * m).find(|&s| (a[s as usize - 1] + s) % m != 1 % m)
}

/// Short-length counts for one built tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShortLengthCount {
    /// Size of the set predicted from the tree's structure.
    pub analytic: usize,
    /// Lengths actually present, by BFS.
    pub brute: usize,
    /// Whether every brute-force length is among the predicted ones.
    pub brute_within_analytic: bool,
}

/// Counts leaf-to-leaf lengths in `[0, max_len]` of `T_n((a_i))` two ways.
///
/// The predicted set splits pairs by where their leaves sit: the same
/// subtree; two different perfect subtrees (`a_p + a_q + (j − i)`, collapsed
/// by residues, or `2(U+V) + m·{0..⌈M/m⌉}` for sumset sequences); the last
/// subtree against another; and the spine endpoints.
pub fn count_short_lengths(
    spec: &SequenceSpec,
    n: usize,
    max_len: usize,
) -> Result<ShortLengthCount, ConstructionError> {
    let a = spec.values()?;
    let (tree, trace) = build_tree_from_values(&a, n)?;
    let brute = leaf_lengths(&tree, Some(max_len));
    let cap = max_len as i64;
    let mut predicted: BTreeSet<i64> = BTreeSet::new();
    let t = trace.t;
    let m = a.len();
    let ap = |i: usize| a[(i - 1) % m] as i64;

    // leaf distances from v_t into the last subtree
    let l = trace.leftover;
    let last_depths: BTreeSet<i64> = (0..l)
        .filter(|&j| 2 * j + 1 >= l)
        .map(|j| ((j + 1).ilog2() + 1) as i64)
        .collect();
    let h = trace.layers[t - 1] as i64;

    predicted.insert(0);
    let perfect: BTreeSet<i64> = (1..t).map(ap).collect();
    for &d in &perfect {
        predicted.extend((0..d).map(|x| 2 * x));
    }
    predicted.extend(0..=2 * (h - 1));

    if t >= 3 {
        match spec {
            SequenceSpec::Sumset(k) => {
                let pair = sumset_uv(*k)?;
                let mm = pair.m as i64;
                let reps = (cap + mm - 1) / mm;
                for s in pair.sum_set() {
                    for d in 0..=reps {
                        predicted.insert(2 * s + d * mm);
                    }
                }
            }
            _ => {
                let mm = m as i64;
                let reps = cap / mm + 2;
                for p in 1..=m {
                    for q in 1..=m {
                        for d in 0..=reps {
                            let gap = q as i64 - p as i64 + d * mm;
                            if gap >= 1 {
                                predicted.insert(a[p - 1] as i64 + a[q - 1] as i64 + gap);
                            }
                        }
                    }
                }
            }
        }
    }
    let ti = t as i64;
    let near = |i: usize| ti - i as i64 <= cap;
    for i in (1..t).filter(|&i| near(i)) {
        for &e in &last_depths {
            predicted.insert(ap(i) + (ti - i as i64) + e);
        }
    }
    for j in (1..t).filter(|&j| j as i64 <= cap) {
        predicted.insert(j as i64 + ap(j));
    }
    for &e in &last_depths {
        predicted.insert(ti + e);
        predicted.insert(1 + e);
    }
    predicted.insert(ti + 1);
    for i in (1..t).filter(|&i| ti + 1 - i as i64 <= cap) {
        predicted.insert(ti + 1 - i as i64 + ap(i));
    }

    let predicted: BTreeSet<i64> = predicted.into_iter().filter(|&x| (0..=cap).contains(&x)).collect();
    let within = brute.iter().all(|x| predicted.contains(&(x as i64)));
    Ok(ShortLengthCount {
        analytic: predicted.len(),
        brute: brute.len(),
        brute_within_analytic: within,
    })
}

/// A digit-set pair found by [`sumset_search`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumsetHit {
    pub x: Vec<i64>,
    pub y: Vec<i64>,
    /// `|X − Y|`.
    pub difference_size: usize,
    /// `|X + Y|`.
    pub sum_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumsetSearch {
    pub base: u32,
    pub max_size: usize,
    pub window: (i64, i64),
    /// Search states visited.
    pub explored: u64,
    /// Hits ranked by `|X + Y|`, then lexicographically.
    pub hits: Vec<SumsetHit>,
}

impl SumsetSearch {
    pub fn best_sum_size(&self) -> Option<usize> {
        self.hits.first().map(|h| h.sum_size)
    }
}

/// Default bound on visited search states.
pub const SEARCH_CAP: u64 = 10_000_000;

/// Digit sets `X, Y ⊆ [lo, hi]` of size at most `max_size` with
/// `X − Y ⊇ [0, base−1]`, ranked by `|X + Y|`.
///
/// The search always covers the smallest missing difference `d` next, trying
/// every `x` with `x − d` in the window. Pairs are reported once every
/// difference is covered, so each reported pair is built only from digits
/// used to cover something; adding digits never shrinks `X + Y`, so the
/// smallest sumset among all covering pairs is among the hits.
pub fn sumset_search(
    base: u32,
    max_size: usize,
    window: Option<(i64, i64)>,
) -> Result<SumsetSearch, ConstructionError> {
    sumset_search_capped(base, max_size, window, SEARCH_CAP)
}

pub fn sumset_search_capped(
    base: u32,
    max_size: usize,
    window: Option<(i64, i64)>,
    cap: u64,
) -> Result<SumsetSearch, ConstructionError> {
    if !(2..=13).contains(&base) {
        return Err(ConstructionError::SearchParams(format!("base {base} not in 2..=13")));
    }
    if !(1..=5).contains(&max_size) {
        return Err(ConstructionError::SearchParams(format!("set size {max_size} not in 1..=5")));
    }
    let b = base as i64;
    let (lo, hi) = window.unwrap_or((-b + 1, b - 1));
    if lo > hi || hi - lo + 1 > 64 {
        return Err(ConstructionError::SearchParams(format!("window [{lo}, {hi}] must hold 1..=64 digits")));
    }
    let mut search = Search {
        base: b,
        lo,
        width: (hi - lo + 1) as usize,
        size: max_size,
        full: (1u64 << base) - 1,
        visited: HashSet::new(),
        hits: Vec::new(),
        explored: 0,
        cap,
    };
    search.dfs(0, 0)?;
    let mut hits = search.hits;
    hits.sort_by(|p, q| (p.sum_size, &p.x, &p.y).cmp(&(q.sum_size, &q.x, &q.y)));
    Ok(SumsetSearch {
        base,
        max_size,
        window: (lo, hi),
        explored: search.explored,
        hits,
    })
}

struct Search {
    base: i64,
    lo: i64,
    width: usize,
    size: usize,
    full: u64,
    visited: HashSet<(u64, u64)>,
    hits: Vec<SumsetHit>,
    explored: u64,
    cap: u64,
}

impl Search {
    fn digits(&self, mask: u64) -> Vec<i64> {
        (0..self.width)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| i as i64 + self.lo)
            .collect()
    }

    fn dfs(&mut self, xs: u64, ys: u64) -> Result<(), ConstructionError> {
        if !self.visited.insert((xs, ys)) {
            return Ok(());
        }
        self.explored += 1;
        if self.explored > self.cap {
            return Err(ConstructionError::SearchCap {
                explored: self.explored,
                cap: self.cap,
            });
        }
        let x = self.digits(xs);
        let y = self.digits(ys);
        let mut covered = 0u64;
        for &p in &x {
            for &q in &y {
                let d = p - q;
                if (0..self.base).contains(&d) {
                    covered |= 1 << d;
                }
            }
        }
        if covered == self.full {
            let diff: BTreeSet<i64> = x.iter().flat_map(|p| y.iter().map(move |q| p - q)).collect();
            self.hits.push(SumsetHit {
                sum_size: sumset(&x, &y).len(),
                difference_size: diff.len(),
                x,
                y,
            });
            return Ok(());
        }
        let missing = (self.full & !covered).count_ones() as usize;
        if missing > self.size * self.size - x.len() * y.len() {
            return Ok(());
        }
        let d = (self.full & !covered).trailing_zeros() as i64;
        for i in 0..self.width {
            let j = i as i64 - d;
            if j < 0 {
                continue;
            }
            let j = j as usize;
            let new_x = xs >> i & 1 == 0;
            let new_y = ys >> j & 1 == 0;
            if (new_x && x.len() == self.size) || (new_y && y.len() == self.size) {
                continue;
            }
            self.dfs(xs | 1 << i, ys | 1 << j)?;
        }
        Ok(())
    }
}
