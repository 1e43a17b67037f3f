//! Leaf-to-leaf path lengths.
//!
//! [`leaf_lengths`] is the brute-force ground truth (breadth-first search
//! from every leaf). The other finders are constructive: each returns lengths
//! together with a partner leaf for every length, so every claim can be
//! re-checked by a single BFS.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::{GraphError, RootedTree, Tree};
use crate::util::{log_base, BOUND_SLACK};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TreeLenError {
    #[error("vertex {0} is not a leaf")]
    NotALeaf(usize),
    #[error("leaf {leaf} is at depth {found}, expected {expected}")]
    DepthMismatch {
        leaf: usize,
        expected: usize,
        found: usize,
    },
    #[error("no leaves supplied")]
    NoLeaves,
    #[error("maximum degree {found} exceeds the declared bound {delta}")]
    DegreeExceeded { found: usize, delta: usize },
    #[error("degree bound must be at least 3, got {0}")]
    DeltaTooSmall(usize),
    #[error("sequence value {value} at position {index} lies outside [0, {bound}]")]
    ValueOutOfRange { index: usize, value: f64, bound: f64 },
    #[error("bound must be a positive finite number, got {0}")]
    InvalidBound(f64),
    #[error("vertex {0} has degree 2")]
    DegreeTwoVertex(usize),
    #[error("longest path has length {diameter}, need at least {required}")]
    DiameterTooShort { diameter: usize, required: usize },
    #[error("horizon must be an even integer of at least 4, got {0}")]
    BadHorizon(usize),
    #[error("1-3 trees need an even vertex count of at least 2, got {0}")]
    OddOrder(usize),
    #[error("enumeration of {n}-vertex trees refused: cap is {cap}")]
    EnumerationCap { n: usize, cap: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A set of path lengths, each optionally witnessed by a leaf pair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LengthSet {
    lengths: BTreeSet<usize>,
    witnesses: BTreeMap<usize, (usize, usize)>,
}

impl LengthSet {
    pub fn new() -> LengthSet {
        LengthSet::default()
    }

    pub fn insert(&mut self, len: usize) -> bool {
        self.lengths.insert(len)
    }

    /// Adds `len` witnessed by the pair `(x, y)`; an existing witness for the
    /// same length is kept.
    pub fn insert_witnessed(&mut self, len: usize, x: usize, y: usize) -> bool {
        self.witnesses.entry(len).or_insert((x, y));
        self.lengths.insert(len)
    }

    pub fn remove(&mut self, len: usize) -> bool {
        self.witnesses.remove(&len);
        self.lengths.remove(&len)
    }

    pub fn contains(&self, len: usize) -> bool {
        self.lengths.contains(&len)
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.lengths.iter().copied()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn witness(&self, len: usize) -> Option<(usize, usize)> {
        self.witnesses.get(&len).copied()
    }

    pub fn witnesses(&self) -> impl Iterator<Item = (usize, (usize, usize))> + '_ {
        self.witnesses.iter().map(|(&l, &p)| (l, p))
    }

    pub fn max(&self) -> Option<usize> {
        self.lengths.last().copied()
    }

    pub fn extend_from(&mut self, other: &LengthSet) {
        for len in other.iter() {
            match other.witness(len) {
                Some((x, y)) => self.insert_witnessed(len, x, y),
                None => self.insert(len),
            };
        }
    }

    pub fn is_subset(&self, other: &LengthSet) -> bool {
        self.lengths.is_subset(&other.lengths)
    }

    /// Lengths at most `cap`.
    pub fn capped(&self, cap: usize) -> LengthSet {
        let mut out = LengthSet::new();
        for len in self.lengths.range(..=cap) {
            match self.witness(*len) {
                Some((x, y)) => out.insert_witnessed(*len, x, y),
                None => out.insert(*len),
            };
        }
        out
    }

    /// Checks every witness pair: both ends are leaves of `t` and their
    /// distance equals the claimed length. Unwitnessed lengths are reported.
    pub fn validate_in(&self, t: &Tree) -> Result<(), String> {
        let mut by_source: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
        for len in self.iter() {
            let (x, y) = self
                .witness(len)
                .ok_or_else(|| format!("length {len} has no witness"))?;
            if x >= t.n() || y >= t.n() || !t.is_leaf(x) || !t.is_leaf(y) {
                return Err(format!("witness ({x}, {y}) of length {len} is not a leaf pair"));
            }
            by_source.entry(x).or_default().push((y, len));
        }
        for (x, claims) in by_source {
            let d = t.distances_from(x);
            for (y, len) in claims {
                if d[y] != len {
                    return Err(format!("d({x}, {y}) = {} but {len} was claimed", d[y]));
                }
            }
        }
        Ok(())
    }
}

impl FromIterator<usize> for LengthSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> LengthSet {
        LengthSet {
            lengths: iter.into_iter().collect(),
            witnesses: BTreeMap::new(),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct LengthSetRepr {
    lengths: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    witnesses: Vec<(usize, usize, usize)>,
}

impl Serialize for LengthSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        LengthSetRepr {
            lengths: self.to_vec(),
            witnesses: self.witnesses().map(|(l, (x, y))| (l, x, y)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LengthSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<LengthSet, D::Error> {
        let repr = LengthSetRepr::deserialize(d)?;
        let mut set: LengthSet = repr.lengths.into_iter().collect();
        for (l, x, y) in repr.witnesses {
            set.witnesses.insert(l, (x, y));
        }
        Ok(set)
    }
}

/// Lengths of leaf-to-leaf paths having one fixed leaf as an endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub leaf: usize,
    pub lengths: LengthSet,
}

impl WitnessReport {
    /// Every length has a partner leaf `y` with `d(leaf, y)` equal to it.
    pub fn validate_in(&self, t: &Tree) -> Result<(), String> {
        for len in self.lengths.iter() {
            match self.lengths.witness(len) {
                Some((x, _)) if x != self.leaf => {
                    return Err(format!("length {len} is witnessed by {x}, not {}", self.leaf))
                }
                None => return Err(format!("length {len} has no partner leaf")),
                _ => {}
            }
        }
        self.lengths.validate_in(t)
    }
}

fn truncated_bfs(t: &Tree, source: usize, max_len: Option<usize>, mut visit: impl FnMut(usize, usize)) {
    let cap = max_len.unwrap_or(usize::MAX);
    let mut dist = vec![usize::MAX; t.n()];
    let mut queue = VecDeque::from([source]);
    dist[source] = 0;
    while let Some(u) = queue.pop_front() {
        visit(u, dist[u]);
        if dist[u] == cap {
            continue;
        }
        for &w in t.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
}

/// All leaf-to-leaf path lengths (at most `max_len` when given), by BFS from
/// every leaf. Witness pairs are the lexicographically first realizing pair.
pub fn leaf_lengths(t: &Tree, max_len: Option<usize>) -> LengthSet {
    let mut out = LengthSet::new();
    for x in t.leaves() {
        truncated_bfs(t, x, max_len, |y, d| {
            if y >= x && t.is_leaf(y) {
                out.insert_witnessed(d, x, y);
            }
        });
    }
    out
}

/// Lengths at most `max_len` of leaf-to-leaf paths starting at `leaf`.
pub fn witnessed_lengths(t: &Tree, leaf: usize, max_len: usize) -> Result<WitnessReport, TreeLenError> {
    t.graph().check_vertex(leaf)?;
    if !t.is_leaf(leaf) {
        return Err(TreeLenError::NotALeaf(leaf));
    }
    let mut lengths = LengthSet::new();
    truncated_bfs(t, leaf, Some(max_len), |y, d| {
        if t.is_leaf(y) {
            lengths.insert_witnessed(d, leaf, y);
        }
    });
    Ok(WitnessReport { leaf, lengths })
}

/// `log_{Δ−1}(m/Δ) + 2`: how many lengths one of `m` equidistant leaves
/// witnesses.
pub fn same_depth_bound(m: usize, delta: usize) -> f64 {
    log_base(m as f64 / delta as f64, (delta - 1) as f64) + 2.0
}

/// Given leaves all at the same depth `a` below the root, returns one of them
/// together with the lengths in `[0, 2a]` it witnesses along the descent.
///
/// Starting from the root, the current set of leaves is split by the child
/// subtree containing them. When all lie in one child we descend; otherwise
/// the leaf set shrinks to the largest part and a leaf of another part
/// contributes the length twice the remaining depth. The final survivor
/// witnesses every recorded length plus 0.
pub fn same_depth_witness(
    rt: &RootedTree,
    depth_leaves: &[usize],
    delta: usize,
) -> Result<WitnessReport, TreeLenError> {
    if delta < 3 {
        return Err(TreeLenError::DeltaTooSmall(delta));
    }
    let t = rt.tree();
    if t.max_degree() > delta {
        return Err(TreeLenError::DegreeExceeded {
            found: t.max_degree(),
            delta,
        });
    }
    let first = *depth_leaves.first().ok_or(TreeLenError::NoLeaves)?;
    let a = rt.layer(first);
    for &x in depth_leaves {
        t.graph().check_vertex(x)?;
        if !t.is_leaf(x) {
            return Err(TreeLenError::NotALeaf(x));
        }
        if rt.layer(x) != a {
            return Err(TreeLenError::DepthMismatch {
                leaf: x,
                expected: a,
                found: rt.layer(x),
            });
        }
    }
    let paths: Vec<Vec<usize>> = depth_leaves.iter().map(|&x| rt.root_path(x)).collect();
    let mut group: Vec<usize> = (0..depth_leaves.len()).collect();
    let mut splits: Vec<(usize, usize)> = Vec::new();
    let mut level = 0;
    while group.len() > 1 {
        let mut parts: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &i in &group {
            parts.entry(paths[i][level + 1]).or_default().push(i);
        }
        if parts.len() > 1 {
            let (&main_child, _) = parts
                .iter()
                .max_by_key(|(c, p)| (p.len(), std::cmp::Reverse(**c)))
                .unwrap();
            let partner = parts
                .iter()
                .find(|(c, _)| **c != main_child)
                .map(|(_, p)| depth_leaves[p[0]])
                .unwrap();
            splits.push((2 * (a - level), partner));
            group = parts.remove(&main_child).unwrap();
        }
        level += 1;
    }
    let leaf = depth_leaves[group[0]];
    let mut lengths = LengthSet::new();
    lengths.insert_witnessed(0, leaf, leaf);
    for (len, partner) in splits {
        lengths.insert_witnessed(len, leaf, partner);
    }
    Ok(WitnessReport { leaf, lengths })
}

/// `log_{Δ−1}((Δ−2)ℓ)`.
pub fn many_lengths_bound(delta: usize, leaves: usize) -> f64 {
    log_base(((delta - 2) * leaves) as f64, (delta - 1) as f64)
}

/// A vertex lying on every longest path, never a leaf when `n ≥ 3`.
///
/// All longest paths of a tree share their centre, so the centre vertex of
/// one longest path (the smaller-index end of the central edge when the
/// diameter is odd) qualifies.
pub fn helly_vertex(t: &Tree) -> Result<usize, TreeLenError> {
    if t.n() < 2 {
        return Err(TreeLenError::Graph(GraphError::NotATree(
            "need at least two vertices".into(),
        )));
    }
    let p = t.longest_path();
    let m = p.len();
    let v = p.vertices();
    Ok(if m % 2 == 0 {
        v[m / 2]
    } else {
        v[m / 2].min(v[m / 2 + 1])
    })
}

/// Whether `v` lies on every longest path of `t`, tested as "deleting `v`
/// strictly shortens the longest path".
pub fn lies_on_every_longest_path(t: &Tree, v: usize) -> bool {
    let keep: Vec<bool> = (0..t.n()).map(|w| w != v).collect();
    let (forest, _) = t.graph().induced(&keep);
    let mut seen = vec![false; forest.n()];
    let mut best = 0;
    for s in 0..forest.n() {
        if seen[s] {
            continue;
        }
        let d = crate::graphs::bfs_distances(&forest, s);
        let far = (0..forest.n())
            .filter(|&w| d[w].is_some())
            .max_by_key(|&w| d[w])
            .unwrap();
        for (w, dw) in d.iter().enumerate() {
            if dw.is_some() {
                seen[w] = true;
            }
        }
        let d2 = crate::graphs::bfs_distances(&forest, far);
        best = best.max(d2.iter().flatten().copied().max().unwrap());
    }
    best < t.diameter()
}

/// Which branch of the induction handled a step of [`many_lengths_traced`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum InductionStep {
    /// At most Δ leaves: 0 and the diameter.
    Base,
    /// A leaf lies strictly beyond half the diameter from the centre.
    FarLeaf,
    /// Too few leaves at half the diameter: shed those outside one branch.
    ShedBranch,
    /// Most leaves at half the diameter: the same-depth witness finishes.
    SameDepth,
}

/// Lengths guaranteed by the induction on the number of leaves: at least
/// `log_{Δ−1}((Δ−2)ℓ)` of them when `Δ ≥ 3`. For paths (`Δ ≤ 2`) the exact
/// set is returned.
pub fn many_lengths(t: &Tree) -> LengthSet {
    many_lengths_traced(t).0
}

pub fn many_lengths_traced(t: &Tree) -> (LengthSet, Vec<InductionStep>) {
    let delta = t.max_degree();
    if delta <= 2 {
        return (leaf_lengths(t, None), Vec::new());
    }
    let d1 = (delta - 1) * (delta - 1);
    let mut out = LengthSet::new();
    let mut steps = Vec::new();
    let mut cur = t.clone();
    let mut map: Vec<usize> = (0..t.n()).collect();
    loop {
        let leaves = cur.leaves();
        let l = leaves.len();
        if cur.n() == 1 {
            out.insert_witnessed(0, map[0], map[0]);
            steps.push(InductionStep::Base);
            break;
        }
        let longest = cur.longest_path();
        let m = longest.len();
        out.insert_witnessed(m, map[longest.first()], map[longest.last()]);
        if l <= delta {
            out.insert_witnessed(0, map[leaves[0]], map[leaves[0]]);
            steps.push(InductionStep::Base);
            break;
        }
        let v = helly_vertex(&cur).expect("at least two vertices");
        let dist = cur.distances_from(v);
        let far = leaves.iter().map(|&x| dist[x]).max().unwrap();
        let removed: Vec<usize> = if 2 * far > m {
            steps.push(InductionStep::FarLeaf);
            let x1: Vec<usize> = leaves.iter().copied().filter(|&x| dist[x] == far).collect();
            let x2: Vec<usize> = leaves.iter().copied().filter(|&x| dist[x] == m - far).collect();
            if x1.len() <= x2.len() {
                x1
            } else {
                x2
            }
        } else {
            let half: Vec<usize> = leaves.iter().copied().filter(|&x| 2 * dist[x] == m).collect();
            if half.len() * d1 >= (d1 - 1) * l {
                steps.push(InductionStep::SameDepth);
                let rt = RootedTree::new(cur.clone(), v).unwrap();
                let report = same_depth_witness(&rt, &half, delta).expect("preconditions hold");
                for (len, (x, y)) in report.lengths.witnesses() {
                    out.insert_witnessed(len, map[x], map[y]);
                }
                break;
            }
            steps.push(InductionStep::ShedBranch);
            // keep the half-depth leaves of the branch at v holding most of them
            let parent = cur.parents_from(v);
            let branch_of = |mut x: usize| {
                while parent[x] != v {
                    x = parent[x];
                }
                x
            };
            let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
            for &x in &half {
                *counts.entry(branch_of(x)).or_default() += 1;
            }
            let (&best, _) = counts
                .iter()
                .max_by_key(|(b, c)| (**c, std::cmp::Reverse(**b)))
                .unwrap();
            half.into_iter().filter(|&x| branch_of(x) != best).collect()
        };
        let mut is_removed = vec![false; cur.n()];
        for &x in &removed {
            is_removed[x] = true;
        }
        let targets: Vec<usize> = leaves.into_iter().filter(|&x| !is_removed[x]).collect();
        let keep = cur.spanning_subtree(&targets);
        let (next, sub_map) = cur.induced(&keep).expect("spanning subtrees are trees");
        map = sub_map.into_iter().map(|i| map[i]).collect();
        cur = next;
    }
    (out, steps)
}

/// Direction of a monotone subsequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Monotonicity {
    NonDecreasing,
    NonIncreasing,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneRun {
    pub indices: Vec<usize>,
    pub direction: Monotonicity,
}

impl MonotoneRun {
    /// Indices strictly increasing and values monotone in `direction`
    /// (strictly, for decreasing runs).
    pub fn is_valid<T: PartialOrd + Copy>(&self, seq: &[T]) -> bool {
        let idx_ok = self.indices.windows(2).all(|w| w[0] < w[1]) && self.indices.iter().all(|&i| i < seq.len());
        idx_ok
            && self.indices.windows(2).all(|w| match self.direction {
                Monotonicity::NonDecreasing => seq[w[0]] <= seq[w[1]],
                Monotonicity::NonIncreasing => seq[w[0]] > seq[w[1]],
            })
    }
}

fn chain_back(pred: &[usize], last: Option<usize>) -> Vec<usize> {
    let mut out = Vec::new();
    let mut cur = last;
    while let Some(i) = cur {
        out.push(i);
        cur = (pred[i] != usize::MAX).then(|| pred[i]);
    }
    out.reverse();
    out
}

/// A longest non-decreasing or strictly decreasing subsequence, whichever
/// is longer (non-decreasing on ties). Since the product of the two lengths
/// is at least `n`, the result has length at least `⌈√n⌉`.
pub fn monotone_subsequence<T: PartialOrd + Copy>(seq: &[T]) -> MonotoneRun {
    let n = seq.len();
    let mut up_tails: Vec<usize> = Vec::new();
    let mut down_tails: Vec<usize> = Vec::new();
    let mut up_pred = vec![usize::MAX; n];
    let mut down_pred = vec![usize::MAX; n];
    for (i, &x) in seq.iter().enumerate() {
        let k = up_tails.partition_point(|&j| seq[j] <= x);
        if k > 0 {
            up_pred[i] = up_tails[k - 1];
        }
        if k == up_tails.len() {
            up_tails.push(i);
        } else {
            up_tails[k] = i;
        }
        let k = down_tails.partition_point(|&j| seq[j] > x);
        if k > 0 {
            down_pred[i] = down_tails[k - 1];
        }
        if k == down_tails.len() {
            down_tails.push(i);
        } else {
            down_tails[k] = i;
        }
    }
    if up_tails.len() >= down_tails.len() {
        MonotoneRun {
            indices: chain_back(&up_pred, up_tails.last().copied()),
            direction: Monotonicity::NonDecreasing,
        }
    } else {
        MonotoneRun {
            indices: chain_back(&down_pred, down_tails.last().copied()),
            direction: Monotonicity::NonIncreasing,
        }
    }
}

/// Which shifted family a [`SequenceWitness`] realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShiftMode {
    /// Values `a_i + i`.
    Sum,
    /// Values `a_i − i`.
    Difference,
}

/// Positions (1-based) whose shifted values `a_i ± i` are pairwise distinct.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceWitness {
    pub indices: Vec<usize>,
    pub mode: ShiftMode,
    pub values: Vec<f64>,
}

impl SequenceWitness {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    fn from_indices(seq: &[f64], indices: Vec<usize>, mode: ShiftMode) -> SequenceWitness {
        let values = indices.iter().map(|&i| shifted(seq, i, mode)).collect();
        SequenceWitness { indices, mode, values }
    }

    /// Indices increasing, values recomputed from `seq` and pairwise distinct.
    pub fn check(&self, seq: &[f64]) -> bool {
        let increasing = self.indices.windows(2).all(|w| w[0] < w[1]);
        let in_range = self.indices.iter().all(|&i| (1..=seq.len()).contains(&i));
        if !increasing || !in_range || self.values.len() != self.indices.len() {
            return false;
        }
        let recomputed = self
            .indices
            .iter()
            .zip(&self.values)
            .all(|(&i, &v)| shifted(seq, i, self.mode) == v);
        let mut keys: Vec<u64> = self.values.iter().map(|v| float_key(*v)).collect();
        keys.sort_unstable();
        keys.dedup();
        recomputed && keys.len() == self.values.len()
    }
}

fn shifted(seq: &[f64], i: usize, mode: ShiftMode) -> f64 {
    match mode {
        ShiftMode::Sum => seq[i - 1] + i as f64,
        ShiftMode::Difference => seq[i - 1] - i as f64,
    }
}

fn float_key(v: f64) -> u64 {
    if v == 0.0 {
        0.0f64.to_bits()
    } else {
        v.to_bits()
    }
}

/// `n / (4√m)`.
pub fn shifted_values_bound(n: usize, m: f64) -> f64 {
    n as f64 / (4.0 * m.sqrt())
}

fn check_bounded(seq: &[f64], m: f64) -> Result<(), TreeLenError> {
    if !(m.is_finite() && m > 0.0) {
        return Err(TreeLenError::InvalidBound(m));
    }
    for (i, &a) in seq.iter().enumerate() {
        if !(0.0..=m).contains(&a) {
            return Err(TreeLenError::ValueOutOfRange {
                index: i + 1,
                value: a,
                bound: m,
            });
        }
    }
    Ok(())
}

fn distinct_branch(seq: &[f64], mode: ShiftMode) -> SequenceWitness {
    let mut seen = std::collections::HashSet::new();
    let indices = (1..=seq.len())
        .filter(|&i| seen.insert(float_key(shifted(seq, i, mode))))
        .collect();
    SequenceWitness::from_indices(seq, indices, mode)
}

/// For `0 ≤ a_i ≤ m`, one of `{a_i + i}` and `{a_i − i}` has at least
/// `n/(4√m)` distinct values. Returns a witness for the larger of the two
/// (the sum family on ties), one index per distinct value.
pub fn shifted_values(seq: &[f64], m: f64) -> Result<SequenceWitness, TreeLenError> {
    check_bounded(seq, m)?;
    let sum = distinct_branch(seq, ShiftMode::Sum);
    let diff = distinct_branch(seq, ShiftMode::Difference);
    debug_assert!({
        let blocks = block_witness(seq, m).unwrap();
        blocks.len() <= sum.len().max(diff.len())
    });
    Ok(if sum.len() >= diff.len() { sum } else { diff })
}

/// The block construction behind the `n/(4√m)` bound.
///
/// With `w = ⌈m⌉`, the windows `[2(k−1)w+1, (2k−1)w]` are separated by gaps
/// of width `w`, so shifted values from different windows never collide. Each
/// window contributes a monotone run; the majority direction decides the
/// family. When `2w > n` a single run over the whole sequence is used.
pub fn block_witness(seq: &[f64], m: f64) -> Result<SequenceWitness, TreeLenError> {
    check_bounded(seq, m)?;
    let n = seq.len();
    let w = (m.ceil() as usize).max(1);
    let mode_of = |d: Monotonicity| match d {
        Monotonicity::NonDecreasing => ShiftMode::Sum,
        Monotonicity::NonIncreasing => ShiftMode::Difference,
    };
    if n == 0 {
        return Ok(SequenceWitness::from_indices(seq, Vec::new(), ShiftMode::Sum));
    }
    if 2 * w > n {
        let run = monotone_subsequence(seq);
        let indices = run.indices.iter().map(|i| i + 1).collect();
        return Ok(SequenceWitness::from_indices(seq, indices, mode_of(run.direction)));
    }
    let mut up: Vec<usize> = Vec::new();
    let mut down: Vec<usize> = Vec::new();
    for k in 1..=n / (2 * w) {
        let start = 2 * (k - 1) * w;
        let run = monotone_subsequence(&seq[start..start + w]);
        let target = match run.direction {
            Monotonicity::NonDecreasing => &mut up,
            Monotonicity::NonIncreasing => &mut down,
        };
        target.extend(run.indices.iter().map(|i| start + i + 1));
    }
    let blocks_up = up.len();
    Ok(if blocks_up >= down.len() {
        SequenceWitness::from_indices(seq, up, ShiftMode::Sum)
    } else {
        SequenceWitness::from_indices(seq, down, ShiftMode::Difference)
    })
}

/// Which case of the short-lengths argument produced a report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ShortLengthsCase {
    /// Some hanging subtree has all its leaves deep: same-depth leaves of a
    /// binary subtree supply the lengths.
    DeepSubtree { spine_index: usize, depth: usize },
    /// Every hanging subtree has a shallow leaf: nearest leaves along the
    /// spine combine through shifted values.
    ShallowLeaves { mode: ShiftMode },
}

/// `N^{2/3}/6`.
pub fn short_lengths_bound(horizon: usize) -> f64 {
    (horizon as f64).powf(2.0 / 3.0) / 6.0
}

/// One leaf witnessing `Ω(N^{2/3})` distinct lengths in `[0, N]`, for trees
/// with no degree-2 vertex and a path of length at least `N/2`.
pub fn short_lengths(t: &Tree, horizon: usize) -> Result<WitnessReport, TreeLenError> {
    short_lengths_detailed(t, horizon).map(|(r, _)| r)
}

pub fn short_lengths_detailed(
    t: &Tree,
    horizon: usize,
) -> Result<(WitnessReport, ShortLengthsCase), TreeLenError> {
    if horizon < 4 || horizon % 2 == 1 {
        return Err(TreeLenError::BadHorizon(horizon));
    }
    if let Some(v) = (0..t.n()).find(|&v| t.degree(v) == 2) {
        return Err(TreeLenError::DegreeTwoVertex(v));
    }
    let spine = t.longest_path();
    let diameter = spine.len();
    if diameter < horizon / 2 {
        return Err(TreeLenError::DiameterTooShort {
            diameter,
            required: horizon / 2,
        });
    }
    let p = spine.vertices();
    let mut on_spine = vec![false; t.n()];
    for &v in p {
        on_spine[v] = true;
    }
    // the far endpoint of the spine has no hanging subtree
    let count = (horizon / 2).min(diameter - 1);
    // real thresholds floor to integers; the slack keeps exact cubes exact
    let threshold = ((horizon as f64).powf(2.0 / 3.0) / 2.0 + BOUND_SLACK).floor() as usize;

    let mut nearest: Vec<(usize, usize)> = Vec::with_capacity(count);
    let mut dist = vec![usize::MAX; t.n()];
    for i in 1..=count {
        let root = p[i];
        let mut best: Option<(usize, usize)> = None;
        let mut queue = VecDeque::from([root]);
        dist[root] = 0;
        let mut touched = vec![root];
        while let Some(u) = queue.pop_front() {
            if u != root && t.is_leaf(u) {
                let cand = (dist[u], u);
                if best.map_or(true, |b| cand < b) {
                    best = Some(cand);
                }
            }
            for &w in t.neighbors(u) {
                if !on_spine[w] && dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    touched.push(w);
                    queue.push_back(w);
                }
            }
        }
        for v in touched {
            dist[v] = usize::MAX;
        }
        nearest.push(best.expect("internal spine vertices have degree at least 3"));
    }

    if let Some(i) = nearest.iter().position(|&(d, _)| d > threshold) {
        let (report, depth) = deep_subtree_witness(t, p[i + 1], &on_spine)?;
        return Ok((
            report,
            ShortLengthsCase::DeepSubtree {
                spine_index: i + 1,
                depth,
            },
        ));
    }

    let depths: Vec<f64> = nearest.iter().map(|&(d, _)| d as f64).collect();
    let witness = shifted_values(&depths, threshold as f64)?;
    let k = nearest.len();
    let a = |i: usize| nearest[i - 1].0;
    let x = |i: usize| nearest[i - 1].1;
    let (leaf, pairs): (usize, Vec<(usize, usize)>) = match witness.mode {
        ShiftMode::Sum => (x(1), (2..=k).map(|i| (a(1) + a(i) + i - 1, x(i))).collect()),
        ShiftMode::Difference => (x(k), (1..k).map(|i| (a(k) + a(i) + k - i, x(i))).collect()),
    };
    let mut lengths = LengthSet::new();
    lengths.insert_witnessed(0, leaf, leaf);
    for (len, partner) in pairs {
        if len <= horizon {
            lengths.insert_witnessed(len, leaf, partner);
        }
    }
    Ok((
        WitnessReport { leaf, lengths },
        ShortLengthsCase::ShallowLeaves { mode: witness.mode },
    ))
}

/// Binary subtree below spine vertex `v` (keeping the two smallest children
/// at every branching), then the same-depth witness on its most populated
/// leaf layer.
fn deep_subtree_witness(
    t: &Tree,
    v: usize,
    on_spine: &[bool],
) -> Result<(WitnessReport, usize), TreeLenError> {
    let start = t
        .neighbors(v)
        .iter()
        .copied()
        .find(|&u| !on_spine[u] && !t.is_leaf(u))
        .expect("deep subtrees start at a non-leaf");
    let mut keep = vec![false; t.n()];
    keep[v] = true;
    let mut stack = vec![(start, v)];
    while let Some((u, parent)) = stack.pop() {
        keep[u] = true;
        let children: Vec<usize> = t.neighbors(u).iter().copied().filter(|&w| w != parent).collect();
        for &c in children.iter().take(2) {
            stack.push((c, u));
        }
    }
    let (sub, map) = t.induced(&keep)?;
    let root = map.iter().position(|&w| w == v).unwrap();
    let rt = RootedTree::new(sub, root)?;
    let mut by_depth: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in rt.tree().leaves() {
        if x != root {
            by_depth.entry(rt.layer(x)).or_default().push(x);
        }
    }
    let (&depth, leaves) = by_depth
        .iter()
        .max_by_key(|(d, l)| (l.len(), std::cmp::Reverse(**d)))
        .unwrap();
    let local = same_depth_witness(&rt, leaves, 3)?;
    let mut lengths = LengthSet::new();
    for (len, (x, y)) in local.lengths.witnesses() {
        lengths.insert_witnessed(len, map[x], map[y]);
    }
    Ok((
        WitnessReport {
            leaf: map[local.leaf],
            lengths,
        },
        depth,
    ))
}

/// Default cap on the order of enumerated 1–3 trees.
pub const ENUMERATION_CAP: usize = 26;

/// All 1–3 trees on `n` vertices up to isomorphism, sorted by canonical form.
pub fn enumerate_one_three_trees(n: usize) -> Result<Vec<Tree>, TreeLenError> {
    enumerate_one_three_trees_capped(n, ENUMERATION_CAP)
}

/// As [`enumerate_one_three_trees`] with an explicit cap.
///
/// Every 1–3 tree on `n ≥ 6` vertices has two leaves sharing a neighbour;
/// deleting them leaves a 1–3 tree on `n − 2` vertices. So the trees on `n`
/// vertices are exactly the results of growing two leaves on some leaf of a
/// tree on `n − 2` vertices, deduplicated by centroid-rooted canonical form.
pub fn enumerate_one_three_trees_capped(n: usize, cap: usize) -> Result<Vec<Tree>, TreeLenError> {
    if n < 2 || n % 2 == 1 {
        return Err(TreeLenError::OddOrder(n));
    }
    if n > cap {
        return Err(TreeLenError::EnumerationCap { n, cap });
    }
    let mut level: BTreeMap<Vec<u8>, Tree> = BTreeMap::new();
    let edge = Tree::from_edges(2, &[(0, 1)])?;
    level.insert(canonical_form(&edge), edge);
    let mut order = 2;
    while order < n {
        let mut next: BTreeMap<Vec<u8>, Tree> = BTreeMap::new();
        for t in level.values() {
            let edges: Vec<(usize, usize)> = t.graph().edges().collect();
            for leaf in t.leaves() {
                let mut grown = edges.clone();
                grown.push((leaf, order));
                grown.push((leaf, order + 1));
                let g = Tree::from_edges(order + 2, &grown)?;
                next.entry(canonical_form(&g)).or_insert(g);
            }
        }
        level = next;
        order += 2;
    }
    Ok(level.into_values().collect())
}

/// Centroid-rooted AHU encoding: `(`, the sorted child encodings, `)`. With
/// two centroids the smaller of the two rooted encodings is used.
pub fn canonical_form(t: &Tree) -> Vec<u8> {
    centroids(t)
        .into_iter()
        .map(|c| rooted_encoding(t, c))
        .min()
        .unwrap()
}

fn centroids(t: &Tree) -> Vec<usize> {
    let n = t.n();
    let parent = t.parents_from(0);
    let order = bfs_order(t, 0);
    let mut size = vec![1usize; n];
    for &v in order.iter().rev() {
        if v != 0 {
            size[parent[v]] += size[v];
        }
    }
    let heaviest = |v: usize| {
        t.neighbors(v)
            .iter()
            .map(|&w| if w == parent[v] { n - size[v] } else { size[w] })
            .max()
            .unwrap_or(0)
    };
    let best = (0..n).map(heaviest).min().unwrap();
    (0..n).filter(|&v| heaviest(v) == best).collect()
}

fn bfs_order(t: &Tree, root: usize) -> Vec<usize> {
    let parent = t.parents_from(root);
    let mut order = vec![root];
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        for &w in t.neighbors(u) {
            if w != parent[u] || (u == root && w != root) {
                if parent[w] == u {
                    order.push(w);
                }
            }
        }
        i += 1;
    }
    order
}

fn rooted_encoding(t: &Tree, root: usize) -> Vec<u8> {
    let parent = t.parents_from(root);
    let order = bfs_order(t, root);
    let mut enc: Vec<Vec<u8>> = vec![Vec::new(); t.n()];
    for &v in order.iter().rev() {
        let mut kids: Vec<Vec<u8>> = t
            .neighbors(v)
            .iter()
            .filter(|&&w| parent[w] == v && w != root)
            .map(|&w| std::mem::take(&mut enc[w]))
            .collect();
        kids.sort();
        let mut s = vec![b'('];
        for k in kids {
            s.extend(k);
        }
        s.push(b')');
        enc[v] = s;
    }
    std::mem::take(&mut enc[root])
}
