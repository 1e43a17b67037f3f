//! Cycle lengths in k-ordered graphs.
//!
//! A vertex ordering turns the graph into a DAG of forward edges, and
//! reachability in that DAG is a partial order `⪯`. Two sources of cycles:
//!
//! * long forward paths: a longest forward path with `t` vertices carries a
//!   vine, a chain of forward detours whose union with the path is a cycle of
//!   length in `[t, 2t−2]`; suffixes of one longest path give a cycle in every
//!   dyadic interval `(2^s, 2^{s+1}]` up to its length;
//! * wide antichains: a forward tree and a backward tree sharing the
//!   antichain as leaf set, made fair (all leaves at one depth), nest good
//!   cycles of strictly decreasing length.
//!
//! [`many_cycle_lengths`] runs both and returns every length with an
//! explicit cycle.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitMatrix;
use crate::critical::{critical_ordering, k_ordered_violation, CriticalError, VertexOrdering};
use crate::graphs::{Graph, GraphError, Path};
use crate::treelen::LengthSet;
use crate::util::required_count;

/// Largest vertex count for which reachability is materialized.
pub const REACH_CAP: usize = 50_000;
/// Largest vertex count accepted by [`cycle_length_oracle`].
pub const ORACLE_CAP: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycleError {
    #[error("{n} vertices exceed the reachability cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("ordering is not k-ordered: {0}")]
    NotKOrdered(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("vine condition violated: {0}")]
    Vine(String),
    #[error("directed tree construction failed: {0}")]
    Trees(String),
    #[error("input is not an antichain: {0} and {1} are comparable")]
    NotAnAntichain(usize, usize),
    #[error("need at least two leaves, got {0}")]
    TooFewLeaves(usize),
    #[error("a root has {found} children, more than {delta}")]
    DegreeExceeded { found: usize, delta: usize },
    #[error("invalid cycle: {0}")]
    InvalidCycle(String),
    #[error("cycle oracle refuses {n} vertices (cap {cap})")]
    OracleCap { n: usize, cap: usize },
    #[error(transparent)]
    Critical(#[from] CriticalError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Where a cycle came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Vine,
    GoodCycle,
    Oracle,
}

/// An explicit cycle of the host graph, listed in cyclic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCertificate {
    pub length: usize,
    pub vertices: Vec<usize>,
    pub provenance: Provenance,
}

impl CycleCertificate {
    pub fn new(vertices: Vec<usize>, provenance: Provenance) -> CycleCertificate {
        CycleCertificate {
            length: vertices.len(),
            vertices,
            provenance,
        }
    }

    /// At least 3 distinct vertices, cyclically adjacent, length matching.
    pub fn validate(&self, g: &Graph) -> Result<(), String> {
        let k = self.vertices.len();
        if k < 3 || k != self.length {
            return Err(format!("{} vertices for claimed length {}", k, self.length));
        }
        let mut seen = BTreeSet::new();
        for &v in &self.vertices {
            if v >= g.n() || !seen.insert(v) {
                return Err(format!("vertex {v} is repeated or out of range"));
            }
        }
        for i in 0..k {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % k]);
            if !g.has_edge(a, b) {
                return Err(format!("{a} and {b} are not adjacent"));
            }
        }
        Ok(())
    }
}

/// Distinct cycle lengths, one certificate each.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CertifiedCycles {
    by_length: BTreeMap<usize, CycleCertificate>,
}

impl CertifiedCycles {
    pub fn new() -> CertifiedCycles {
        CertifiedCycles::default()
    }

    /// Keeps the first certificate seen for each length.
    pub fn insert(&mut self, c: CycleCertificate) -> bool {
        match self.by_length.entry(c.length) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
                true
            }
            _ => false,
        }
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.by_length.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.by_length.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_length.is_empty()
    }

    pub fn certificates(&self) -> impl Iterator<Item = &CycleCertificate> {
        self.by_length.values()
    }

    pub fn remove(&mut self, len: usize) -> Option<CycleCertificate> {
        self.by_length.remove(&len)
    }

    pub fn to_length_set(&self) -> LengthSet {
        self.lengths().into_iter().collect()
    }

    pub fn validate(&self, g: &Graph) -> Result<(), String> {
        self.by_length
            .par_iter()
            .map(|(_, c)| c.validate(g))
            .collect::<Result<Vec<()>, String>>()
            .map(|_| ())
    }
}

impl Serialize for CertifiedCycles {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            lengths: Vec<usize>,
            certificates: Vec<&'a CycleCertificate>,
        }
        Repr {
            lengths: self.lengths(),
            certificates: self.by_length.values().collect(),
        }
        .serialize(s)
    }
}

/// The forward-edge DAG of an ordered graph with full reachability.
///
/// Internally everything is indexed by ordering position; the public
/// interface speaks in vertices.
#[derive(Clone, Debug)]
pub struct ForwardDigraph {
    graph: Graph,
    ordering: VertexOrdering,
    fwd: Vec<Vec<usize>>,
    reach: BitMatrix,
    longest_from: Vec<usize>,
    next_on_longest: Vec<usize>,
    height: Vec<usize>,
}

impl ForwardDigraph {
    pub fn new(g: &Graph, ord: &VertexOrdering) -> Result<ForwardDigraph, CycleError> {
        let n = g.n();
        if n > REACH_CAP {
            return Err(CycleError::TooLarge { n, cap: REACH_CAP });
        }
        if ord.n() != n {
            return Err(CycleError::Precondition("ordering size differs from the graph".into()));
        }
        let ord = VertexOrdering::from_order(g, ord.order.clone())?;
        let mut fwd: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            let v = ord.vertex_at(i);
            let mut out: Vec<usize> = g
                .neighbors(v)
                .iter()
                .map(|&w| ord.position(w))
                .filter(|&j| j > i)
                .collect();
            out.sort_unstable();
            fwd[i] = out;
        }
        let mut reach = BitMatrix::new(n);
        let mut longest_from = vec![0usize; n];
        let mut next_on_longest = vec![usize::MAX; n];
        for i in (0..n).rev() {
            reach.set(i, i);
            for &j in &fwd[i] {
                reach.or_row(i, j);
                if longest_from[j] + 1 > longest_from[i] {
                    longest_from[i] = longest_from[j] + 1;
                    next_on_longest[i] = j;
                }
            }
        }
        let mut height = vec![0usize; n];
        for i in 0..n {
            for &j in &fwd[i] {
                height[j] = height[j].max(height[i] + 1);
            }
        }
        Ok(ForwardDigraph {
            graph: g.clone(),
            ordering: ord,
            fwd,
            reach,
            longest_from,
            next_on_longest,
            height,
        })
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn ordering(&self) -> &VertexOrdering {
        &self.ordering
    }

    pub fn position(&self, v: usize) -> usize {
        self.ordering.position(v)
    }

    pub fn vertex_at(&self, i: usize) -> usize {
        self.ordering.vertex_at(i)
    }

    /// `u ⪯ v`: a forward path leads from `u` to `v`.
    pub fn precedes_eq(&self, u: usize, v: usize) -> bool {
        self.reach.get(self.position(u), self.position(v))
    }

    pub fn comparable(&self, u: usize, v: usize) -> bool {
        self.precedes_eq(u, v) || self.precedes_eq(v, u)
    }

    /// Forward neighbours of `v`, by increasing position.
    pub fn forward_neighbors(&self, v: usize) -> Vec<usize> {
        self.fwd[self.position(v)].iter().map(|&j| self.vertex_at(j)).collect()
    }

    /// Edge count of a longest forward path starting at `v`.
    pub fn longest_from(&self, v: usize) -> usize {
        self.longest_from[self.position(v)]
    }

    /// Edge count of a longest forward path.
    pub fn longest_path_len(&self) -> usize {
        self.longest_from.iter().copied().max().unwrap_or(0)
    }

    /// Whether `vertices` is a forward path of the host graph.
    pub fn is_forward_path(&self, vertices: &[usize]) -> bool {
        vertices.windows(2).all(|w| {
            w[0] < self.n()
                && w[1] < self.n()
                && self.graph.has_edge(w[0], w[1])
                && self.position(w[0]) < self.position(w[1])
        })
    }

    /// Shortest forward path from `a` to `b`, if `a ⪯ b`.
    pub fn forward_path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        let (pa, pb) = (self.position(a), self.position(b));
        if !self.reach.get(pa, pb) {
            return None;
        }
        let mut parent: HashMap<usize, usize> = HashMap::new();
        parent.insert(pa, pa);
        let mut queue = VecDeque::from([pa]);
        while let Some(i) = queue.pop_front() {
            if i == pb {
                break;
            }
            for &j in &self.fwd[i] {
                if j <= pb && self.reach.get(j, pb) && !parent.contains_key(&j) {
                    parent.insert(j, i);
                    queue.push_back(j);
                }
            }
        }
        let mut out = vec![pb];
        let mut cur = pb;
        while cur != pa {
            cur = parent[&cur];
            out.push(cur);
        }
        out.reverse();
        Some(out.into_iter().map(|i| self.vertex_at(i)).collect())
    }

    /// Checks that no two members of `set` are comparable, using one bitset
    /// row per member.
    pub fn antichain_violation(&self, set: &[usize]) -> Option<(usize, usize)> {
        let words = self.n().div_ceil(64);
        let mut mask = vec![0u64; words];
        for &v in set {
            let p = self.position(v);
            mask[p / 64] |= 1 << (p % 64);
        }
        for &v in set {
            let p = self.position(v);
            for (w, (&r, &m)) in self.reach.row(p).iter().zip(&mask).enumerate() {
                let mut hit = r & m;
                if w == p / 64 {
                    hit &= !(1 << (p % 64));
                }
                if hit != 0 {
                    let q = w * 64 + hit.trailing_zeros() as usize;
                    return Some((v, self.vertex_at(q)));
                }
            }
        }
        None
    }
}

pub fn forward_digraph(g: &Graph, ord: &VertexOrdering) -> Result<ForwardDigraph, CycleError> {
    ForwardDigraph::new(g, ord)
}

/// A longest forward path, from `start` if given, else the globally longest
/// one starting at the smallest possible position. Successor ties go to the
/// smallest position.
pub fn longest_forward_path(fd: &ForwardDigraph, start: Option<usize>) -> Path {
    let mut i = match start {
        Some(v) => fd.position(v),
        None => (0..fd.n())
            .max_by_key(|&i| (fd.longest_from[i], std::cmp::Reverse(i)))
            .unwrap_or(0),
    };
    let mut out = vec![fd.vertex_at(i)];
    while fd.next_on_longest[i] != usize::MAX {
        i = fd.next_on_longest[i];
        out.push(fd.vertex_at(i));
    }
    Path::new_unchecked(out)
}

/// One detour of a vine: a forward path from `a` to `b` meeting the base only
/// at its ends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VineLink {
    pub a: usize,
    pub b: usize,
    pub path: Vec<usize>,
}

/// A base forward path with interleaved forward detours.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vine {
    pub base: Vec<usize>,
    pub links: Vec<VineLink>,
}

/// Builds a vine on `base`, a longest forward path from its first vertex.
///
/// The first detour leaves `v_1`; each later one leaves the predecessor on
/// the base of the previous detour's end. A detour starts with the
/// smallest-position forward neighbour other than the next base vertex and
/// then always steps to the smallest-position forward neighbour, stopping at
/// the first base vertex it meets.
pub fn build_vine(fd: &ForwardDigraph, base: &Path) -> Result<Vine, CycleError> {
    let p = base.vertices();
    let t = p.len();
    let n = fd.n();
    if t < 3 {
        return Err(CycleError::Precondition(format!("base has {t} vertices, need at least 3")));
    }
    if !fd.is_forward_path(p) {
        return Err(CycleError::Precondition("base is not a forward path".into()));
    }
    if fd.position(p[0]) + 2 >= n || fd.position(p[t - 1]) != n - 1 {
        return Err(CycleError::Precondition("base must run from before x_{n-1} to x_n".into()));
    }
    if fd.longest_from(p[0]) != t - 1 {
        return Err(CycleError::Precondition("base is not a longest forward path from its start".into()));
    }
    let mut on_base: HashMap<usize, usize> = HashMap::with_capacity(t);
    for (i, &v) in p.iter().enumerate() {
        on_base.insert(v, i);
    }
    let mut links = Vec::new();
    let mut ai = 0;
    loop {
        let a = p[ai];
        let skip = p[ai + 1];
        let c = fd
            .forward_neighbors(a)
            .into_iter()
            .find(|&c| c != skip)
            .ok_or_else(|| CycleError::Vine(format!("{a} has no second forward neighbour")))?;
        let mut walk = vec![a, c];
        let mut cur = c;
        while !on_base.contains_key(&cur) {
            cur = *fd
                .forward_neighbors(cur)
                .first()
                .ok_or_else(|| CycleError::Vine(format!("forward walk stuck at {cur}")))?;
            walk.push(cur);
        }
        let bi = on_base[&cur];
        if bi < ai + 2 {
            return Err(CycleError::Vine(format!("detour from {a} lands at base index {bi}")));
        }
        links.push(VineLink { a, b: cur, path: walk });
        if bi == t - 1 {
            break;
        }
        ai = bi - 1;
    }
    let vine = Vine {
        base: p.to_vec(),
        links,
    };
    vine.validate(fd)?;
    Ok(vine)
}

impl Vine {
    /// Vertex count `t` of the base path.
    pub fn t(&self) -> usize {
        self.base.len()
    }

    /// Conditions (1)–(3), disjoint interiors and `ℓ(Q_i) ≤ ℓ(P[a_i, b_i])`.
    pub fn validate(&self, fd: &ForwardDigraph) -> Result<(), CycleError> {
        let err = |s: String| Err(CycleError::Vine(s));
        let p = &self.base;
        let t = p.len();
        let idx: HashMap<usize, usize> = p.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        if self.links.is_empty() {
            return err("no links".into());
        }
        let mut interiors = BTreeSet::new();
        let mut anchors = Vec::new();
        for (i, q) in self.links.iter().enumerate() {
            let path = &q.path;
            if path.len() < 2 || path[0] != q.a || *path.last().unwrap() != q.b {
                return err(format!("link {i} endpoints do not match its anchors"));
            }
            if !fd.is_forward_path(path) {
                return err(format!("link {i} is not a forward path"));
            }
            let (Some(&ia), Some(&ib)) = (idx.get(&q.a), idx.get(&q.b)) else {
                return err(format!("link {i} anchors are not on the base"));
            };
            if ib < ia + 2 {
                return err(format!("link {i} spans fewer than two base edges"));
            }
            for &v in &path[1..path.len() - 1] {
                if idx.contains_key(&v) {
                    return err(format!("link {i} touches the base at {v}"));
                }
                if !interiors.insert(v) {
                    return err(format!("links share interior vertex {v}"));
                }
            }
            if path.len() - 1 > ib - ia {
                return err(format!("link {i} is longer than the base segment it spans"));
            }
            anchors.push((ia, ib));
        }
        let m = anchors.len();
        if anchors[0].0 != 0 || anchors[m - 1].1 != t - 1 {
            return err("first link must leave v_1 and last must reach x_n".into());
        }
        for i in 0..m - 1 {
            let (a1, b1) = anchors[i];
            let (a2, b2) = anchors[i + 1];
            if !(a1 < a2 && a2 < b1 && b1 < b2) {
                return err(format!("links {i} and {} do not interleave", i + 1));
            }
            if a2 + 1 != b1 {
                return err(format!("a_{} is not the predecessor of b_{}", i + 2, i + 1));
            }
            if i + 2 < m && anchors[i + 2].0 < b1 {
                return err(format!("a_{} precedes b_{}", i + 3, i + 1));
            }
        }
        Ok(())
    }
}

/// The cycle formed by the base minus the edges `a_{j+1} b_j`, plus every
/// detour.
pub fn vine_cycle(v: &Vine) -> Result<CycleCertificate, CycleError> {
    let key = |a: usize, b: usize| (a.min(b), a.max(b));
    let mut edges: BTreeSet<(usize, usize)> = v.base.windows(2).map(|w| key(w[0], w[1])).collect();
    for j in 0..v.links.len() - 1 {
        edges.remove(&key(v.links[j + 1].a, v.links[j].b));
    }
    for q in &v.links {
        for w in q.path.windows(2) {
            if !edges.insert(key(w[0], w[1])) {
                return Err(CycleError::InvalidCycle(format!("edge {:?} used twice", w)));
            }
        }
    }
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for &(a, b) in &edges {
        adj.entry(a).or_default().push(b);
        adj.entry(b).or_default().push(a);
    }
    if let Some((v, _)) = adj.iter().find(|(_, n)| n.len() != 2) {
        return Err(CycleError::InvalidCycle(format!("vertex {v} does not have degree 2")));
    }
    let start = v.base[0];
    let mut cycle = vec![start];
    let mut prev = start;
    let mut cur = v.links[0].path[1];
    while cur != start {
        cycle.push(cur);
        let nb = &adj[&cur];
        let next = if nb[0] == prev { nb[1] } else { nb[0] };
        prev = cur;
        cur = next;
    }
    if cycle.len() != edges.len() {
        return Err(CycleError::InvalidCycle("edge set is not a single cycle".into()));
    }
    Ok(CycleCertificate::new(cycle, Provenance::Vine))
}

/// Vines on the suffixes of one longest forward path with `2^s + 1`
/// vertices, one cycle per dyadic interval `(2^s, 2^{s+1}]`.
pub fn cycle_lengths_from_paths(fd: &ForwardDigraph) -> Result<(CertifiedCycles, Vec<Vine>), CycleError> {
    let q = longest_forward_path(fd, None);
    let l = q.len();
    let mut out = CertifiedCycles::new();
    let mut vines = Vec::new();
    if l < 2 {
        return Ok((out, vines));
    }
    for s in 1..=l.ilog2() {
        let t = 1usize << s;
        let suffix = Path::new_unchecked(q.vertices()[l - t..].to_vec());
        let vine = build_vine(fd, &suffix)?;
        let c = vine_cycle(&vine)?;
        if c.length <= t || c.length > 2 * t {
            return Err(CycleError::Vine(format!("cycle length {} outside ({t}, {}]", c.length, 2 * t)));
        }
        out.insert(c);
        vines.push(vine);
    }
    Ok((out, vines))
}

/// The largest height level: vertices whose longest incoming forward path
/// has the same length. Levels are antichains and there are at most `c` of
/// them, so the largest has at least `n/c` vertices.
pub fn large_antichain(fd: &ForwardDigraph) -> Vec<usize> {
    let mut levels: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..fd.n() {
        levels.entry(fd.height[i]).or_default().push(fd.vertex_at(i));
    }
    levels
        .into_iter()
        .max_by_key(|(h, l)| (l.len(), std::cmp::Reverse(*h)))
        .map(|(_, l)| l)
        .unwrap_or_default()
}

/// Orientation of a [`DirectedTree`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Root-to-leaf paths are forward paths.
    Forward,
    /// Leaf-to-root paths are forward paths.
    Backward,
}

/// A rooted subtree of the host graph whose root-to-leaf paths are monotone
/// under `⪯`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectedTree {
    pub root: usize,
    pub direction: Direction,
    /// Common root-to-leaf distance, when all leaves share one.
    pub fair_depth: Option<usize>,
    parent: BTreeMap<usize, usize>,
    children: BTreeMap<usize, Vec<usize>>,
}

impl DirectedTree {
    pub fn single(v: usize, direction: Direction) -> DirectedTree {
        DirectedTree {
            root: v,
            direction,
            fair_depth: None,
            parent: BTreeMap::new(),
            children: BTreeMap::new(),
        }
    }

    fn attach(&mut self, parent: usize, child: usize) {
        self.parent.insert(child, parent);
        self.children.entry(parent).or_default().push(child);
    }

    pub fn contains(&self, v: usize) -> bool {
        v == self.root || self.parent.contains_key(&v)
    }

    pub fn size(&self) -> usize {
        self.parent.len() + 1
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut out: Vec<usize> = std::iter::once(self.root).chain(self.parent.keys().copied()).collect();
        out.sort_unstable();
        out
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent.get(&v).copied()
    }

    pub fn children(&self, v: usize) -> &[usize] {
        self.children.get(&v).map_or(&[], Vec::as_slice)
    }

    pub fn leaves(&self) -> Vec<usize> {
        self.vertices().into_iter().filter(|&v| self.children(v).is_empty()).collect()
    }

    /// `v`, its parent, …, the root.
    pub fn path_to_root(&self, v: usize) -> Vec<usize> {
        let mut out = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            out.push(p);
            cur = p;
        }
        out
    }

    pub fn depth(&self, v: usize) -> usize {
        self.path_to_root(v).len() - 1
    }

    /// Largest number of tree neighbours of any vertex.
    pub fn max_degree(&self) -> usize {
        self.vertices()
            .into_iter()
            .map(|v| self.children(v).len() + usize::from(v != self.root))
            .max()
            .unwrap_or(0)
    }

    fn detect_fair(&mut self) {
        let depths: BTreeSet<usize> = self.leaves().into_iter().map(|l| self.depth(l)).collect();
        self.fair_depth = match depths.len() {
            1 => depths.first().copied(),
            _ => None,
        };
    }

    /// The subtree spanned by the root paths of `leaves`, re-rooted at the
    /// first vertex where those paths branch.
    pub fn restrict(&self, leaves: &[usize]) -> DirectedTree {
        let mut marked: BTreeSet<usize> = BTreeSet::new();
        for &l in leaves {
            for v in self.path_to_root(l) {
                if !marked.insert(v) {
                    break;
                }
            }
        }
        let kept = |v: usize| -> Vec<usize> {
            self.children(v).iter().copied().filter(|c| marked.contains(c)).collect()
        };
        let mut root = self.root;
        loop {
            let ch = kept(root);
            if ch.len() == 1 {
                root = ch[0];
            } else {
                break;
            }
        }
        let mut out = DirectedTree::single(root, self.direction);
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for c in kept(v) {
                out.attach(v, c);
                stack.push(c);
            }
        }
        out.detect_fair();
        out
    }

    /// Host edges, monotone parent-child steps, root degree, leaf set and
    /// fair depth.
    pub fn validate(&self, fd: &ForwardDigraph, expected_leaves: &[usize]) -> Result<(), String> {
        for (&c, &p) in &self.parent {
            if !fd.graph().has_edge(p, c) {
                return Err(format!("{p}–{c} is not an edge"));
            }
            let up = fd.position(p) < fd.position(c);
            if up != (self.direction == Direction::Forward) {
                return Err(format!("step {p} → {c} goes against the tree's direction"));
            }
            let mut cur = c;
            let mut steps = 0;
            while let Some(q) = self.parent(cur) {
                cur = q;
                steps += 1;
                if steps > self.parent.len() {
                    return Err("parent pointers contain a cycle".into());
                }
            }
            if cur != self.root {
                return Err(format!("{c} does not reach the root"));
            }
        }
        if self.size() > 1 && self.children(self.root).len() < 2 {
            return Err(format!("root {} has fewer than two children", self.root));
        }
        let got: BTreeSet<usize> = self.leaves().into_iter().collect();
        let want: BTreeSet<usize> = expected_leaves.iter().copied().collect();
        if got != want {
            return Err("leaf set differs from the antichain".into());
        }
        if let Some(q) = self.fair_depth {
            if let Some(l) = got.iter().find(|&&l| self.depth(l) != q) {
                return Err(format!("leaf {l} is not at depth {q}"));
            }
        }
        Ok(())
    }
}

/// A forward-directed tree `S` and a backward-directed tree `T`, both with
/// leaf set exactly `antichain`.
///
/// Leaves are added in the given order. If the current root lies below the
/// new leaf, the new leaf hangs off the highest-position tree vertex below it;
/// otherwise a new root is placed at the highest-position vertex below both
/// the old root and the new leaf. The backward tree mirrors this with
/// smallest positions.
pub fn two_trees(fd: &ForwardDigraph, antichain: &[usize]) -> Result<(DirectedTree, DirectedTree), CycleError> {
    if antichain.is_empty() {
        return Err(CycleError::TooFewLeaves(0));
    }
    if let Some((a, b)) = fd.antichain_violation(antichain) {
        return Err(CycleError::NotAnAntichain(a, b));
    }
    let s = grow_tree(fd, antichain, Direction::Forward)?;
    let t = grow_tree(fd, antichain, Direction::Backward)?;
    Ok((s, t))
}

fn grow_tree(fd: &ForwardDigraph, leaves: &[usize], dir: Direction) -> Result<DirectedTree, CycleError> {
    let forward = dir == Direction::Forward;
    // below(a, b): a lies on the root side of b
    let below = |a: usize, b: usize| if forward { fd.precedes_eq(a, b) } else { fd.precedes_eq(b, a) };
    let route = |from: usize, to: usize| -> Vec<usize> {
        if forward {
            fd.forward_path(from, to).expect("comparable")
        } else {
            let mut p = fd.forward_path(to, from).expect("comparable");
            p.reverse();
            p
        }
    };
    let mut tree = DirectedTree::single(leaves[0], dir);
    // tree vertices keyed by position, scanned from the far end
    let mut members: BTreeSet<usize> = BTreeSet::from([fd.position(leaves[0])]);
    let add_path = |tree: &mut DirectedTree, members: &mut BTreeSet<usize>, path: &[usize]| {
        for w in path.windows(2) {
            tree.attach(w[0], w[1]);
            members.insert(fd.position(w[1]));
        }
    };
    for &v in &leaves[1..] {
        let u = tree.root;
        if u != v && below(u, v) {
            let pick = |&i: &usize| below(fd.vertex_at(i), v);
            let w = if forward {
                members.iter().rev().find(|i| pick(i))
            } else {
                members.iter().find(|i| pick(i))
            };
            let w = fd.vertex_at(*w.expect("the root lies below v"));
            let path = route(w, v);
            if path[1..].iter().any(|&x| tree.contains(x)) {
                return Err(CycleError::Trees(format!("attaching {v}: path re-enters the tree")));
            }
            add_path(&mut tree, &mut members, &path);
        } else {
            let (pu, pv) = (fd.position(u), fd.position(v));
            let common = |i: usize| {
                let x = fd.vertex_at(i);
                below(x, u) && below(x, v)
            };
            let w = if forward {
                (0..pu.min(pv)).rev().find(|&i| common(i))
            } else {
                (pu.max(pv) + 1..fd.n()).find(|&i| common(i))
            };
            let w = fd.vertex_at(w.ok_or_else(|| {
                CycleError::Trees(format!("no common {} for {u} and {v}", if forward { "ancestor" } else { "descendant" }))
            })?);
            let to_root = route(w, u);
            let to_leaf = route(w, v);
            let clash = to_root[1..to_root.len() - 1].iter().any(|&x| tree.contains(x) || to_leaf.contains(&x))
                || to_leaf[1..].iter().any(|&x| tree.contains(x));
            if clash {
                return Err(CycleError::Trees(format!("new root {w}: paths overlap")));
            }
            add_path(&mut tree, &mut members, &to_root);
            add_path(&mut tree, &mut members, &to_leaf);
            members.insert(fd.position(w));
            tree.root = w;
        }
    }
    tree.detect_fair();
    Ok(tree)
}

/// Refinement to fair trees: if `n ≤ c³` a single leaf suffices; otherwise
/// see [`refine_to_fair`].
pub fn fair_refine(
    fd: &ForwardDigraph,
    s: &DirectedTree,
    t: &DirectedTree,
    c: usize,
) -> (Vec<usize>, DirectedTree, DirectedTree) {
    if (fd.n() as u128) <= (c as u128).pow(3) {
        let v = s.leaves()[0];
        return (vec![v], DirectedTree::single(v, Direction::Forward), DirectedTree::single(v, Direction::Backward));
    }
    refine_to_fair(s, t)
}

/// Keeps the most common leaf depth in `S` (smallest depth on ties), then
/// the most common depth in the restricted `T`; both results are fair.
pub fn refine_to_fair(s: &DirectedTree, t: &DirectedTree) -> (Vec<usize>, DirectedTree, DirectedTree) {
    let by_depth = |tree: &DirectedTree, leaves: &[usize]| -> Vec<usize> {
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &l in leaves {
            groups.entry(tree.depth(l)).or_default().push(l);
        }
        groups
            .into_iter()
            .max_by_key(|(d, g)| (g.len(), std::cmp::Reverse(*d)))
            .map(|(_, g)| g)
            .unwrap_or_default()
    };
    let l1 = by_depth(s, &s.leaves());
    let (s1, t1) = (s.restrict(&l1), t.restrict(&l1));
    let l0 = by_depth(&t1, &l1);
    let (mut s0, mut t0) = (s1.restrict(&l0), t1.restrict(&l0));
    if l0.len() == 1 {
        s0 = DirectedTree::single(l0[0], Direction::Forward);
        t0 = DirectedTree::single(l0[0], Direction::Backward);
    }
    (l0, s0, t0)
}

/// Whether a cycle is two internally disjoint forward paths between its
/// lowest and highest vertex.
pub fn is_good_cycle(fd: &ForwardDigraph, c: &CycleCertificate) -> bool {
    let k = c.vertices.len();
    if k < 3 {
        return false;
    }
    let pos: Vec<usize> = c.vertices.iter().map(|&v| fd.position(v)).collect();
    let lo = (0..k).min_by_key(|&i| pos[i]).unwrap();
    let hi = (0..k).max_by_key(|&i| pos[i]).unwrap();
    let increasing = |step: usize| {
        let mut i = lo;
        while i != hi {
            let j = (i + step) % k;
            if pos[j] <= pos[i] {
                return false;
            }
            i = j;
        }
        true
    };
    increasing(1) && increasing(k - 1)
}

/// Nested good cycles in `S ∪ T`.
///
/// At each level two leaves in different root branches of both trees give a
/// cycle through both roots of length `2d_S + 2d_T`; then both trees are
/// restricted to the leaves of the largest root branch of `S`, whose cycles
/// are all strictly shorter.
pub fn good_cycles(
    fd: &ForwardDigraph,
    s0: &DirectedTree,
    t0: &DirectedTree,
    delta: usize,
) -> Result<Vec<CycleCertificate>, CycleError> {
    let mut s = s0.clone();
    let mut t = t0.clone();
    let mut leaves = s.leaves();
    if leaves.len() < 2 || s.size() == 1 {
        return Err(CycleError::TooFewLeaves(leaves.len()));
    }
    let mut out = Vec::new();
    loop {
        let root_children = s.children(s.root).len();
        if root_children > delta {
            return Err(CycleError::DegreeExceeded {
                found: root_children,
                delta,
            });
        }
        let branch = |tree: &DirectedTree, l: usize| {
            let p = tree.path_to_root(l);
            p[p.len() - 2]
        };
        let sb: Vec<usize> = leaves.iter().map(|&l| branch(&s, l)).collect();
        let tb: Vec<usize> = leaves.iter().map(|&l| branch(&t, l)).collect();
        let pair = (0..leaves.len())
            .flat_map(|i| (i + 1..leaves.len()).map(move |j| (i, j)))
            .find(|&(i, j)| sb[i] != sb[j] && tb[i] != tb[j])
            .ok_or_else(|| CycleError::Trees("no leaf pair separates both roots".into()))?;
        let (l1, l2) = (leaves[pair.0], leaves[pair.1]);
        let s1 = s.path_to_root(l1);
        let s2 = s.path_to_root(l2);
        let t1 = t.path_to_root(l1);
        let t2 = t.path_to_root(l2);
        let mut cycle: Vec<usize> = s1.iter().rev().copied().collect();
        cycle.extend(&t1[1..]);
        cycle.extend(t2.iter().rev().skip(1));
        cycle.extend(&s2[1..s2.len() - 1]);
        let cert = CycleCertificate::new(cycle, Provenance::GoodCycle);
        cert.validate(fd.graph()).map_err(CycleError::InvalidCycle)?;
        let expected = 2 * (s1.len() - 1) + 2 * (t1.len() - 1);
        if cert.length != expected || !is_good_cycle(fd, &cert) {
            return Err(CycleError::InvalidCycle(format!("top cycle of length {} is not good", cert.length)));
        }
        out.push(cert);

        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &l) in leaves.iter().enumerate() {
            groups.entry(fd.position(sb[i])).or_default().push(l);
        }
        let next = groups
            .into_values()
            .rev()
            .max_by_key(|g| g.len())
            .unwrap_or_default();
        if next.len() < 2 {
            break;
        }
        s = s.restrict(&next);
        t = t.restrict(&next);
        leaves = next;
    }
    Ok(out)
}

/// A named pass/fail structural check recorded during a pipeline run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructuralCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl StructuralCheck {
    fn new(name: &str, pass: bool, detail: impl Into<String>) -> StructuralCheck {
        StructuralCheck {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        }
    }
}

/// Result of [`many_cycle_lengths`].
#[derive(Clone, Debug, Serialize)]
pub struct CycleRun {
    pub n: usize,
    pub k: usize,
    /// `⌈log n / (3 + log k) − 2⌉`, at least 0.
    pub bound: usize,
    pub cycles: CertifiedCycles,
    pub longest_forward_path: usize,
    pub vine_lengths: Vec<usize>,
    pub good_lengths: Vec<usize>,
    pub antichain_size: usize,
    pub fair_leaves: usize,
    pub checks: Vec<StructuralCheck>,
}

impl CycleRun {
    pub fn meets_bound(&self) -> bool {
        self.cycles.len() >= self.bound
    }

    pub fn checks_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// `⌈log n / (3 + log k) − 2⌉`, clamped at 0.
pub fn cycle_bound(n: usize, k: usize) -> usize {
    let lg = |x: f64| x.log2();
    required_count(lg(n as f64) / (3.0 + lg(k as f64)) - 2.0)
}

/// Cycle lengths of a degree k-critical graph, ordered by
/// [`critical_ordering`].
pub fn many_cycle_lengths(g: &Graph, k: usize) -> Result<CycleRun, CycleError> {
    let ord = critical_ordering(g, k)?;
    many_cycle_lengths_with(g, &ord, k)
}

/// Cycle lengths of a k-ordered graph: the vine branch and the antichain
/// branch both run, and their lengths are merged.
pub fn many_cycle_lengths_with(g: &Graph, ord: &VertexOrdering, k: usize) -> Result<CycleRun, CycleError> {
    let n = g.n();
    if n < k + 1 {
        return Err(CycleError::Precondition(format!("need n ≥ k + 1, got n = {n}")));
    }
    if let Some(why) = k_ordered_violation(g, ord, k) {
        return Err(CycleError::NotKOrdered(why));
    }
    let fd = ForwardDigraph::new(g, ord)?;
    let (vines, trees) = rayon::join(|| vine_branch(&fd), || antichain_branch(&fd, k));
    let (vine_cycles, mut checks) = vines?;
    let (good, antichain_size, fair_leaves, tree_checks) = trees?;
    checks.extend(tree_checks);
    let mut cycles = CertifiedCycles::new();
    let vine_lengths = vine_cycles.lengths();
    for c in vine_cycles.certificates() {
        cycles.insert(c.clone());
    }
    let good_lengths: Vec<usize> = good.iter().map(|c| c.length).collect();
    for c in good {
        cycles.insert(c);
    }
    let valid = cycles.validate(g);
    checks.push(StructuralCheck::new(
        "certificates",
        valid.is_ok(),
        valid.err().unwrap_or_else(|| format!("{} cycles", cycles.len())),
    ));
    Ok(CycleRun {
        n,
        k,
        bound: cycle_bound(n, k),
        cycles,
        longest_forward_path: fd.longest_path_len(),
        vine_lengths,
        good_lengths,
        antichain_size,
        fair_leaves,
        checks,
    })
}

fn vine_branch(fd: &ForwardDigraph) -> Result<(CertifiedCycles, Vec<StructuralCheck>), CycleError> {
    let (cycles, vines) = cycle_lengths_from_paths(fd)?;
    let mut checks = Vec::new();
    let mut bad = None;
    for v in &vines {
        let ok = v.validate(fd).is_ok()
            && vine_cycle(v).is_ok_and(|c| (v.t()..=2 * v.t() - 2).contains(&c.length));
        if !ok {
            bad = Some(v.t());
        }
    }
    checks.push(StructuralCheck::new(
        "vines",
        bad.is_none(),
        match bad {
            Some(t) => format!("vine on {t} vertices failed"),
            None => format!("{} vines", vines.len()),
        },
    ));
    let l = fd.longest_path_len();
    let need = if l >= 2 { l.ilog2() as usize } else { 0 };
    checks.push(StructuralCheck::new(
        "dyadic-lengths",
        cycles.len() >= need,
        format!("{} lengths, need {need}", cycles.len()),
    ));
    Ok((cycles, checks))
}

type AntichainOutcome = (Vec<CycleCertificate>, usize, usize, Vec<StructuralCheck>);

fn antichain_branch(fd: &ForwardDigraph, k: usize) -> Result<AntichainOutcome, CycleError> {
    let mut checks = Vec::new();
    let l = large_antichain(fd);
    let c = fd.longest_path_len() + 1;
    let incomparable = fd.antichain_violation(&l).is_none();
    checks.push(StructuralCheck::new(
        "antichain",
        incomparable && l.len() * c >= fd.n(),
        format!("{} vertices, c = {c}", l.len()),
    ));
    let (s, t) = two_trees(fd, &l)?;
    let trees_ok = s.validate(fd, &l).and_then(|_| t.validate(fd, &l));
    checks.push(StructuralCheck::new(
        "directed-trees",
        trees_ok.is_ok(),
        trees_ok.err().unwrap_or_default(),
    ));
    let (l0, s0, t0) = refine_to_fair(&s, &t);
    let fair_ok = s0
        .validate(fd, &l0)
        .and_then(|_| t0.validate(fd, &l0))
        .and_then(|_| {
            if l0.len() >= 2 && (s0.fair_depth.is_none() || t0.fair_depth.is_none()) {
                Err("refined trees are not fair".into())
            } else {
                Ok(())
            }
        });
    checks.push(StructuralCheck::new(
        "fair-trees",
        fair_ok.is_ok(),
        fair_ok.err().unwrap_or_else(|| format!("{} leaves", l0.len())),
    ));
    let mut good = Vec::new();
    if l0.len() >= 2 {
        good = good_cycles(fd, &s0, &t0, k)?;
        let need = required_count((l0.len() as f64).ln() / (k as f64).ln());
        let distinct: BTreeSet<usize> = good.iter().map(|c| c.length).collect();
        let all_good = good.iter().all(|c| is_good_cycle(fd, c));
        checks.push(StructuralCheck::new(
            "good-cycles",
            distinct.len() == good.len() && good.len() >= need && all_good,
            format!("{} cycles, need {need}", good.len()),
        ));
    }
    Ok((good, l.len(), l0.len(), checks))
}

/// Every cycle length of a graph on at most 16 vertices.
///
/// For each lowest vertex `s`, a subset DP records which vertices end a path
/// from `s` through exactly the vertices of the subset (all above `s`); a
/// subset closes into a cycle when some end is adjacent to `s`.
pub fn cycle_length_oracle(g: &Graph) -> Result<LengthSet, CycleError> {
    let n = g.n();
    if n > ORACLE_CAP {
        return Err(CycleError::OracleCap { n, cap: ORACLE_CAP });
    }
    let nbr: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let mut lengths = LengthSet::new();
    for s in 0..n {
        let above = (n - s - 1) as u32;
        let mut ends = vec![0u32; 1 << (above + 1)];
        let shift = |v: usize| 1u32 << (v - s);
        ends[1] = 1;
        for mask in 1..ends.len() as u32 {
            if mask & 1 == 0 || ends[mask as usize] == 0 {
                continue;
            }
            let cur = ends[mask as usize];
            let size = mask.count_ones() as usize;
            if size >= 3 && (cur << s) & nbr[s] != 0 {
                lengths.insert(size);
            }
            for e in 0..=above as usize {
                if cur >> e & 1 == 0 {
                    continue;
                }
                let reach = (nbr[e + s] >> s) & !mask;
                let mut r = reach;
                while r != 0 {
                    let w = r.trailing_zeros() as usize;
                    r &= r - 1;
                    ends[(mask | shift(w + s)) as usize] |= 1 << w;
                }
            }
        }
    }
    Ok(lengths)
}
