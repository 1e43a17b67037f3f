//! Degree k-critical graphs: `(k−1)n − k(k−1)/2 + 1` edges and no proper
//! induced subgraph of minimum degree at least `k`.
//!
//! Every proper induced subgraph sits inside some `G − v`, and the largest
//! induced subgraph of `G − v` with minimum degree `≥ k` is its k-core, so
//! the subgraph condition reduces to `n` core computations.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::{Graph, GraphError, Tree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CriticalError {
    #[error("k must be at least 3, got {0}")]
    KTooSmall(usize),
    #[error("need n ≥ k + 1, got n = {n}, k = {k}")]
    TooFewVertices { n: usize, k: usize },
    #[error("input tree is not a 1-3 tree")]
    NotOneThree,
    #[error("no vertex qualifies at position {position} (threshold {threshold})")]
    NoQualifyingVertex { position: usize, threshold: usize },
    #[error("forward degree at position {position} is {found}, expected {expected}")]
    ProfileMismatch {
        position: usize,
        expected: usize,
        found: usize,
    },
    #[error("ordering is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Outcome of [`check_critical`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriticalityReport {
    pub k: usize,
    pub n: usize,
    pub edges: usize,
    pub expected_edges: i64,
    pub edge_count_ok: bool,
    /// Smallest `v` for which `G − v` has a non-empty k-core.
    pub violating_vertex: Option<usize>,
    pub verdict: bool,
}

/// `(k−1)n − k(k−1)/2 + 1`.
pub fn critical_edge_count(n: usize, k: usize) -> i64 {
    (k as i64 - 1) * n as i64 - (k * (k - 1) / 2) as i64 + 1
}

/// Membership mask of the k-core of `g` with `removed` deleted first.
pub fn k_core(g: &Graph, k: usize, removed: Option<usize>) -> Vec<bool> {
    let n = g.n();
    let mut alive = vec![true; n];
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut stack = Vec::new();
    let kill = |v: usize, alive: &mut Vec<bool>, stack: &mut Vec<usize>| {
        alive[v] = false;
        stack.push(v);
    };
    if let Some(r) = removed {
        kill(r, &mut alive, &mut stack);
    }
    for v in 0..n {
        if alive[v] && deg[v] < k {
            kill(v, &mut alive, &mut stack);
        }
    }
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if alive[w] {
                deg[w] -= 1;
                if deg[w] < k {
                    kill(w, &mut alive, &mut stack);
                }
            }
        }
    }
    alive
}

pub fn check_critical(g: &Graph, k: usize) -> Result<CriticalityReport, CriticalError> {
    if k < 3 {
        return Err(CriticalError::KTooSmall(k));
    }
    let n = g.n();
    let expected = critical_edge_count(n, k);
    let edge_count_ok = g.edge_count() as i64 == expected;
    let violating_vertex = (0..n)
        .into_par_iter()
        .find_first(|&v| k_core(g, k, Some(v)).iter().any(|&a| a));
    Ok(CriticalityReport {
        k,
        n,
        edges: g.edge_count(),
        expected_edges: expected,
        edge_count_ok,
        violating_vertex,
        verdict: edge_count_ok && violating_vertex.is_none(),
    })
}

/// The 1–3 tree plus two adjacent apex vertices `n` and `n+1`, each joined
/// to every leaf.
pub fn apex_from_13_tree(t: &Tree) -> Result<Graph, CriticalError> {
    if !t.is_one_three() || t.n() < 2 {
        return Err(CriticalError::NotOneThree);
    }
    let n = t.n();
    let mut edges: Vec<(usize, usize)> = t.graph().edges().collect();
    for leaf in t.leaves() {
        edges.push((leaf, n));
        edges.push((leaf, n + 1));
    }
    edges.push((n, n + 1));
    Ok(Graph::from_edges(n + 2, &edges)?)
}

/// A vertex ordering `x_1, …, x_n` with forward and backward degrees.
///
/// `order[i]` is the vertex at 0-based position `i`; `dplus[i]` and
/// `dminus[i]` are its neighbour counts after and before it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexOrdering {
    pub order: Vec<usize>,
    pub dplus: Vec<usize>,
    pub dminus: Vec<usize>,
    #[serde(skip)]
    position: Vec<usize>,
}

impl VertexOrdering {
    pub fn from_order(g: &Graph, order: Vec<usize>) -> Result<VertexOrdering, CriticalError> {
        let n = g.n();
        if order.len() != n {
            return Err(CriticalError::NotAPermutation(n));
        }
        let mut position = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return Err(CriticalError::NotAPermutation(n));
            }
            position[v] = i;
        }
        let dplus = order
            .iter()
            .map(|&v| g.neighbors(v).iter().filter(|&&w| position[w] > position[v]).count())
            .collect();
        let dminus = order
            .iter()
            .map(|&v| g.neighbors(v).iter().filter(|&&w| position[w] < position[v]).count())
            .collect();
        Ok(VertexOrdering {
            order,
            dplus,
            dminus,
            position,
        })
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// 0-based position of vertex `v`.
    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    pub fn vertex_at(&self, i: usize) -> usize {
        self.order[i]
    }

    pub fn reversed(&self, g: &Graph) -> VertexOrdering {
        let mut order = self.order.clone();
        order.reverse();
        VertexOrdering::from_order(g, order).expect("a permutation reversed is a permutation")
    }

    /// After deserializing, positions must be rebuilt against the host graph.
    pub fn rebind(self, g: &Graph) -> Result<VertexOrdering, CriticalError> {
        VertexOrdering::from_order(g, self.order)
    }
}

/// `d^+` profile of the peeling ordering: `k`, then `k−1` through position
/// `n−k+1`, then `n−i` (1-based positions).
pub fn expected_profile(n: usize, k: usize) -> Vec<usize> {
    (1..=n)
        .map(|i| {
            if i == 1 {
                k
            } else if i <= n + 1 - k {
                k - 1
            } else {
                n - i
            }
        })
        .collect()
}

/// Greedy peeling order of a degree k-critical graph.
///
/// `x_1` is the smallest vertex of degree at most `k`; each later `x_{ℓ+1}`
/// is the smallest vertex with at most `k−1` neighbours not yet placed. After
/// `n−k+1` steps the remaining `k−1` vertices follow in ascending order. The
/// resulting forward degrees are checked against the exact profile.
pub fn critical_ordering(g: &Graph, k: usize) -> Result<VertexOrdering, CriticalError> {
    if k < 3 {
        return Err(CriticalError::KTooSmall(k));
    }
    let n = g.n();
    if n < k + 1 {
        return Err(CriticalError::TooFewVertices { n, k });
    }
    let mut rest: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut ready: BTreeSet<usize> = (0..n).filter(|&v| rest[v] <= k).collect();
    let mut threshold = k;
    for position in 1..=n + 1 - k {
        let v = ready
            .iter()
            .copied()
            .find(|&v| rest[v] <= threshold)
            .ok_or(CriticalError::NoQualifyingVertex { position, threshold })?;
        if position == 1 {
            threshold = k - 1;
            ready = (0..n).filter(|&w| w != v && rest[w] <= k - 1).collect();
        }
        ready.remove(&v);
        placed[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !placed[w] {
                rest[w] -= 1;
                if rest[w] <= threshold {
                    ready.insert(w);
                }
            }
        }
    }
    order.extend((0..n).filter(|&v| !placed[v]));
    let ord = VertexOrdering::from_order(g, order)?;
    for (i, (&found, &expected)) in ord.dplus.iter().zip(&expected_profile(n, k)).enumerate() {
        if found != expected {
            return Err(CriticalError::ProfileMismatch {
                position: i + 1,
                expected,
                found,
            });
        }
    }
    Ok(ord)
}

/// First failing clause of the k-ordered definition, if any (1-based
/// positions in the message).
pub fn k_ordered_violation(g: &Graph, ord: &VertexOrdering, k: usize) -> Option<String> {
    let n = ord.n();
    if n != g.n() {
        return Some("ordering size differs from the graph".into());
    }
    if n < 2 || !g.has_edge(ord.vertex_at(n - 2), ord.vertex_at(n - 1)) {
        return Some("x_{n-1} x_n is not an edge".into());
    }
    for i in 0..n - 2 {
        if !(2..=k).contains(&ord.dplus[i]) {
            return Some(format!("d+(x_{}) = {} outside [2, {k}]", i + 1, ord.dplus[i]));
        }
    }
    for i in 1..n {
        if ord.dminus[i] == 0 {
            return Some(format!("d-(x_{}) = 0", i + 1));
        }
    }
    None
}

pub fn is_k_ordered(g: &Graph, ord: &VertexOrdering, k: usize) -> bool {
    k_ordered_violation(g, ord, k).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn k4_is_three_critical() {
        let k4 = generators::complete(4);
        let r = check_critical(&k4, 3).unwrap();
        assert!(r.verdict && r.edge_count_ok && r.violating_vertex.is_none());
        let ord = critical_ordering(&k4, 3).unwrap();
        assert_eq!(ord.dplus, vec![3, 2, 1, 0]);
        assert!(is_k_ordered(&k4, &ord, 3));
    }

    #[test]
    fn pendant_breaks_edge_count() {
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)]).unwrap();
        let r = check_critical(&g, 3).unwrap();
        assert!(!r.edge_count_ok && !r.verdict);
        assert_eq!(r.expected_edges, 8);
    }

    #[test]
    fn k5_is_not_three_critical() {
        let r = check_critical(&generators::complete(5), 3).unwrap();
        assert_eq!(r.violating_vertex, Some(0));
        assert!(!r.verdict);
    }

    #[test]
    fn small_k_rejected() {
        assert_eq!(
            check_critical(&generators::complete(3), 2).unwrap_err(),
            CriticalError::KTooSmall(2)
        );
    }

    #[test]
    fn apex_examples() {
        let g = apex_from_13_tree(&generators::path(2)).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert!(check_critical(&g, 3).unwrap().verdict);
        let g = apex_from_13_tree(&generators::star(3)).unwrap();
        assert_eq!((g.n(), g.edge_count()), (6, 10));
        assert!(check_critical(&g, 3).unwrap().verdict);
        assert_eq!(
            apex_from_13_tree(&generators::path(4)).unwrap_err(),
            CriticalError::NotOneThree
        );
    }

    #[test]
    fn ordering_profile_on_apex_graphs() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for n in (2..=40).step_by(2) {
            let t = generators::random_one_three_tree(n, &mut rng);
            let g = apex_from_13_tree(&t).unwrap();
            let ord = critical_ordering(&g, 3).unwrap();
            assert_eq!(ord.dplus, expected_profile(g.n(), 3));
            assert_eq!(ord.dplus.iter().sum::<usize>() as i64, critical_edge_count(g.n(), 3));
            assert!(is_k_ordered(&g, &ord, 3));
            for v in 0..g.n() {
                let i = ord.position(v);
                assert_eq!(ord.dplus[i] + ord.dminus[i], g.degree(v));
            }
        }
    }

    #[test]
    fn path_is_never_k_ordered() {
        let p = generators::path(5);
        let ord = VertexOrdering::from_order(p.graph(), vec![0, 1, 2, 3, 4]).unwrap();
        assert!(!is_k_ordered(p.graph(), &ord, 3));
    }

    #[test]
    fn non_critical_ordering_fails_cleanly() {
        let err = critical_ordering(&generators::complete(6), 3).unwrap_err();
        assert!(matches!(err, CriticalError::NoQualifyingVertex { position: 1, .. }));
    }
}
