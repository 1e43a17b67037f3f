//! Simple undirected graphs, trees and paths.
//!
//! Vertices are `0..n`. Adjacency lists are kept sorted so that every
//! iteration order (and therefore every certificate) is deterministic.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("malformed graph JSON at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("edge {{{u}, {v}}} names a vertex outside 0..{n}")]
    EdgeOutOfRange { u: usize, v: usize, n: usize },
    #[error("vertex {v} is outside 0..{n}")]
    InvalidVertex { v: usize, n: usize },
    #[error("adjacency is not symmetric: {u} lists {v} but not conversely")]
    Asymmetric { u: usize, v: usize },
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("not a path in the host graph: {0}")]
    NotAPath(String),
}

/// A simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Graph {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list, rejecting loops, repeated edges and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::EdgeOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Graph { adj })
    }

    /// Builds a graph from per-vertex neighbour lists, checking symmetry.
    pub fn from_adjacency(mut adj: Vec<Vec<usize>>) -> Result<Graph, GraphError> {
        let n = adj.len();
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            for &v in list.iter() {
                if v >= n {
                    return Err(GraphError::EdgeOutOfRange { u, v, n });
                }
                if v == u {
                    return Err(GraphError::SelfLoop(u));
                }
            }
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(GraphError::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        for u in 0..n {
            for &v in &adj[u] {
                if adj[v].binary_search(&u).is_err() {
                    return Err(GraphError::Asymmetric { u, v });
                }
            }
        }
        Ok(Graph { adj })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::InvalidVertex { v, n: self.n() })
        }
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || bfs_distances(self, 0).iter().all(Option::is_some)
    }

    /// The graph induced on the vertices with `keep[v]`, relabelled in
    /// increasing order. Returns the subgraph and the new-to-old vertex map.
    pub fn induced(&self, keep: &[bool]) -> (Graph, Vec<usize>) {
        let map: Vec<usize> = (0..self.n()).filter(|&v| keep[v]).collect();
        let mut inverse = vec![usize::MAX; self.n()];
        for (i, &v) in map.iter().enumerate() {
            inverse[v] = i;
        }
        let adj = map
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter(|&&w| keep[w])
                    .map(|&w| inverse[w])
                    .collect()
            })
            .collect();
        (Graph { adj }, map)
    }

    /// Undirected DOT rendering with bare integer vertex names.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph {\n");
        for v in 0..self.n() {
            if self.adj[v].is_empty() {
                let _ = writeln!(out, "  {v};");
            }
        }
        for (u, v) in self.edges() {
            let _ = writeln!(out, "  {u} -- {v};");
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphFile {
            n: self.n(),
            edges: self.edges().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Graph, D::Error> {
        let file = GraphFile::deserialize(d)?;
        Graph::from_edges(file.n, &file.edges).map_err(serde::de::Error::custom)
    }
}

/// Parses the `{"n": .., "edges": [[u, v], ..]}` format.
pub fn parse_graph(bytes: &[u8]) -> Result<Graph, GraphError> {
    let file: GraphFile = serde_json::from_slice(bytes).map_err(|e| GraphError::Parse {
        offset: byte_offset(bytes, e.line(), e.column()),
        message: e.to_string(),
    })?;
    Graph::from_edges(file.n, &file.edges)
}

/// Serializes with each edge written as `[u, v]`, `u < v`.
pub fn serialize_graph(g: &Graph) -> Vec<u8> {
    serde_json::to_vec(g).expect("graph serialization is infallible")
}

fn byte_offset(bytes: &[u8], line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let mut offset = 0;
    for (i, l) in bytes.split(|&b| b == b'\n').enumerate() {
        if i + 1 == line {
            return (offset + column.saturating_sub(1)).min(bytes.len());
        }
        offset += l.len() + 1;
    }
    bytes.len()
}

/// Breadth-first distances from `source`; `None` for unreachable vertices.
pub fn bfs_distances(g: &Graph, source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.n()];
    let mut queue = VecDeque::new();
    dist[source] = Some(0);
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &w in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Shortest-path edge count between `u` and `v`, or `None` when they lie in
/// different components.
pub fn distance(g: &Graph, u: usize, v: usize) -> Result<Option<usize>, GraphError> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if u == v {
        return Ok(Some(0));
    }
    Ok(bfs_distances(g, u)[v])
}

/// A connected acyclic graph.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tree {
    graph: Graph,
}

impl Tree {
    pub fn new(graph: Graph) -> Result<Tree, GraphError> {
        let n = graph.n();
        if n == 0 {
            return Err(GraphError::NotATree("empty graph".into()));
        }
        if graph.edge_count() != n - 1 {
            return Err(GraphError::NotATree(format!(
                "{} edges on {} vertices",
                graph.edge_count(),
                n
            )));
        }
        if !graph.is_connected() {
            return Err(GraphError::NotATree("disconnected".into()));
        }
        Ok(Tree { graph })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Tree, GraphError> {
        Tree::new(Graph::from_edges(n, edges)?)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.graph.degree(v)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        self.graph.neighbors(v)
    }

    pub fn max_degree(&self) -> usize {
        self.graph.max_degree()
    }

    /// Degree-1 vertices; the single vertex of a one-vertex tree also counts
    /// as a leaf.
    pub fn is_leaf(&self, v: usize) -> bool {
        self.graph.degree(v) == 1 || self.n() == 1
    }

    pub fn leaves(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.is_leaf(v)).collect()
    }

    pub fn leaf_count(&self) -> usize {
        (0..self.n()).filter(|&v| self.is_leaf(v)).count()
    }

    /// Every degree is 1 or 3.
    pub fn is_one_three(&self) -> bool {
        self.n() >= 2 && (0..self.n()).all(|v| matches!(self.degree(v), 1 | 3))
    }

    /// Distances from `source` to every vertex.
    pub fn distances_from(&self, source: usize) -> Vec<usize> {
        bfs_distances(&self.graph, source)
            .into_iter()
            .map(|d| d.expect("trees are connected"))
            .collect()
    }

    /// Parent pointers of a BFS from `root`; the root points at itself.
    pub fn parents_from(&self, root: usize) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.n()];
        let mut queue = VecDeque::from([root]);
        parent[root] = root;
        while let Some(u) = queue.pop_front() {
            for &w in self.graph.neighbors(u) {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    /// A longest path, found by two breadth-first sweeps. The first sweep
    /// starts at vertex 0; ties pick the smallest vertex index.
    pub fn longest_path(&self) -> Path {
        let far = |src: usize| {
            let d = self.distances_from(src);
            let best = *d.iter().max().unwrap();
            (d.iter().position(|&x| x == best).unwrap(), best)
        };
        let (a, _) = far(0);
        let (b, _) = far(a);
        let (lo, hi) = (a.min(b), a.max(b));
        tree_path(self, lo, hi).expect("endpoints are valid")
    }

    pub fn diameter(&self) -> usize {
        let d = self.distances_from(0);
        let a = (0..self.n()).max_by_key(|&v| (d[v], std::cmp::Reverse(v))).unwrap();
        *self.distances_from(a).iter().max().unwrap()
    }

    /// The subtree induced on `keep`, relabelled, with the new-to-old map.
    /// Fails when the kept vertices do not form a connected subtree.
    pub fn induced(&self, keep: &[bool]) -> Result<(Tree, Vec<usize>), GraphError> {
        let (g, map) = self.graph.induced(keep);
        Ok((Tree::new(g)?, map))
    }

    /// Membership mask of the smallest subtree containing all of `targets`.
    pub fn spanning_subtree(&self, targets: &[usize]) -> Vec<bool> {
        let n = self.n();
        let mut keep = vec![true; n];
        let mut is_target = vec![false; n];
        for &t in targets {
            is_target[t] = true;
        }
        let mut deg: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1 && !is_target[v]).collect();
        let mut remaining = n;
        while let Some(v) = stack.pop() {
            if !keep[v] || remaining == 1 {
                continue;
            }
            keep[v] = false;
            remaining -= 1;
            for &w in self.neighbors(v) {
                if keep[w] {
                    deg[w] -= 1;
                    if deg[w] <= 1 && !is_target[w] {
                        stack.push(w);
                    }
                }
            }
        }
        keep
    }
}

/// A tree with a distinguished root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedTree {
    tree: Tree,
    root: usize,
    depth: Vec<usize>,
    parent: Vec<usize>,
}

impl RootedTree {
    pub fn new(tree: Tree, root: usize) -> Result<RootedTree, GraphError> {
        tree.graph().check_vertex(root)?;
        let depth = tree.distances_from(root);
        let parent = tree.parents_from(root);
        Ok(RootedTree {
            tree,
            root,
            depth,
            parent,
        })
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Distance from the root.
    pub fn layer(&self, v: usize) -> usize {
        self.depth[v]
    }

    /// Parent of `v`; `None` for the root.
    pub fn parent(&self, v: usize) -> Option<usize> {
        (v != self.root).then(|| self.parent[v])
    }

    pub fn children(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.tree
            .neighbors(v)
            .iter()
            .copied()
            .filter(move |&w| self.depth[w] == self.depth[v] + 1)
    }

    /// `layers()[i]` holds the vertices at distance `i`, ascending.
    pub fn layers(&self) -> Vec<Vec<usize>> {
        let height = self.depth.iter().copied().max().unwrap_or(0);
        let mut layers = vec![Vec::new(); height + 1];
        for v in 0..self.tree.n() {
            layers[self.depth[v]].push(v);
        }
        layers
    }

    /// Root-to-`v` vertex sequence.
    pub fn root_path(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while cur != self.root {
            cur = self.parent[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }
}

/// A sequence of distinct vertices; consecutive ones are adjacent in the
/// host graph. A single vertex is a path of length 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Path {
    vertices: Vec<usize>,
}

impl Path {
    /// Checks distinctness and adjacency against `g`.
    pub fn new(g: &Graph, vertices: Vec<usize>) -> Result<Path, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::NotAPath("no vertices".into()));
        }
        let mut seen = vec![false; g.n()];
        for &v in &vertices {
            g.check_vertex(v)?;
            if std::mem::replace(&mut seen[v], true) {
                return Err(GraphError::NotAPath(format!("vertex {v} repeats")));
            }
        }
        if let Some(w) = vertices.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
            return Err(GraphError::NotAPath(format!("{} and {} are not adjacent", w[0], w[1])));
        }
        Ok(Path { vertices })
    }

    pub(crate) fn new_unchecked(vertices: Vec<usize>) -> Path {
        debug_assert!(!vertices.is_empty());
        Path { vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<usize> {
        self.vertices
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() == 1
    }

    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    pub fn last(&self) -> usize {
        *self.vertices.last().unwrap()
    }
}

/// The unique `u`–`v` path in `t`.
pub fn tree_path(t: &Tree, u: usize, v: usize) -> Result<Path, GraphError> {
    t.graph().check_vertex(u)?;
    t.graph().check_vertex(v)?;
    let parent = t.parents_from(v);
    let mut vertices = vec![u];
    let mut cur = u;
    while cur != v {
        cur = parent[cur];
        vertices.push(cur);
    }
    Ok(Path::new_unchecked(vertices))
}
