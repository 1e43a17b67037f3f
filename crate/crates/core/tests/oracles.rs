//! Library results against slow, independent reimplementations.

use std::collections::BTreeSet;

use critlen::critical::{apex_from_13_tree, check_critical, critical_ordering};
use critlen::cycles::{cycle_length_oracle, longest_forward_path, ForwardDigraph};
use critlen::generators;
use critlen::treelen::{enumerate_one_three_trees, leaf_lengths};
use critlen::{Graph, Tree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// All-pairs distances by Floyd–Warshall.
fn all_pairs(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.n();
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for v in 0..n {
        d[v][v] = 0;
        for &w in g.neighbors(v) {
            d[v][w] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

fn leaf_lengths_by_matrix(t: &Tree) -> BTreeSet<usize> {
    let d = all_pairs(t.graph());
    let leaves: Vec<usize> = (0..t.n()).filter(|&v| t.n() == 1 || t.degree(v) == 1).collect();
    leaves.iter().flat_map(|&a| leaves.iter().map(|&b| d[a][b]).collect::<Vec<_>>()).collect()
}

#[test]
fn leaf_lengths_match_all_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let n = rng.gen_range(1..60);
        let delta = rng.gen_range(2..6);
        let t = generators::random_tree(n, delta, &mut rng);
        let want = leaf_lengths_by_matrix(&t);
        assert_eq!(leaf_lengths(&t, None).to_vec(), want.into_iter().collect::<Vec<_>>());
    }
}

/// Centre-rooted nested-parenthesis encoding, minimised over centres.
fn ahu(t: &Tree) -> String {
    fn enc(t: &Tree, v: usize, p: usize) -> String {
        let mut kids: Vec<String> = t.neighbors(v).iter().filter(|&&w| w != p).map(|&w| enc(t, w, v)).collect();
        kids.sort();
        format!("({})", kids.concat())
    }
    // peel leaves down to the centre
    let n = t.n();
    let mut deg: Vec<usize> = (0..n).map(|v| t.degree(v)).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut left = n;
    while left > 2 {
        left -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in t.neighbors(v) {
                deg[w] -= 1;
                if deg[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer.iter().map(|&c| enc(t, c, usize::MAX)).min().unwrap()
}

/// Every labelled 1–3 tree whose internal vertices are `0..k`, via Prüfer
/// sequences in which each internal label occurs exactly twice.
fn prufer_classes(n: usize) -> BTreeSet<String> {
    let k = (n - 2) / 2;
    let mut out = BTreeSet::new();
    if n == 2 {
        out.insert(ahu(&Tree::from_edges(2, &[(0, 1)]).unwrap()));
        return out;
    }
    let mut seq = Vec::with_capacity(n - 2);
    let mut left = vec![2usize; k];
    fn rec(n: usize, seq: &mut Vec<usize>, left: &mut [usize], out: &mut BTreeSet<String>) {
        if seq.len() == n - 2 {
            out.insert(ahu(&decode(n, seq)));
            return;
        }
        for l in 0..left.len() {
            if left[l] > 0 {
                left[l] -= 1;
                seq.push(l);
                rec(n, seq, left, out);
                seq.pop();
                left[l] += 1;
            }
        }
    }
    rec(n, &mut seq, &mut left, &mut out);
    out
}

fn decode(n: usize, seq: &[usize]) -> Tree {
    let mut deg = vec![1usize; n];
    for &s in seq {
        deg[s] += 1;
    }
    let mut edges = Vec::new();
    for &s in seq {
        let leaf = (0..n).find(|&v| deg[v] == 1).unwrap();
        edges.push((leaf, s));
        deg[leaf] -= 1;
        deg[s] -= 1;
    }
    let ends: Vec<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
    edges.push((ends[0], ends[1]));
    Tree::from_edges(n, &edges).unwrap()
}

#[test]
fn enumeration_matches_prufer_oracle() {
    for n in (2..=12).step_by(2) {
        let want = prufer_classes(n);
        let got: BTreeSet<String> = enumerate_one_three_trees(n).unwrap().iter().map(ahu).collect();
        assert_eq!(got, want, "n = {n}");
        assert_eq!(enumerate_one_three_trees(n).unwrap().len(), want.len());
    }
}

#[test]
fn enumeration_counts_match_known_values() {
    // trivalent trees by number of degree-3 vertices
    let known = [(10, 2), (12, 2), (14, 4), (16, 6), (18, 11), (20, 18), (22, 37), (26, 135)];
    for (n, count) in known {
        let trees = enumerate_one_three_trees(n).unwrap();
        assert_eq!(trees.len(), count, "n = {n}");
        assert!(trees.iter().all(|t| t.n() == n && t.is_one_three()));
        let forms: BTreeSet<String> = trees.iter().map(ahu).collect();
        assert_eq!(forms.len(), count, "duplicates at n = {n}");
    }
}

/// Cycle lengths by depth-first search over simple paths from each lowest
/// vertex.
fn cycles_by_dfs(g: &Graph) -> BTreeSet<usize> {
    fn go(g: &Graph, s: usize, v: usize, seen: &mut Vec<bool>, depth: usize, out: &mut BTreeSet<usize>) {
        for &w in g.neighbors(v) {
            if w == s && depth >= 3 {
                out.insert(depth);
            }
            if w > s && !seen[w] {
                seen[w] = true;
                go(g, s, w, seen, depth + 1, out);
                seen[w] = false;
            }
        }
    }
    let mut out = BTreeSet::new();
    for s in 0..g.n() {
        let mut seen = vec![false; g.n()];
        seen[s] = true;
        go(g, s, s, &mut seen, 1, &mut out);
    }
    out
}

#[test]
fn cycle_oracle_matches_dfs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..300 {
        let n = rng.gen_range(1..=10);
        let p = rng.gen_range(0.1..0.7);
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|_| rng.gen_bool(p))
            .collect();
        let g = Graph::from_edges(n, &edges).unwrap();
        let got: BTreeSet<usize> = cycle_length_oracle(&g).unwrap().iter().collect();
        assert_eq!(got, cycles_by_dfs(&g), "{edges:?}");
    }
}

/// Longest forward path by exhaustive search over forward walks.
fn longest_forward_by_search(g: &Graph, pos: &[usize]) -> usize {
    fn go(g: &Graph, pos: &[usize], v: usize) -> usize {
        g.neighbors(v)
            .iter()
            .filter(|&&w| pos[w] > pos[v])
            .map(|&w| 1 + go(g, pos, w))
            .max()
            .unwrap_or(0)
    }
    (0..g.n()).map(|v| go(g, pos, v)).max().unwrap_or(0)
}

#[test]
fn longest_forward_path_matches_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in (2..=16).step_by(2) {
        for _ in 0..4 {
            let g = apex_from_13_tree(&generators::random_one_three_tree(n, &mut rng)).unwrap();
            let ord = critical_ordering(&g, 3).unwrap();
            let fd = ForwardDigraph::new(&g, &ord).unwrap();
            let pos: Vec<usize> = (0..g.n()).map(|v| ord.position(v)).collect();
            let p = longest_forward_path(&fd, None);
            assert!(fd.is_forward_path(p.vertices()));
            assert_eq!(p.len(), longest_forward_by_search(&g, &pos));
        }
    }
}

/// Degree-k-criticality straight from the definition.
fn critical_by_definition(g: &Graph, k: usize) -> bool {
    let n = g.n();
    if g.edge_count() as i64 != (k as i64 - 1) * n as i64 - (k * (k - 1) / 2) as i64 + 1 {
        return false;
    }
    for mask in 1u32..(1 << n) - 1 {
        let inside = |v: usize| mask >> v & 1 == 1;
        let min_deg = (0..n)
            .filter(|&v| inside(v))
            .map(|v| g.neighbors(v).iter().filter(|&&w| inside(w)).count())
            .min()
            .unwrap();
        if min_deg >= k {
            return false;
        }
    }
    true
}

#[test]
fn criticality_matches_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut positives = 0;
    for _ in 0..400 {
        let n = rng.gen_range(4..=8);
        let target = if rng.gen_bool(0.6) { 2 * n - 2 } else { rng.gen_range(0..=n * (n - 1) / 2) };
        let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        for i in 0..target.min(pairs.len()) {
            let j = rng.gen_range(i..pairs.len());
            pairs.swap(i, j);
        }
        pairs.truncate(target);
        let g = Graph::from_edges(n, &pairs).unwrap();
        let want = critical_by_definition(&g, 3);
        positives += usize::from(want);
        assert_eq!(check_critical(&g, 3).unwrap().verdict, want, "{pairs:?}");
    }
    assert!(positives > 0, "corpus never hit a critical graph");
}
