//! Small graph and tree families used by tests, the verification suites and
//! the CLI. Random generators take an explicit RNG so every corpus is
//! reproducible from a seed.

use rand::Rng;

use crate::graphs::{Graph, Tree};

pub fn path(n: usize) -> Tree {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Tree::from_edges(n, &edges).unwrap()
}

/// `K_{1,leaves}` with centre 0.
pub fn star(leaves: usize) -> Tree {
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    Tree::from_edges(leaves + 1, &edges).unwrap()
}

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

/// `legs` paths of `leg_len` edges joined at centre 0.
pub fn spider(legs: usize, leg_len: usize) -> Tree {
    let mut edges = Vec::new();
    let mut next = 1;
    for _ in 0..legs {
        let mut prev = 0;
        for _ in 0..leg_len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
    }
    Tree::from_edges(next, &edges).unwrap()
}

/// The star `K_{1,delta}` with one edge subdivided until the tree has `n`
/// vertices.
pub fn subdivided_star(delta: usize, n: usize) -> Tree {
    assert!(delta >= 2 && n > delta);
    let mut edges: Vec<_> = (1..delta).map(|i| (0, i)).collect();
    let mut prev = 0;
    for v in delta..n {
        edges.push((prev, v));
        prev = v;
    }
    Tree::from_edges(n, &edges).unwrap()
}

/// Every vertex has degree 1 or `delta` and every leaf is at distance exactly
/// `depth` from the root 0. It has `delta·(delta−1)^(depth−1)` leaves.
pub fn perfect_distance_tree(delta: usize, depth: usize) -> Tree {
    assert!(delta >= 2 && depth >= 1);
    let mut edges = Vec::new();
    let mut frontier = vec![0usize];
    let mut next = 1;
    for level in 0..depth {
        let fanout = if level == 0 { delta } else { delta - 1 };
        let mut new_frontier = Vec::with_capacity(frontier.len() * fanout);
        for &p in &frontier {
            for _ in 0..fanout {
                edges.push((p, next));
                new_frontier.push(next);
                next += 1;
            }
        }
        frontier = new_frontier;
    }
    Tree::from_edges(next, &edges).unwrap()
}

/// Perfect binary tree on `layers` layers, heap-indexed (children of `j` are
/// `2j+1`, `2j+2`).
pub fn perfect_binary_tree(layers: u32) -> Tree {
    assert!(layers >= 1);
    let n = (1usize << layers) - 1;
    let edges: Vec<_> = (1..n).map(|j| ((j - 1) / 2, j)).collect();
    Tree::from_edges(n, &edges).unwrap()
}

/// Random recursive tree in which no vertex exceeds degree `max_degree`.
pub fn random_tree<R: Rng>(n: usize, max_degree: usize, rng: &mut R) -> Tree {
    assert!(n >= 1 && max_degree >= 2);
    let mut deg = vec![0usize; n];
    let mut open: Vec<usize> = vec![0];
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for v in 1..n {
        let i = rng.gen_range(0..open.len());
        let p = open[i];
        edges.push((p, v));
        deg[p] += 1;
        deg[v] += 1;
        if deg[p] == max_degree {
            open.swap_remove(i);
        }
        open.push(v);
    }
    Tree::from_edges(n, &edges).unwrap()
}

/// Random 1–3 tree on `n` vertices (`n` even, at least 2), grown from a single
/// edge by repeatedly hanging two new leaves on a random leaf.
pub fn random_one_three_tree<R: Rng>(n: usize, rng: &mut R) -> Tree {
    assert!(n >= 2 && n % 2 == 0);
    let mut edges = vec![(0, 1)];
    let mut leaves = vec![0usize, 1];
    let mut next = 2;
    while next < n {
        let i = rng.gen_range(0..leaves.len());
        let p = leaves.swap_remove(i);
        edges.push((p, next));
        edges.push((p, next + 1));
        leaves.push(next);
        leaves.push(next + 1);
        next += 2;
    }
    Tree::from_edges(n, &edges).unwrap()
}

/// Random tree with no vertex of degree 2 built around a spine of
/// `spine_len` edges. Each internal spine vertex carries one hanging subtree:
/// a random binary tree with between 1 and `2·max_internal + 1` vertices
/// whose root is joined to the spine. Internal vertices have degree 3.
pub fn random_spined_one_three_tree<R: Rng>(
    spine_len: usize,
    max_internal: usize,
    rng: &mut R,
) -> Tree {
    assert!(spine_len >= 2);
    let mut edges: Vec<_> = (1..=spine_len).map(|i| (i - 1, i)).collect();
    let mut next = spine_len + 1;
    for s in 1..spine_len {
        let root = next;
        next += 1;
        edges.push((s, root));
        let internal = rng.gen_range(0..=max_internal);
        let mut leaves = vec![root];
        for _ in 0..internal {
            let i = rng.gen_range(0..leaves.len());
            let p = leaves.swap_remove(i);
            edges.push((p, next));
            edges.push((p, next + 1));
            leaves.push(next);
            leaves.push(next + 1);
            next += 2;
        }
    }
    Tree::from_edges(next, &edges).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn perfect_distance_sizes() {
        // 1–3 case: 3·2^d − 2 vertices
        for d in 1..6 {
            let t = perfect_distance_tree(3, d);
            assert_eq!(t.n(), 3 * (1 << d) - 2);
            assert!(t.is_one_three());
            assert_eq!(t.leaf_count(), 3 << (d - 1));
        }
        let t = perfect_distance_tree(4, 3);
        assert_eq!(t.leaf_count(), 4 * 9);
    }

    #[test]
    fn random_trees_respect_degree_caps() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let t = random_tree(50, 4, &mut rng);
            assert!(t.max_degree() <= 4);
            let t = random_one_three_tree(30, &mut rng);
            assert!(t.is_one_three());
            assert_eq!(t.n(), 30);
            let t = random_spined_one_three_tree(20, 5, &mut rng);
            assert!(t.is_one_three());
            assert!(t.diameter() >= 20);
        }
    }

    #[test]
    fn subdivided_star_shape() {
        let t = subdivided_star(4, 10);
        assert_eq!(t.max_degree(), 4);
        assert_eq!(t.leaf_count(), 4);
    }
}
