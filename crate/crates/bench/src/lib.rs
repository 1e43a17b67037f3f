//! Fixed inputs shared by the criterion benches.

use critlen::constructions::{build_tree, SequenceSpec};
use critlen::critical::apex_from_13_tree;
use critlen::{Graph, Tree};

/// The caterpillar `T_n((1))`.
pub fn caterpillar(n: usize) -> Tree {
    build_tree(&SequenceSpec::Constant(1), n).expect("n is even and at least 4").0
}

/// Apex graph on `n` vertices over a caterpillar.
pub fn apex_caterpillar(n: usize) -> Graph {
    apex_from_13_tree(&caterpillar(n - 2)).expect("caterpillars are 1–3 trees")
}
