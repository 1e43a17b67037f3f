//! Leaf-to-leaf path lengths in trees and cycle lengths in degree-critical
//! graphs.
//!
//! Every procedure here is constructive and returns something that can be
//! checked independently: a leaf pair realizing a length, an explicit cycle,
//! a vertex ordering with its forward-degree profile. The modules are layered
//! bottom-up:
//!
//! * [`graphs`]: simple undirected graphs, trees, paths, JSON/DOT IO.
//! * [`treelen`]: leaf-to-leaf length analysis and the witness finders.
//! * [`constructions`]: trees with few short leaf-to-leaf lengths, sumset tools.
//! * [`critical`]: degree k-critical graphs and their peeling orderings.
//! * [`cycles`]: forward paths, vines, directed trees and good cycles.
//! * [`verify`]: the check suites behind `critlen verify`.

pub mod bitset;
pub mod constructions;
pub mod critical;
pub mod cycles;
pub mod generators;
pub mod graphs;
pub mod treelen;
pub mod verify;

mod util;

pub use constructions::{ConstructionTrace, SequenceSpec, SumsetPair};
pub use critical::{CriticalityReport, VertexOrdering};
pub use cycles::{CycleCertificate, DirectedTree, ForwardDigraph, Provenance, Vine};
pub use graphs::{Graph, GraphError, Path, RootedTree, Tree};
pub use treelen::{LengthSet, SequenceWitness, WitnessReport};
