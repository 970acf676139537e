//! Workbench for lower and upper bounds on the Shannon capacity of directed
//! k-uniform hypergraphs: combinatorial degeneration certificates found by
//! exact integer programming, acyclic sets, probabilistic constructions, and
//! the induced-matching / entropy barrier for upper bounds.

pub mod alpha;
pub mod budget;
pub mod group;
pub mod hypergraph;
pub mod matching;
pub mod ratlp;

pub use budget::{Budget, SolveOutcome, SolveStatus};
pub use group::{capset_hypergraph, corner_hypergraph, kcorner_hypergraph, GroupSpec};
pub use hypergraph::{Hypergraph, SupportSet};
