//! Exact solvers and instance generators for Eulerian Strong Component Arc
//! Deletion (ESCAD): delete at most `k` arcs of a directed multigraph so that
//! every strongly connected component of the rest is balanced.

pub mod digraph;
pub mod format;
pub mod oracle;
pub mod treedec;
pub mod dp;
pub mod gadgets;
pub mod vi;

pub use digraph::{ArcMultiset, GraphError, MultiDigraph, SccPartition, Vertex};
