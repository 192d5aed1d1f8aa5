//! Exact solver for the st-planar edge completion problem: given a
//! biconnected planar digraph and a budget `k`, decide whether at most `k`
//! oriented edges can be added so that the result is acyclic, has a unique
//! source `s` and a unique sink `t`, and admits a planar embedding with `s`
//! and `t` on the outer face, and produce such an edge set when one exists.

#![forbid(unsafe_code)]

pub mod cli;
pub mod digraph;
pub mod dp;
pub mod generate;
pub mod oracle;
pub mod planarity;
pub mod saturation;
pub mod spqr;
pub mod upward;

pub use digraph::{classify_switches, precheck, Digraph, GraphError, Precheck, RejectReason};
pub use dp::{solve, Solution, SolveOptions, Trace};
pub use planarity::{is_st_planar, test_planarity, PlanarEmbedding};
