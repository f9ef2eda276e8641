//! Maximization of non-negative symmetric submodular set functions.
//!
//! The crate bundles value oracles (graph cut, hypergraph cut, explicit
//! tables) with query counting, the common constraint families
//! (cardinality, matroid, packing, knapsack), greedy-style solvers that
//! interleave a `delete` cleanup step with every addition, brute-force
//! ground truth for small instances, and instance generators.
//!
//! ```
//! use symsub::{algorithms, generators, oracle::Oracle};
//!
//! let graph = generators::complete_graph(3);
//! let oracle = Oracle::new(graph.into());
//! let trace = algorithms::greedy_cardinality(&oracle, 1).unwrap();
//! assert_eq!(trace.final_value, 2.0);
//! ```

pub mod algorithms;
pub mod cli;
pub mod constraints;
pub mod error;
pub mod exact;
pub mod generators;
pub mod idset;
pub mod oracle;

pub use error::{Error, Result};
pub use idset::IdSet;

/// Absolute tolerance used by validators and property checks.
pub const TOLERANCE: f64 = 1e-9;
