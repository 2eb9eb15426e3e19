//! Seating assignment by capacity-constrained signed spectral clustering.
//!
//! Guests and their pairwise relationships form a signed graph. The
//! smallest eigenvectors of its normalized signed Laplacian give a relaxed
//! clustering, which is discretized by alternating minimization and then
//! made to fit the table sizes with a deferred-acceptance matching.

pub mod affinity;
pub mod capacity;
pub mod cli;
pub mod discretize;
pub mod error;
pub mod graph;
pub mod pipeline;
pub mod service;
pub mod spectral;
pub mod synthetic;

pub use error::{Error, Result};
pub use graph::SignedGraph;
pub use pipeline::{solve_constrained, Person, SeatingPlan, SolveConfig};
