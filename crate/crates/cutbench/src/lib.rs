//! Max-Cut benchmark instances that are hard for classical approximation.
//!
//! The crate builds the instance families on which the Goemans-Williamson
//! SDP-rounding algorithm and depth-1 QAOA provably underperform — subset
//! intersection graphs `J(m, m/2, b)` and a family of strongly regular
//! graphs — and evaluates both algorithms' instance-specific approximation
//! ratios, exactly where closed forms exist and numerically otherwise.
//!
//! Module layout:
//! - [`graph`]: weighted simple graphs, cut bookkeeping, edge-list/graph6 parsing
//! - [`families`]: instance generators and their closed-form quantities
//! - [`spectral`]: dense symmetric eigensolver and eigenspace embeddings
//! - [`gw`]: SDP embeddings, hyperplane rounding, low-rank solver, certificates
//! - [`qaoa`]: depth-1 analytics, grid search, statevector oracle
//! - [`maxcut`]: exact and heuristic Max-Cut with bound-meets-cut certification
//! - [`report`]: per-instance reports, reference tables, CSV/JSONL encoding
//! - [`rng`]: the deterministic random stream every stochastic routine draws from

pub mod error;
pub mod families;
pub mod graph;
pub mod gw;
pub mod io;
pub mod maxcut;
pub mod qaoa;
pub mod report;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{CutAssignment, Edge, Graph};
