//! Compressive sensing over graphs with path-constrained measurements.
//!
//! Each measurement sums an unknown per-link quantity along a random walk on
//! a network graph. The crate builds such measurement matrices, certifies
//! exact sparse-recovery conditions on small instances by enumeration,
//! decodes sparse link vectors by l1 minimization over a built-in simplex
//! solver, and runs seeded Monte-Carlo recovery experiments.

pub mod bench;
pub mod certify;
pub mod cli;
pub mod decode;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod seed;
pub mod sensing;
pub mod walk;

pub use error::{Error, Result};
pub use graph::{Graph, GraphProfile};
pub use sensing::{MeasurementMatrix, Provenance};
pub use walk::{StartMode, Walk, WalkConfig};
