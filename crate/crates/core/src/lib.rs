//! Spectral extremal graph theory toolkit.
//!
//! Small dense graphs ([`Graph`], up to 128 vertices), named families, spectral radii and
//! bounds, forbidden-subgraph detection, isomorph-free enumeration and the scans that compare
//! every pattern-free graph with a given number of edges against a spectral bound.

pub mod cli;
pub mod enumeration;
pub mod error;
pub mod families;
pub mod graph;
pub mod patterns;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use families::FamilySpec;
pub use graph::{Graph, VertexSet, MAX_VERTICES};
pub use patterns::Pattern;
pub use spectral::BoundKind;
