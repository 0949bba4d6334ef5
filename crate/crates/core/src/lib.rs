//! Synchrony and anti-synchrony subspaces of weighted coupled cell networks.
//!
//! Networks carry exact rational weights. A [`TaggedPartition`] describes a
//! generalized polydiagonal, the subspace where cells in one part share a
//! value, cells in the counterpart take its negative and cells in the zero
//! part vanish. The crate decides which of these subspaces are invariant
//! under the adjacency matrix and the Laplacian, which families of coupled
//! systems preserve them, builds their quotient networks and lattices, and
//! checks the predictions against numerical integration.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod invariance;
pub mod lattice;
pub mod matrix;
pub mod network;
pub mod partition;
pub mod quotient;
pub mod rational;

pub use error::{Error, Result};
pub use invariance::{classify, leaves_invariant, ClassificationFlags, SystemClass};
pub use matrix::Matrix;
pub use network::{laplacian, Network};
pub use partition::{canonicalize, parse_partition, TaggedPartition};
pub use rational::Rational;

/// Version tag embedded in every JSON document the crate writes.
pub const SCHEMA_VERSION: &str = "1.0";
