//! Clustering with self-organizing neural networks.
//!
//! Four models share the same primitives in [`common`]:
//!
//! * [`som`]: fixed-topology Kohonen map on a rectangular or hexagonal lattice.
//! * [`gcs`]: Growing Cell Structures, a k-dimensional simplicial complex that
//!   grows and prunes according to signal counters.
//! * [`gng`]: Growing Neural Gas, an unconstrained graph built by competitive
//!   Hebbian learning.
//! * [`sota`]: the Self-Organising Tree Algorithm, a binary tree grown by
//!   splitting the leaf with the highest resource.
//!
//! [`metrics`] scores codebooks, [`synth`] generates reproducible test data and
//! [`cli`] holds the batch front end used by the `selforg` binary.

pub mod cli;
pub mod common;
pub mod error;
pub mod gcs;
pub mod gng;
pub mod metrics;
pub mod som;
pub mod sota;
pub mod synth;

pub use common::{Dataset, DecayKind, DecaySchedule, RandomStream, Vector};
pub use error::{Error, Result};
