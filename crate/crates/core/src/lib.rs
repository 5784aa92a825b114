//! Continuous-time quantum walks on complex networks, single-link failure
//! sweeps, and node affinity.
//!
//! The walk evolves `|Ψ(t)> = exp(-iAt)|Ψ(0)>` on the adjacency matrix `A`
//! (or `exp(+iLt)` on the Laplacian `L = D - A`). Node populations are the
//! time averages of `|<j|Ψ(t)>|²`. Removing each edge in turn and recording
//! which way every node's population moves gives flow signs `θ_j(k) = ±1`,
//! and the mean product of two nodes' signs over all removals is their
//! affinity.
//!
//! ```
//! use ctqw::datasets::karate_club;
//! use ctqw::walk::{average_populations, WalkConfig};
//!
//! let kc = karate_club();
//! let p = average_populations(&kc.graph, &WalkConfig::default()).unwrap();
//! assert!((p.sum() - 1.0).abs() < 1e-9);
//! ```

pub mod cli;
pub mod datasets;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod matrix;
pub mod spectral;
pub mod walk;

pub use error::{Error, Result};
pub use graph::Graph;
pub use walk::{Generator, InitialState, PopulationVector, WalkConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
