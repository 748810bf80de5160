//! Graphical representations of the Ising model on finite (multi)graphs.
//!
//! The crate covers the random-cluster model at `q = 2`, the loop O(1) model,
//! uniform even and odd subgraphs, traced single and double random currents,
//! Bernoulli percolation and the Ising model itself, on boxes, tori and
//! hexagonal lattices. Small hosts are handled exactly by brute-force
//! enumeration ([`oracle`]); large hosts by Swendsen–Wang Monte Carlo
//! ([`models`], [`estimators`]). The [`topology`] module detects clusters
//! that wrap around a torus.
//!
//! Edge configurations are bit-packed in edge-index order; every builder in
//! [`lattice`] fixes that order deterministically so that sampled
//! configurations are reproducible bit for bit.

pub mod bits;
pub mod dist;
pub mod error;
pub mod estimators;
pub mod evens;
pub mod lattice;
pub mod models;
pub mod oracle;
pub mod planar;
pub mod rng;
pub mod topology;
pub mod unionfind;

pub use bits::{EdgeConfig, SourceSet, SpinConfig};
pub use dist::Distribution;
pub use error::{Error, Result};
pub use lattice::{BoundaryCondition, Hyperplane, MultiGraph};
pub use models::ModelParams;
