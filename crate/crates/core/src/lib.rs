//! Discrete approximation schemes for reflected Brownian motion on bounded
//! Euclidean domains: nearest-neighbor random walks on dyadic lattices
//! (discrete and continuous time) and myopic conditioning of killed Brownian
//! motion, together with exact reference oracles and a statistics harness
//! that cross-validates the schemes against each other and against closed
//! forms.

pub mod accept;
pub mod config;
pub mod error;
pub mod geometry;
pub mod kernel;
pub mod lattice;
pub mod myopic;
pub mod oracle;
pub mod report;
pub mod rng;
pub mod stats;
pub mod trajectory;
pub mod walk;

pub use error::{Error, Result};
