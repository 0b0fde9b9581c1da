//! Random `(d+1)`-uniform hypergraphs `G^{d+1}(n, p)` near their sparse
//! thresholds: exact sampling, butterfly (acyclic component) statistics,
//! asymptotic predictions, the Poisson butterfly process, first-order logic
//! and Ehrenfeucht–Fraïssé games.
//!
//! Numeric code is generic over [`num::Real`] (`f32` or `f64`); the aliases
//! below fix it to `f64`.

pub mod branching;
pub mod butterfly;
pub mod census;
pub mod efgame;
pub mod fo;
pub mod hypercore;
pub mod mclab;
pub mod num;
pub mod predict;
pub mod rng;
pub mod sampler;

pub use hypercore::{Hypergraph, Vertex};

/// Edge-probability family with `f64` parameters.
pub type Family = predict::EdgeProbabilityFamily<f64>;
/// Exact `(r, s)`-value law with `f64` probabilities.
pub type ValueDistribution = branching::ValueDistribution<f64>;
