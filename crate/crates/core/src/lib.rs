//! Numerical estimators for symmetric sensitivity of measure-preserving maps.
//!
//! A map `T` preserving a probability measure `mu` is symmetrically sensitive
//! when there is a `delta > 0` such that `mu x mu`-almost every pair of
//! initial points is eventually pushed at least `delta` apart. This crate
//! provides:
//!
//! - [`systems`]: the r-adic maps, the tent and logistic maps and circle
//!   rotations, with their metrics and invariant-measure samplers;
//! - [`oracle`]: exact rational orbits and cylinder measures used as ground
//!   truth;
//! - [`divergence`]: trap probabilities, the largest sensitivity constant,
//!   recurrence counts and support-diameter estimates for pairs;
//! - [`entropy`]: interval partitions, symbolic coding, block entropy,
//!   internal boundary strips and the entropy-based sensitivity certificate.
//!
//! Every random quantity is a pure function of a 64-bit seed (see
//! [`stream`]), so results do not depend on the number of worker threads.

pub mod divergence;
pub mod entropy;
mod error;
pub mod oracle;
pub mod stats;
pub mod stream;
pub mod systems;

pub use error::{Error, Result};
pub use oracle::RationalState;
pub use systems::{Density, Metric, StatePoint, SystemId, SystemSpec};
