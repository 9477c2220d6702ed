//! Exact discrete convex analysis on finite subsets of Zⁿ.
//!
//! All geometry is done in exact rational arithmetic. The main entry points
//! round a point of `conv(S₁ + … + S_m)` to a nearby point of the lattice sum
//! for integrally convex, M♮-convex and L♮-convex summands, with a certificate
//! of every intermediate step.

pub mod bounds;
pub mod discrete_sets;
pub mod error;
pub mod exact_geometry;
pub mod minkowski;
pub mod oracle;
pub mod shapley_folkman;

pub use discrete_sets::{LatticePoint, LatticeSet};
pub use error::{Error, ErrorKind, Result};
pub use exact_geometry::{ConvexCombination, Rational, RationalPoint};
pub use minkowski::{minkowski_sum, minkowski_sum_with_budget, WitnessedSum};
