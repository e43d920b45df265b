//! Approximation algorithms for activation edge-cover and its special cases.
//!
//! The crate is generic over the scalar type ([`Scalar`]); exact rationals
//! are the default for certification, floats for quick experiments.

pub mod bench;
pub mod bounds;
pub mod costs;
pub mod error;
pub mod general;
pub mod generators;
pub mod gmc;
pub mod instance;
pub mod io;
pub mod levels;
pub mod oracle;
pub mod reference;
pub mod report;
pub mod scalar;
pub mod uniform;
pub mod unit;

pub use costs::{derive_costs, DerivedCosts, Slope};
pub use error::{Error, Result};
pub use instance::{Assignment, Edge, Instance, NodeId};
pub use scalar::Scalar;

/// Exact arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

pub type RationalInstance = Instance<Rational>;
pub type FloatInstance = Instance<f64>;
pub type RationalAssignment = Assignment<Rational>;
