//! Whether and how a designer who sends each voter a private, conditionally
//! independent signal can make alternative A win a majority vote in both
//! states of the world.
//!
//! - [`model`]: posteriors, conditionals, bias, Bayesian updating, sincere
//!   voting and exact continuum vote shares.
//! - [`analysis`]: thresholds, the candidate-signal table, manipulability
//!   classification and bias-direction regimes.
//! - [`oracle`]: brute-force grid search over signals and the
//!   multi-realization decomposition that reduces any signal to a binary one.
//! - [`sim`]: finite-population Monte Carlo elections.
//! - [`extensions`]: continuous accuracy densities, targeted signals and
//!   public (shared-realization) persuasion.
//! - [`sweep`]: parameter sweeps over `(q_low, lambda)` written as CSV.

pub mod analysis;
mod error;
pub mod extensions;
pub mod model;
pub mod oracle;
pub mod sim;
pub mod sweep;

pub use error::{Error, Result};
