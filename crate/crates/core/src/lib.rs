//! Sharp extremal constants for functions vanishing at a point in weighted
//! Bergman spaces of the unit disk.
//!
//! The crate evaluates the closed-form constants ([`specfun`]), represents the
//! functions involved ([`funcspace`]), computes weighted Bergman norms by
//! quadrature ([`quadrature`]), and rediscovers the constants numerically
//! ([`extremal`]). The [`cli`] module backs the `bergman` binary.

pub mod cli;
pub mod error;
pub mod extremal;
pub mod funcspace;
pub mod quadrature;
pub mod specfun;

pub use error::{Error, Result};
