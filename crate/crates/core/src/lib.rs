//! Exact anticoncentration laboratory for quadratic polynomials of
//! independent sign (and general finite-support) random variables.
//!
//! Everything is computed over the rationals: event probabilities are exact
//! dyadic counts, rank certificates are exact, and closed-form bounds are
//! evaluated in rigorous base-2 log space so they can be compared against
//! exact probabilities without ever trusting floating point.

// index-heavy numeric code: loop indices double as bit positions throughout
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod bounds;
pub mod engine;
pub mod error;
pub mod experiments;
pub mod jsonio;
pub mod num;
pub mod rank;
pub mod structure;

pub use error::{Error, Result};
pub use num::Rational;
