//! Exact exhaustive (and seeded Monte-Carlo) computation of the event
//! probabilities the bounds speak about: point probabilities of Q(xi),
//! joint events with linear constraints, vector sums landing in a quadric,
//! Hamming-ball events, and general finite-support products.

pub mod general;
pub mod hamming;
pub mod histogram;
pub mod monte;
pub mod naive;
pub mod vector_event;
pub mod walk;

pub use general::{general_point_prob, DiscreteDist, ProductDist};
pub use hamming::{hamming_event_prob, hamming_event_prob_constrained};
pub use histogram::{histogram, linear_system_prob, sup_point_prob, AtomHistogram};
pub use monte::{monte_carlo, monte_carlo_rademacher, MonteCarloReport};
pub use vector_event::{vector_event_prob, QuadricSpec};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::num::Rational;

/// An exact probability count / total coming from counting sign vectors;
/// for pure Rademacher inputs the total is 2^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicProb {
    count: BigUint,
    total: BigUint,
}

impl DyadicProb {
    pub fn new(count: BigUint, total: BigUint) -> Self {
        assert!(!total.is_zero(), "probability needs a positive total");
        assert!(count <= total, "count must not exceed total");
        DyadicProb { count, total }
    }

    /// count / 2^n.
    pub fn dyadic(count: impl Into<BigUint>, n: usize) -> Self {
        Self::new(count.into(), BigUint::one() << n)
    }

    pub fn zero(n: usize) -> Self {
        Self::dyadic(0u32, n)
    }

    pub fn count(&self) -> &BigUint {
        &self.count
    }

    pub fn total(&self) -> &BigUint {
        &self.total
    }

    pub fn is_zero(&self) -> bool {
        self.count.is_zero()
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.count.clone().into(), self.total.clone().into())
    }
}

impl std::fmt::Display for DyadicProb {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}", self.count, self.total)
    }
}

/// Knobs for the exhaustive engines.
#[derive(Clone, Copy, Debug)]
pub struct EnumOptions {
    /// Refuse Rademacher enumerations beyond this many variables.
    pub cap: usize,
    /// Partition the walk over worker threads (identical results either way).
    pub parallel: bool,
    /// Number of high coordinates fixed per block in the parallel walk.
    pub block_bits: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            cap: 26,
            parallel: false,
            block_bits: 4,
        }
    }
}

impl EnumOptions {
    pub fn serial(cap: usize) -> Self {
        EnumOptions {
            cap,
            ..Default::default()
        }
    }

    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub(crate) fn blocks_for(&self, n: usize) -> usize {
        if self.parallel && n > self.block_bits + 1 {
            self.block_bits
        } else {
            0
        }
    }
}
