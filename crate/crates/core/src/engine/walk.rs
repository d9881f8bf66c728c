//! Gray-code walks over {-1,1}^n on cleared denominators.
//!
//! Rational inputs are scaled once to integers; the walk then only needs
//! integer ring operations. Instances whose a-priori value bounds fit
//! comfortably in i128 take a machine-word path, everything else falls back
//! to arbitrary precision. Both paths run the same generic code.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::num::Rational;

/// Ring operations the walkers need. Implemented for i128 and BigInt.
pub trait WalkInt: Clone + Eq + Ord + std::hash::Hash + Send + Sync + Zero {
    fn from_bigint(v: &BigInt) -> Self;
    fn add_assign_ref(&mut self, other: &Self);
    fn sub_assign_ref(&mut self, other: &Self);
    fn double(&mut self);
    fn mul_ref(&self, other: &Self) -> Self;
    fn to_bigint(&self) -> BigInt;
}

impl WalkInt for i128 {
    fn from_bigint(v: &BigInt) -> Self {
        i128::try_from(v).expect("value bound certified before choosing the i128 path")
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn double(&mut self) {
        *self *= 2;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl WalkInt for BigInt {
    fn from_bigint(v: &BigInt) -> Self {
        v.clone()
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn double(&mut self) {
        *self *= 2;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// Common denominator clearing: returns (scaled integers, denominator D) with
/// value_i = scaled_i / D.
pub fn clear_denominators(values: &[&Rational]) -> (Vec<BigInt>, BigInt) {
    let mut denom = BigInt::one();
    for v in values {
        denom = num_integer::lcm(denom, v.denom().clone());
    }
    let scaled = values
        .iter()
        .map(|v| v.numer() * (&denom / v.denom()))
        .collect();
    (scaled, denom)
}

/// True when every scaled magnitude stays far inside i128 during a walk.
pub fn fits_i128(bound: &BigInt) -> bool {
    bound.magnitude().bits() <= 120
}

/// Visits all 2^n sign assignments of the low `n` bits starting from `start`,
/// calling `flip(j)` before each revisit. The caller observes the start state
/// first, then one callback per Gray step.
pub fn gray_walk(n: usize, mut flip: impl FnMut(usize)) {
    debug_assert!(n < 64);
    for step in 1u64..(1u64 << n) {
        flip(step.trailing_zeros() as usize);
    }
}

/// Splits {-1,1}^n into 2^p blocks by fixing the top p coordinates.
/// Returns, for each block, the start bits (top bits from the block id, low
/// bits all +1).
pub fn block_starts(n: usize, p: usize) -> Vec<u64> {
    debug_assert!(p <= n && n <= 63);
    let low_mask = if n - p == 0 { 0 } else { (1u64 << (n - p)) - 1 };
    (0..(1u64 << p))
        .map(|id| (id << (n - p)) | low_mask)
        .collect()
}
