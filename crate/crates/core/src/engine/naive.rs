//! Reference engine: re-evaluates Q from scratch at every point of the cube,
//! with no incremental state whatsoever. Deliberately independent of the
//! Gray-code walker so the two can be checked against each other.
//!
//! Points are evaluated over a locally cleared common denominator (i64
//! monomial sums in i128 accumulators when the a-priori bound allows,
//! otherwise plain rational evaluation), so the oracle stays exact without
//! sharing the walker's scaling machinery.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::algebra::{LinearConstraint, QuadPoly, SignVector};
use crate::engine::histogram::AtomHistogram;
use crate::error::{Error, Result};
use crate::num::Rational;

/// Monomial list with denominators cleared, for direct per-point summation.
pub(crate) struct Monomials {
    /// (i, j, coefficient of x_i x_j), i < j.
    cross: Vec<(usize, usize, i128)>,
    /// (i, coefficient of x_i).
    linear: Vec<(usize, i128)>,
    /// constant + sum of diagonal entries (squares are 1 on the cube).
    base: i128,
    pub(crate) denom: BigInt,
}

pub(crate) fn clear_locally(q: &QuadPoly) -> Option<Monomials> {
    let n = q.n();
    let mut denom = BigInt::one();
    let mut consider = |r: &Rational| {
        denom = num_integer::lcm(denom.clone(), r.denom().clone());
    };
    for i in 0..n {
        for j in i..n {
            consider(&q.monomial_coeff(i, j));
        }
    }
    for b in q.linear() {
        consider(b);
    }
    consider(q.constant_term());

    let to_int = |r: &Rational| -> Option<i128> {
        i128::try_from(&(r.numer() * (&denom / r.denom()))).ok()
    };
    let mut cross = Vec::new();
    let mut base = to_int(q.constant_term())?;
    let mut magnitude: u128 = base.unsigned_abs();
    for i in 0..n {
        for j in i..n {
            let c = q.monomial_coeff(i, j);
            if c.is_zero() {
                continue;
            }
            let v = to_int(&c)?;
            magnitude = magnitude.checked_add(v.unsigned_abs())?;
            if i == j {
                base = base.checked_add(v)?;
            } else {
                cross.push((i, j, v));
            }
        }
    }
    let mut linear = Vec::new();
    for (i, b) in q.linear().iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        let v = to_int(b)?;
        magnitude = magnitude.checked_add(v.unsigned_abs())?;
        linear.push((i, v));
    }
    // all partial sums stay within +- magnitude
    if magnitude > (i128::MAX / 4) as u128 {
        return None;
    }
    Some(Monomials {
        cross,
        linear,
        base,
        denom,
    })
}

impl Monomials {
    pub(crate) fn value_at(&self, bits: u64) -> i128 {
        let mut acc = self.base;
        for &(i, j, c) in &self.cross {
            let agree = (bits >> i ^ bits >> j) & 1 == 0;
            if agree {
                acc += c;
            } else {
                acc -= c;
            }
        }
        for &(i, c) in &self.linear {
            if bits >> i & 1 == 1 {
                acc += c;
            } else {
                acc -= c;
            }
        }
        acc
    }
}

pub fn naive_histogram(
    q: &QuadPoly,
    cons: Option<&LinearConstraint>,
    cap: usize,
) -> Result<AtomHistogram> {
    let n = q.n();
    if n > cap || n >= 64 {
        return Err(Error::EnumerationCapExceeded {
            needed: n,
            cap: cap.min(63),
        });
    }
    let fast = clear_locally(q);
    let mut atoms: BTreeMap<Rational, BigUint> = BTreeMap::new();
    let mut scaled_counts: BTreeMap<i128, u64> = BTreeMap::new();
    for bits in 0..(1u64 << n) {
        let x = SignVector::new(n, bits);
        if let Some(c) = cons {
            if !c.holds_at(&x)? {
                continue;
            }
        }
        match &fast {
            Some(m) => *scaled_counts.entry(m.value_at(bits)).or_insert(0) += 1,
            None => {
                let v = q.eval(&x)?;
                *atoms.entry(v).or_default() += BigUint::one();
            }
        }
    }
    if let Some(m) = &fast {
        for (scaled, count) in scaled_counts {
            atoms.insert(
                Rational::new(BigInt::from(scaled), m.denom.clone()),
                BigUint::from(count),
            );
        }
    }
    Ok(AtomHistogram {
        atoms,
        total: BigUint::one() << n,
    })
}
