//! Seeded Monte-Carlo estimation of Pr[Q = z] past the enumeration cap.
//!
//! The generator is ChaCha8 keyed by (seed, stream index), a counter-based
//! splittable design: every stream is deterministic on its own, so parallel
//! or resumed sampling cannot change the result for a given seed.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::QuadPoly;
use crate::engine::general::ProductDist;
use crate::engine::walk::clear_denominators;
use crate::error::{Error, Result};

use crate::num::{rat_sqrt_upper, ratio, Rational};

/// Frequency estimate with a Wilson-score 95% interval. The half-width is
/// rounded up (exact rational arithmetic, integer square root), so coverage
/// can only improve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonteCarloReport {
    pub hits: u64,
    pub samples: u64,
    /// hits / samples.
    pub estimate: Rational,
    /// Center of the Wilson interval.
    pub wilson_center: Rational,
    /// 95% half-width around the Wilson center.
    pub wilson_halfwidth: Rational,
}

impl MonteCarloReport {
    fn from_counts(hits: u64, samples: u64) -> Self {
        let x = Rational::from_integer(BigInt::from(hits));
        let n = Rational::from_integer(BigInt::from(samples));
        let estimate = &x / &n;
        // z = 1.96 = 49/25 for the 95% level.
        let z = ratio(49, 25);
        let z2 = &z * &z;
        let denom = &n + &z2;
        let center = (&x + &z2 / crate::num::rat(2)) / &denom;
        let variance_term = (&x * (&n - &x)) / &n + &z2 / crate::num::rat(4);
        let halfwidth = &z * rat_sqrt_upper(&variance_term) / &denom;
        MonteCarloReport {
            hits,
            samples,
            estimate,
            wilson_center: center,
            wilson_halfwidth: halfwidth,
        }
    }

    pub fn wilson_contains(&self, p: &Rational) -> bool {
        let lo = &self.wilson_center - &self.wilson_halfwidth;
        let hi = &self.wilson_center + &self.wilson_halfwidth;
        lo <= *p && *p <= hi
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Estimates Pr[Q(xi) = z] for Rademacher signs.
pub fn monte_carlo_rademacher(
    q: &QuadPoly,
    z: &Rational,
    samples: u64,
    seed: u64,
) -> Result<MonteCarloReport> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be >= 1".into()));
    }
    let mut rng = rng_for(seed, 0);
    let mut hits = 0u64;
    match crate::engine::naive::clear_locally(q) {
        Some(monomials) => {
            let zt = z * Rational::from_integer(monomials.denom.clone());
            let target = zt
                .is_integer()
                .then(|| i128::try_from(&zt.to_integer()).ok())
                .flatten();
            for _ in 0..samples {
                let bits: u64 = rng.gen();
                if let Some(t) = target {
                    if monomials.value_at(bits) == t {
                        hits += 1;
                    }
                }
            }
        }
        None => {
            let n = q.n();
            for _ in 0..samples {
                let bits: u64 = rng.gen();
                let x = crate::algebra::SignVector::new(n, bits);
                if &q.eval(&x)? == z {
                    hits += 1;
                }
            }
        }
    }
    Ok(MonteCarloReport::from_counts(hits, samples))
}

/// Estimates Pr[Q(zeta) = z] for a general finite-support product.
pub fn monte_carlo(
    q: &QuadPoly,
    dist: &ProductDist,
    z: &Rational,
    samples: u64,
    seed: u64,
) -> Result<MonteCarloReport> {
    if samples == 0 {
        return Err(Error::InvalidParameter("samples must be >= 1".into()));
    }
    if dist.n() != q.n() {
        return Err(Error::DimensionMismatch(format!(
            "distribution on {} variables, polynomial on {}",
            dist.n(),
            q.n()
        )));
    }
    // Per-variable cumulative integer thresholds over a common denominator.
    let samplers: Vec<(Vec<BigUint>, BigUint)> = dist
        .factors
        .iter()
        .map(|d| {
            let probs: Vec<&Rational> = d.atoms().iter().map(|(_, p)| p).collect();
            let (nums, den) = clear_denominators(&probs);
            let mut acc = BigUint::zero();
            let cumulative = nums
                .iter()
                .map(|x| {
                    acc += x.magnitude();
                    acc.clone()
                })
                .collect();
            (cumulative, den.magnitude().clone())
        })
        .collect();

    let mut rng = rng_for(seed, 0);
    let mut hits = 0u64;
    let mut point = vec![Rational::zero(); dist.n()];
    for _ in 0..samples {
        for (i, d) in dist.factors.iter().enumerate() {
            let (cumulative, den) = &samplers[i];
            let draw = uniform_below(&mut rng, den);
            let idx = cumulative.iter().position(|c| &draw < c).unwrap_or(0);
            point[i] = d.atoms()[idx].0.clone();
        }
        if &q.eval_rat(&point)? == z {
            hits += 1;
        }
    }
    Ok(MonteCarloReport::from_counts(hits, samples))
}

/// Uniform BigUint in [0, bound) by rejection on whole 64-bit words.
fn uniform_below(rng: &mut ChaCha8Rng, bound: &BigUint) -> BigUint {
    if bound.is_one() {
        return BigUint::zero();
    }
    let bits = bound.bits();
    let words = bits.div_ceil(64) as usize;
    let top_mask: u64 = if bits.is_multiple_of(64) {
        u64::MAX
    } else {
        (1u64 << (bits % 64)) - 1
    };
    loop {
        let mut digits: Vec<u64> = (0..words).map(|_| rng.gen()).collect();
        digits[words - 1] &= top_mask;
        let candidate = BigUint::from_slice(
            &digits
                .iter()
                .flat_map(|w| [*w as u32, (*w >> 32) as u32])
                .collect::<Vec<_>>(),
        );
        if &candidate < bound {
            return candidate;
        }
    }
}
