//! The closed-form bounds, each evaluated rigorously in log space and
//! clamped at 1 (the clamp flag makes vacuity visible: the giant constants
//! push several bounds above 1 at any desk scale).

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::bounds::logspace::{log2_interval, LogBound, RatInterval, DEFAULT_PREC};
use crate::error::{Error, Result};
use crate::num::{binomial, rat, ratio, Rational};

/// C(n, floor(n/2)) * 2^-n as an exact rational.
pub fn erdos_lo_exact(n: usize) -> Rational {
    let numer = BigInt::from(binomial(n as u64, n as u64 / 2));
    Rational::new(numer, BigInt::one() << n)
}

/// The classical extremal bound on linear sign sums.
pub fn erdos_lo(n: usize) -> Result<LogBound> {
    if n == 0 {
        return Err(Error::InvalidParameter("erdos_lo needs n >= 1".into()));
    }
    Ok(LogBound::from_exact(&erdos_lo_exact(n), DEFAULT_PREC))
}

/// 2^-k for a full-row-rank system of k equations.
pub fn odlyzko(k: usize) -> LogBound {
    LogBound::from_log2(RatInterval::point(-(k as i64)))
}

/// t^{-k/2} given t disjoint nonsingular k x k submatrices.
pub fn halasz_fjz(k: usize, t: u64) -> Result<LogBound> {
    if t < 1 {
        return Err(Error::InvalidParameter("halasz_fjz needs t >= 1".into()));
    }
    let log_t = log2_interval(&rat(t as i64), DEFAULT_PREC);
    Ok(LogBound::from_log2(log_t.scale(&ratio(-(k as i64), 2))))
}

/// (s/k)^{-k/2} for membership in the deletion class with parameter s.
pub fn halasz_sub(k: usize, s: &Rational) -> Result<LogBound> {
    if k < 1 {
        return Err(Error::InvalidParameter("halasz_sub needs k >= 1".into()));
    }
    if !s.is_positive() {
        return Err(Error::InvalidParameter("halasz_sub needs s > 0".into()));
    }
    let base = s / rat(k as i64);
    let log = log2_interval(&base, DEFAULT_PREC);
    Ok(LogBound::from_log2(log.scale(&ratio(-(k as i64), 2))))
}

/// 2^{dr+1} / t^{(r-d)/2} for a quadric on a (d+1)-dimensional subspace.
pub fn geometric(d: usize, r: usize, t: u64) -> Result<LogBound> {
    if d >= r {
        return Err(Error::InvalidParameter(format!(
            "geometric bound needs 0 <= d < r, got d = {d}, r = {r}"
        )));
    }
    if t < 1 || !t.is_multiple_of(1 << d) {
        return Err(Error::InvalidParameter(format!(
            "geometric bound needs t >= 1 divisible by 2^d, got t = {t}, d = {d}"
        )));
    }
    let log_t = log2_interval(&rat(t as i64), DEFAULT_PREC);
    let iv = log_t
        .scale(&ratio(-((r - d) as i64), 2))
        .add(&RatInterval::point((d * r + 1) as i64));
    Ok(LogBound::from_log2(iv))
}

/// (s / (2^{3r^2} (k+r)^2))^{-(k+1)/2}: the low-rank case.
pub fn low_rank(k: usize, s: &Rational, r: usize) -> Result<LogBound> {
    if r < 1 {
        return Err(Error::InvalidParameter("low_rank needs r >= 1".into()));
    }
    if !s.is_positive() {
        return Err(Error::InvalidParameter("low_rank needs s > 0".into()));
    }
    let denom = pow_big(2, 3 * r * r) * BigInt::from(((k + r) * (k + r)) as i64);
    let base = s / Rational::from_integer(denom);
    let log = log2_interval(&base, DEFAULT_PREC);
    Ok(LogBound::from_log2(log.scale(&ratio(-((k + 1) as i64), 2))))
}

/// (s / (10^60 (k+r)^20))^{-(k+r)/2}: joint probability that a linear
/// system holds and a vector image stays inside a small Hamming ball.
pub fn hamming_ball(k: usize, r: usize, s: &Rational) -> Result<LogBound> {
    if r < 1 || !s.is_positive() {
        return Err(Error::InvalidParameter(
            "hamming_ball needs r >= 1 and s > 0".into(),
        ));
    }
    let denom = pow_big(10, 60) * pow_big((k + r) as u32, 20);
    let base = s / Rational::from_integer(denom);
    let log = log2_interval(&base, DEFAULT_PREC);
    Ok(LogBound::from_log2(
        log.scale(&ratio(-((k + r) as i64), 2)),
    ))
}

/// (s / (10^61 (k+2)^20))^{-(k+2)/2}: failure probability of the inherited
/// robust-rank condition after appending a random row.
pub fn rank_inheritance(k: usize, s: &Rational) -> Result<LogBound> {
    if !s.is_positive() {
        return Err(Error::InvalidParameter("rank_inheritance needs s > 0".into()));
    }
    let denom = pow_big(10, 61) * pow_big((k + 2) as u32, 20);
    let base = s / Rational::from_integer(denom);
    let log = log2_interval(&base, DEFAULT_PREC);
    Ok(LogBound::from_log2(
        log.scale(&ratio(-((k + 2) as i64), 2)),
    ))
}

pub(crate) fn pow_big(base: u32, exp: usize) -> BigInt {
    num_traits::pow::pow(BigInt::from(base), exp)
}
