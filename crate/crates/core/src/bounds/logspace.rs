//! Rigorous base-2 log arithmetic over exact rationals.
//!
//! Every quantity is carried as an enclosure [lo, hi] of its true value by
//! exact rationals (normalized to dyadics of bounded precision). Logarithms
//! come from the atanh series with explicit tail bounds, exponentials from
//! the alternating Taylor series, so no step ever trusts floating point.
//! That makes "exact probability <= closed-form bound" checks one-sided by
//! construction: compare the probability's upper endpoint against the
//! bound's lower endpoint.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::num::{floor_log2, pow2, rat, ratio, Rational};

/// Working precision in fractional bits for interval endpoints.
pub const DEFAULT_PREC: u32 = 128;

/// An enclosure lo <= value <= hi by exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RatInterval {
    pub fn exact(v: Rational) -> Self {
        RatInterval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn point(v: i64) -> Self {
        Self::exact(rat(v))
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Rounds both endpoints outward to dyadics with `prec` fractional bits,
    /// keeping enclosure validity while capping numerator growth.
    pub fn normalize(&self, prec: u32) -> Self {
        let scale = pow2(prec as i64);
        let lo = (&self.lo * &scale).floor() / &scale;
        let hi = (&self.hi * &scale).ceil() / &scale;
        RatInterval { lo, hi }
    }

    pub fn add(&self, other: &Self) -> Self {
        RatInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    /// Multiplies by an exact rational constant.
    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_negative() {
            RatInterval {
                lo: &self.hi * q,
                hi: &self.lo * q,
            }
        } else {
            RatInterval {
                lo: &self.lo * q,
                hi: &self.hi * q,
            }
        }
    }

    pub fn max(&self, other: &Self) -> Self {
        RatInterval {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }
}

/// Enclosure of ln 2 = 2 atanh(1/3), computed once at high precision.
fn ln2_interval() -> &'static RatInterval {
    static LN2: OnceLock<RatInterval> = OnceLock::new();
    LN2.get_or_init(|| atanh_interval(&ratio(1, 3), 256).scale(&rat(2)))
}

/// Enclosure of atanh(z) = sum z^(2j+1)/(2j+1) for 0 <= z < 1/2.
///
/// Runs on integers scaled by 2^w with directed rounding: a floor chain for
/// the lower endpoint, a ceil chain plus tail bound for the upper, so the
/// word size stays flat across the series instead of snowballing through
/// rational gcds.
fn atanh_interval(z: &Rational, prec: u32) -> RatInterval {
    debug_assert!(!z.is_negative() && *z < ratio(1, 2));
    if z.is_zero() {
        return RatInterval::exact(Rational::zero());
    }
    let w = prec as i64 + 24;
    let scale: BigInt = BigInt::one() << w as usize;
    let zn = z.numer();
    let zd = z.denom();
    let zn2 = zn * zn;
    let zd2 = zd * zd;

    // p_lo <= z^(2j+1) 2^w <= p_hi, maintained through the recurrence.
    let mut p_lo: BigInt = (zn * &scale) / zd;
    let mut p_hi: BigInt = &p_lo + 1;
    let mut sum_lo = BigInt::zero();
    let mut sum_hi = BigInt::zero();
    let mut j: i64 = 0;
    loop {
        sum_lo += &p_lo / BigInt::from(2 * j + 1);
        sum_hi += &p_hi / BigInt::from(2 * j + 1) + 1;
        p_lo = (&p_lo * &zn2) / &zd2;
        p_hi = (&p_hi * &zn2) / &zd2 + 1;
        j += 1;
        if p_hi < BigInt::from(2 * j + 1) {
            break;
        }
    }
    // tail <= z^(2j+1)/((2j+1)(1-z^2)) <= 2 p_hi / (2j+1) 2^w for z < 1/2
    let tail = (&p_hi * 2) / BigInt::from(2 * j + 1) + 1;
    RatInterval {
        lo: Rational::new(sum_lo, scale.clone()),
        hi: Rational::new(sum_hi + tail, scale),
    }
}

/// Enclosure of exp(x) for a single rational -1 < x <= 0, scaled-integer
/// alternating series with directed rounding.
fn exp_point_nonpos(x: &Rational, prec: u32) -> RatInterval {
    debug_assert!(!x.is_positive() && *x > rat(-1));
    let w = prec as i64 + 24;
    let scale: BigInt = BigInt::one() << w as usize;
    let an = x.numer().abs(); // |x| = an/ad
    let ad = x.denom().clone();
    // t_lo <= |x|^j / j! * 2^w <= t_hi
    let mut t_lo = scale.clone();
    let mut t_hi = scale.clone();
    let mut sum_lo = BigInt::zero();
    let mut sum_hi = BigInt::zero();
    let mut j: i64 = 0;
    loop {
        if j % 2 == 0 {
            sum_lo += &t_lo;
            sum_hi += &t_hi + 1;
        } else {
            sum_lo -= &t_hi + 1;
            sum_hi -= &t_lo;
        }
        let next_den = &ad * BigInt::from(j + 1);
        t_lo = (&t_lo * &an) / &next_den;
        t_hi = (&t_hi * &an) / &next_den + 1;
        j += 1;
        if t_hi < BigInt::from(2) {
            break;
        }
    }
    // truncation error at most the next term magnitude
    RatInterval {
        lo: Rational::new(sum_lo - &t_hi, scale.clone()),
        hi: Rational::new(sum_hi + &t_hi, scale),
    }
}

/// Enclosure of exp(w) for an enclosed -1 < w <= 0.
fn exp_interval_nonpos(w: &RatInterval, prec: u32) -> RatInterval {
    debug_assert!(!w.hi.is_positive() && w.lo > rat(-1));
    RatInterval {
        lo: exp_point_nonpos(&w.lo, prec).lo,
        hi: exp_point_nonpos(&w.hi, prec).hi,
    }
}

/// Rigorous enclosure of log2(x) for a positive rational x.
pub fn log2_interval(x: &Rational, prec: u32) -> RatInterval {
    assert!(x.is_positive(), "log2 needs a positive argument");
    let e = floor_log2(x);
    let m = x / pow2(e);
    if m.is_one() {
        return RatInterval::point(e);
    }
    // round the mantissa outward to dyadics before the series, so the series
    // arguments stay small even when x is astronomically long
    let scale = pow2(prec as i64 + 8);
    let m_lo = (&m * &scale).floor() / &scale;
    let m_hi = (&m * &scale).ceil() / &scale;
    let ln_lo = atanh_interval(&((&m_lo - rat(1)) / (&m_lo + rat(1))), prec).scale(&rat(2));
    let ln_hi = atanh_interval(&((&m_hi - rat(1)) / (&m_hi + rat(1))), prec).scale(&rat(2));
    let ln2 = ln2_interval();
    let iv = RatInterval {
        lo: rat(e) + &ln_lo.lo / &ln2.hi,
        hi: rat(e) + &ln_hi.hi / &ln2.lo,
    };
    iv.normalize(prec)
}

/// Enclosure of 2^d for an exact rational d <= 0.
fn pow2_interval_nonpos(d: &Rational, prec: u32) -> RatInterval {
    debug_assert!(!d.is_positive());
    if d.is_integer() {
        return RatInterval::exact(pow2(d.to_integer().try_into().expect("small exponent")));
    }
    let neg = -d;
    let i = neg.floor().to_integer();
    let i: i64 = (&i).try_into().expect("capped before the call");
    let f = neg - rat(i); // fractional part in (0, 1)
    let ln2 = ln2_interval();
    // w = -f ln2 in (-0.70, 0)
    let w = RatInterval {
        lo: -(&f * &ln2.hi),
        hi: -(&f * &ln2.lo),
    };
    exp_interval_nonpos(&w, prec).scale(&pow2(-i))
}

/// Enclosure of log2(2^x + 2^y) for exact rational exponents.
fn lse_exact(x: &Rational, y: &Rational, prec: u32) -> RatInterval {
    let (u, v) = if x >= y { (x, y) } else { (y, x) };
    let d = v - u; // <= 0
    // far below the precision floor the small term is invisible from below
    // and adds at most 2^(d+1)/ln2 < 2^(d+2) from above
    if d < rat(-(prec as i64) - 8) {
        return RatInterval {
            lo: u.clone(),
            hi: u + pow2(-(prec as i64) - 6),
        };
    }
    let p2d = pow2_interval_nonpos(&d, prec);
    let log_term_lo = log2_interval(&(rat(1) + &p2d.lo), prec);
    let log_term_hi = log2_interval(&(rat(1) + &p2d.hi), prec);
    RatInterval {
        lo: u + log_term_lo.lo,
        hi: u + log_term_hi.hi,
    }
}

/// Enclosure of log2(2^a + 2^b) for enclosed exponents.
pub fn log2_add(a: &RatInterval, b: &RatInterval, prec: u32) -> RatInterval {
    let lo = lse_exact(&a.lo, &b.lo, prec);
    let hi = lse_exact(&a.hi, &b.hi, prec);
    RatInterval {
        lo: lo.lo,
        hi: hi.hi,
    }
    .normalize(prec)
}

/// A closed-form upper bound carried in base-2 log space, clamped at 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogBound {
    log2: RatInterval,
    clamped: bool,
}

impl LogBound {
    /// Clamps the raw value min(2^iv, 1); the flag records that the raw
    /// value may have exceeded 1.
    pub fn from_log2(iv: RatInterval) -> Self {
        let zero = Rational::zero();
        let clamped = iv.hi > zero;
        let log2 = RatInterval {
            lo: iv.lo.min(zero.clone()),
            hi: iv.hi.min(zero),
        };
        LogBound { log2, clamped }
    }

    pub fn one() -> Self {
        LogBound {
            log2: RatInterval::exact(Rational::zero()),
            clamped: false,
        }
    }

    pub fn from_exact(value: &Rational, prec: u32) -> Self {
        Self::from_log2(log2_interval(value, prec))
    }

    pub fn log2(&self) -> &RatInterval {
        &self.log2
    }

    pub fn clamped(&self) -> bool {
        self.clamped
    }

    /// Certified comparison: the exact probability is at most this bound.
    /// The probability's log is rounded toward +inf, the bound's toward
    /// -inf, so a `true` can never be spurious.
    pub fn dominates(&self, prob: &crate::engine::DyadicProb) -> bool {
        if prob.is_zero() || self.clamped && self.log2.hi.is_zero() && self.log2.lo.is_zero() {
            // a clamped bound states min(raw, 1) = 1 >= any probability
            return true;
        }
        let prob_log2 = log2_interval(&prob.to_rational(), DEFAULT_PREC);
        prob_log2.hi <= self.log2.lo
    }

    /// Certified self >= other (e.g. monotonicity checks).
    pub fn ge_certain(&self, other: &LogBound) -> bool {
        self.log2.lo >= other.log2.hi || (self.clamped && other.clamped)
    }

    /// True unless self <= other is certainly violated.
    pub fn le_not_refuted(&self, other: &LogBound) -> bool {
        self.log2.lo <= other.log2.hi
    }

    /// Upper endpoint as f64, for display only.
    pub fn log2_f64_upper(&self) -> f64 {
        rational_to_f64_up(&self.log2.hi)
    }
}

fn rational_to_f64_up(x: &Rational) -> f64 {
    // good enough for display: quantize at 2^-60
    let scaled = (x * pow2(60)).ceil().to_integer();
    match i128::try_from(&scaled) {
        Ok(v) => v as f64 / (1u128 << 60) as f64,
        Err(_) => {
            if scaled.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::DyadicProb;

    #[test]
    fn powers_of_two_are_exact() {
        for (x, e) in [(rat(8), 3), (ratio(1, 4), -2), (rat(1), 0)] {
            let iv = log2_interval(&x, 64);
            assert_eq!(iv.lo, rat(e));
            assert_eq!(iv.hi, rat(e));
        }
    }

    #[test]
    fn log2_three_is_tightly_enclosed() {
        let iv = log2_interval(&rat(3), 128);
        assert!(iv.width() <= pow2(-120));
        // 1.584962500721156 = log2(3) to 16 digits
        let approx = ratio(1584962500721156, 1_000_000_000_000_000);
        assert!((&iv.lo - &approx).abs() < ratio(1, 1_000_000_000_000));
    }

    #[test]
    fn log_respects_multiplicativity() {
        let a = ratio(7, 5);
        let b = ratio(22, 3);
        let sum = log2_interval(&a, 128).add(&log2_interval(&b, 128));
        let direct = log2_interval(&(&a * &b), 128);
        assert!(sum.lo <= direct.hi && direct.lo <= sum.hi);
    }

    #[test]
    fn lse_doubles_equal_terms() {
        // log2(2^x + 2^x) = x + 1
        let x = log2_interval(&ratio(3, 7), 128);
        let s = log2_add(&x, &x, 128);
        let expected = x.add(&RatInterval::point(1));
        assert!(s.lo <= expected.hi && expected.lo <= s.hi);
        assert!(s.width() < pow2(-100));
    }

    #[test]
    fn lse_handles_wildly_separated_terms() {
        let big = RatInterval::point(0);
        let small = RatInterval::point(-100_000);
        let s = log2_add(&big, &small, 128);
        assert!(s.lo >= rat(0));
        assert!(s.hi <= pow2(-100));
    }

    #[test]
    fn clamping_and_domination() {
        // t^{-k/2} with t = 4, k = 2: bound exactly 1/4
        let b = LogBound::from_log2(log2_interval(&ratio(1, 4), 128));
        assert!(!b.clamped());
        assert!(b.dominates(&DyadicProb::dyadic(1u32, 2))); // 1/4 <= 1/4
        assert!(b.dominates(&DyadicProb::dyadic(1u32, 3))); // 1/8 <= 1/4
        assert!(!b.dominates(&DyadicProb::dyadic(1u32, 1))); // 1/2 > 1/4

        let clamped = LogBound::from_log2(RatInterval::exact(rat(3)));
        assert!(clamped.clamped());
        assert!(clamped.dominates(&DyadicProb::dyadic(1u32, 0))); // prob 1 <= 1
    }

    #[test]
    fn ln2_matches_reference_digits() {
        let iv = ln2_interval();
        // 0.6931471805599453
        let reference = ratio(6931471805599453, 10_000_000_000_000_000);
        assert!((&iv.lo - &reference).abs() < ratio(1, 1_000_000_000_000));
        assert!(iv.width() < pow2(-200));
    }
}
