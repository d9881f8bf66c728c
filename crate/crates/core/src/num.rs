//! Exact rational scalars and a handful of integer helpers.
//!
//! All real coefficients in this crate are rationals in lowest terms with a
//! positive denominator; `num_rational::BigRational` maintains exactly that
//! invariant, so it is used directly.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational p/q. Panics on q = 0.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses "p/q" or "p" with decimal integer parts, e.g. "-3/4".
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer {num:?} in rational {s:?}")))?;
    let q: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad integer {den:?} in rational {s:?}")))?;
    if q.is_zero() {
        return Err(Error::Parse(format!("zero denominator in rational {s:?}")));
    }
    Ok(Rational::new(p, q))
}

/// Renders in the "p/q" form used by all file formats ("p" when q = 1).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// n choose k, exactly.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Floor of sqrt(x).
pub fn isqrt(x: &BigUint) -> BigUint {
    x.sqrt()
}

/// Smallest integer s with s^2 >= x.
pub fn isqrt_ceil(x: &BigUint) -> BigUint {
    let s = x.sqrt();
    if &(&s * &s) < x {
        s + BigUint::one()
    } else {
        s
    }
}

/// Upper bound for sqrt(x) as an exact rational, x >= 0.
///
/// sqrt(p/q) = sqrt(pq)/q <= ceil(sqrt(pq))/q.
pub fn rat_sqrt_upper(x: &Rational) -> Rational {
    assert!(!x.is_negative(), "rat_sqrt_upper needs x >= 0");
    let p = x.numer().magnitude();
    let q = x.denom().magnitude();
    let s = isqrt_ceil(&(p * q));
    Rational::new(BigInt::from(s), x.denom().clone())
}

/// floor(log2(x)) for a positive rational, i.e. the unique e with 2^e <= x < 2^(e+1).
pub fn floor_log2(x: &Rational) -> i64 {
    assert!(x.is_positive(), "floor_log2 needs x > 0");
    let nb = x.numer().magnitude().bits() as i64;
    let db = x.denom().magnitude().bits() as i64;
    // 2^(nb-1) <= numer < 2^nb gives a two-candidate window.
    let mut e = nb - db;
    if pow2(e) > *x {
        e -= 1;
    }
    debug_assert!(pow2(e) <= *x && *x < pow2(e + 1));
    e
}

/// 2^e as an exact rational (e may be negative).
pub fn pow2(e: i64) -> Rational {
    let one = BigInt::one();
    if e >= 0 {
        Rational::from_integer(one << e as usize)
    } else {
        Rational::new(one.clone(), one << (-e) as usize)
    }
}

/// x^e for rational x != 0 and integer e (negative allowed).
pub fn rat_pow(x: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow::pow(x.clone(), e as usize)
    } else {
        num_traits::pow::pow(x.clone(), (-e) as usize).recip()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3/4", "-3/4", "0", "17", "-6/4"] {
            let r = parse_rational(s).unwrap();
            let t = parse_rational(&format_rational(&r)).unwrap();
            assert_eq!(r, t);
        }
        assert_eq!(parse_rational("-6/4").unwrap(), ratio(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2), BigUint::from(6u32));
        assert_eq!(binomial(20, 10), BigUint::from(184756u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
    }

    #[test]
    fn floor_log2_window() {
        assert_eq!(floor_log2(&rat(1)), 0);
        assert_eq!(floor_log2(&rat(2)), 1);
        assert_eq!(floor_log2(&ratio(3, 4)), -1);
        assert_eq!(floor_log2(&ratio(1, 3)), -2);
        assert_eq!(floor_log2(&ratio(7, 2)), 1);
    }

    #[test]
    fn sqrt_upper_is_upper() {
        for (p, q) in [(2, 1), (3, 7), (99, 100), (1, 3)] {
            let x = ratio(p, q);
            let u = rat_sqrt_upper(&x);
            assert!(&u * &u >= x);
        }
    }
}
