//! Exact verification of the decoupling inequality `Pr[E]^2 <= Pr[E and E']`
//! for the event E = {Q(xi) = 0}, one index split at a time.
//!
//! Writing c(y) for the number of xi_I with Q(xi_I, y) = 0, the two sides are
//! (sum_y c(y) / 2^n)^2 and sum_y c(y)^2 / 2^(|J| + 2|I|); the inequality is
//! Cauchy-Schwarz on the fiber counts, and both sides are computed exactly.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::QuadPoly;
use crate::engine::walk::{clear_denominators, fits_i128};
use crate::error::{Error, Result};
use crate::num::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecouplingReport {
    pub lhs_squared: Rational,
    pub rhs: Rational,
    /// Exact comparison lhs^2 <= rhs (always true when the computation is
    /// exact; kept explicit so violations would surface loudly).
    pub pass: bool,
}

/// Computes both sides exactly by enumerating the extended space
/// {-1,1}^I x {-1,1}^I x {-1,1}^J.
pub fn verify_decoupling(q: &QuadPoly, i_set: &[usize], cap: usize) -> Result<DecouplingReport> {
    let n = q.n();
    let mut seen = vec![false; n];
    for &i in i_set {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, dim: n });
        }
        if seen[i] {
            return Err(Error::InvalidParameter(format!("duplicate index {i}")));
        }
        seen[i] = true;
    }
    let j_set: Vec<usize> = (0..n).filter(|&j| !seen[j]).collect();
    let extended = n + i_set.len();
    if extended > cap || n >= 60 {
        return Err(Error::EnumerationCapExceeded {
            needed: extended,
            cap,
        });
    }

    // Scaled integer evaluation of Q over the full cube.
    let mut refs: Vec<&Rational> = Vec::new();
    refs.extend(q.quad_matrix().entries());
    refs.extend(q.linear());
    refs.push(q.constant_term());
    let (coef, _denom) = clear_denominators(&refs);
    let mut bound = BigInt::one();
    for c in &coef {
        bound += c.abs() * 2;
    }
    let use_small = fits_i128(&bound);

    let eval_zero_small: Box<dyn Fn(u64) -> bool> = if use_small {
        let coef_small: Vec<i128> = coef.iter().map(|c| i128::try_from(c).unwrap()).collect();
        Box::new(move |bits: u64| eval_scaled_i128(&coef_small, n, bits) == 0)
    } else {
        Box::new(move |bits: u64| eval_scaled_big(&coef, n, bits).is_zero())
    };

    // fiber counts over assignments of J
    let mut sum_c = BigInt::zero();
    let mut sum_c2 = BigInt::zero();
    for yb in 0..(1u64 << j_set.len()) {
        let mut base = 0u64;
        for (pos, &j) in j_set.iter().enumerate() {
            if yb >> pos & 1 == 1 {
                base |= 1 << j;
            }
        }
        let mut c = 0u64;
        for xb in 0..(1u64 << i_set.len()) {
            let mut bits = base;
            for (pos, &i) in i_set.iter().enumerate() {
                if xb >> pos & 1 == 1 {
                    bits |= 1 << i;
                }
            }
            if eval_zero_small(bits) {
                c += 1;
            }
        }
        sum_c += BigInt::from(c);
        sum_c2 += BigInt::from(c) * BigInt::from(c);
    }

    let total = BigInt::one() << n;
    let lhs = Rational::new(sum_c, total.clone());
    let lhs_squared = &lhs * &lhs;
    let rhs = Rational::new(sum_c2, BigInt::one() << (j_set.len() + 2 * i_set.len()));
    let pass = lhs_squared <= rhs;
    Ok(DecouplingReport {
        lhs_squared,
        rhs,
        pass,
    })
}

fn eval_scaled_i128(coef: &[i128], n: usize, bits: u64) -> i128 {
    let sign = |j: usize| -> i128 {
        if bits >> j & 1 == 1 {
            1
        } else {
            -1
        }
    };
    let mut acc = coef[n * n + n];
    for i in 0..n {
        acc += coef[i * n + i];
        acc += coef[n * n + i] * sign(i);
        for j in 0..i {
            acc += 2 * coef[i * n + j] * sign(i) * sign(j);
        }
    }
    acc
}

fn eval_scaled_big(coef: &[BigInt], n: usize, bits: u64) -> BigInt {
    let sign = |j: usize| -> i64 {
        if bits >> j & 1 == 1 {
            1
        } else {
            -1
        }
    };
    let mut acc = coef[n * n + n].clone();
    for i in 0..n {
        acc += &coef[i * n + i];
        acc += &coef[n * n + i] * sign(i);
        for j in 0..i {
            acc += &coef[i * n + j] * (2 * sign(i) * sign(j));
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::families::{random_dense, seeded_rng};
    use crate::num::rat;

    #[test]
    fn constant_zero_passes_with_both_sides_one() {
        let q = QuadPoly::zero(4);
        let report = verify_decoupling(&q, &[0, 1], 30).unwrap();
        assert_eq!(report.lhs_squared, rat(1));
        assert_eq!(report.rhs, rat(1));
        assert!(report.pass);
    }

    #[test]
    fn never_zero_passes_with_both_sides_zero() {
        // Q = x1 x2 takes values +-1 only.
        let q = QuadPoly::from_monomials(2, &[(0, 1, rat(1))], &[], rat(0)).unwrap();
        let report = verify_decoupling(&q, &[0], 30).unwrap();
        assert!(report.lhs_squared.is_zero());
        assert!(report.rhs.is_zero());
        assert!(report.pass);
    }

    #[test]
    fn random_instances_always_pass() {
        let mut rng = seeded_rng(31337);
        for trial in 0..50 {
            let n = 4 + trial % 5;
            let q = random_dense(&mut rng, n);
            for split in [1, n / 2] {
                let i_set: Vec<usize> = (0..split).collect();
                let report = verify_decoupling(&q, &i_set, 30).unwrap();
                assert!(report.pass, "decoupling violated: {report:?}");
            }
        }
    }

    #[test]
    fn rejects_bad_index_sets() {
        let q = QuadPoly::zero(4);
        assert!(verify_decoupling(&q, &[4], 30).is_err());
        assert!(verify_decoupling(&q, &[1, 1], 30).is_err());
        assert!(verify_decoupling(&q, &[0], 3).is_err());
    }
}
