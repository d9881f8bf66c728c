//! Exact probability that A xi agrees with a target vector outside of a small
//! set of coordinates, optionally jointly with a linear system T xi = w.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::algebra::{LinearConstraint, RatMatrix};
use crate::engine::walk::{block_starts, clear_denominators, fits_i128, gray_walk, WalkInt};
use crate::engine::{DyadicProb, EnumOptions};
use crate::error::{Error, Result};
use crate::num::Rational;

struct ScaledHamming {
    n: usize,
    m: usize,
    a: Vec<BigInt>,       // m x n scaled
    v: Vec<BigInt>,       // length m, same scale
    t: Vec<BigInt>,       // k x n scaled (constraint)
    w: Vec<BigInt>,       // length k, same scale
    k: usize,
    bound: BigInt,
}

impl ScaledHamming {
    fn build(a: &RatMatrix, v: &[Rational], cons: Option<&LinearConstraint>) -> Result<Self> {
        let (m, n) = (a.rows(), a.cols());
        if v.len() != m {
            return Err(Error::DimensionMismatch(format!(
                "target vector has length {}, matrix has {} rows",
                v.len(),
                m
            )));
        }
        let mut refs: Vec<&Rational> = Vec::with_capacity(m * n + m);
        refs.extend(a.entries());
        refs.extend(v.iter());
        let (ints, _) = clear_denominators(&refs);
        let a_ints = ints[..m * n].to_vec();
        let v_ints = ints[m * n..].to_vec();

        let (k, t, w) = match cons {
            Some(c) => {
                if c.n() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "constraint on {} variables, matrix has {} columns",
                        c.n(),
                        n
                    )));
                }
                let mut refs: Vec<&Rational> = Vec::new();
                refs.extend(c.m.entries());
                refs.extend(c.w.iter());
                let (ints, _) = clear_denominators(&refs);
                (c.k(), ints[..c.k() * n].to_vec(), ints[c.k() * n..].to_vec())
            }
            None => (0, Vec::new(), Vec::new()),
        };

        let mut bound = BigInt::one();
        for row in 0..m {
            let mut rb = v_ints[row].abs();
            for j in 0..n {
                rb += a_ints[row * n + j].abs() * 2;
            }
            if rb > bound {
                bound = rb;
            }
        }
        for row in 0..k {
            let mut rb = w[row].abs();
            for j in 0..n {
                rb += t[row * n + j].abs() * 2;
            }
            if rb > bound {
                bound = rb;
            }
        }
        bound *= 4;

        Ok(ScaledHamming {
            n,
            m,
            a: a_ints,
            v: v_ints,
            t,
            w,
            k,
            bound,
        })
    }
}

fn run_hamming<T: WalkInt>(sc: &ScaledHamming, threshold: usize, opts: &EnumOptions) -> u64 {
    let (n, m, k) = (sc.n, sc.m, sc.k);
    // Per flipped coordinate j, the rows whose residual changes and by how much.
    let a_cols: Vec<Vec<(usize, T)>> = (0..n)
        .map(|j| {
            (0..m)
                .filter(|&row| !sc.a[row * n + j].is_zero())
                .map(|row| {
                    let mut c = T::from_bigint(&sc.a[row * n + j]);
                    c.double();
                    (row, c)
                })
                .collect()
        })
        .collect();
    let t_cols: Vec<Vec<(usize, T)>> = (0..n)
        .map(|j| {
            (0..k)
                .filter(|&row| !sc.t[row * n + j].is_zero())
                .map(|row| {
                    let mut c = T::from_bigint(&sc.t[row * n + j]);
                    c.double();
                    (row, c)
                })
                .collect()
        })
        .collect();

    let residuals_at = |bits: u64, coeffs: &[BigInt], targets: &[BigInt], rows: usize| -> Vec<T> {
        (0..rows)
            .map(|row| {
                let mut acc = -targets[row].clone();
                for j in 0..n {
                    if bits >> j & 1 == 1 {
                        acc += &coeffs[row * n + j];
                    } else {
                        acc -= &coeffs[row * n + j];
                    }
                }
                T::from_bigint(&acc)
            })
            .collect()
    };

    let p = opts.blocks_for(n);
    let starts = block_starts(n, p);
    let run_one = |start: u64| -> u64 {
        let mut diff = residuals_at(start, &sc.a, &sc.v, m);
        let mut diff_count = diff.iter().filter(|x| !x.is_zero()).count();
        let mut cons_res = residuals_at(start, &sc.t, &sc.w, k);
        let mut cons_nonzero = cons_res.iter().filter(|x| !x.is_zero()).count();
        let mut bits = start;
        let mut count = 0u64;
        let mut visit = |diff_count: usize, cons_nonzero: usize| {
            if diff_count < threshold && cons_nonzero == 0 {
                count += 1;
            }
        };
        visit(diff_count, cons_nonzero);
        gray_walk(n - p, |j| {
            let s_plus = bits >> j & 1 == 1;
            for (row, c) in &a_cols[j] {
                let was_zero = diff[*row].is_zero();
                if s_plus {
                    diff[*row].sub_assign_ref(c);
                } else {
                    diff[*row].add_assign_ref(c);
                }
                match (was_zero, diff[*row].is_zero()) {
                    (true, false) => diff_count += 1,
                    (false, true) => diff_count -= 1,
                    _ => {}
                }
            }
            for (row, c) in &t_cols[j] {
                let was_zero = cons_res[*row].is_zero();
                if s_plus {
                    cons_res[*row].sub_assign_ref(c);
                } else {
                    cons_res[*row].add_assign_ref(c);
                }
                match (was_zero, cons_res[*row].is_zero()) {
                    (true, false) => cons_nonzero += 1,
                    (false, true) => cons_nonzero -= 1,
                    _ => {}
                }
            }
            bits ^= 1 << j;
            visit(diff_count, cons_nonzero);
        });
        count
    };

    if p == 0 {
        run_one(starts[0])
    } else {
        starts.par_iter().map(|&s| run_one(s)).sum()
    }
}

/// Exact Pr[A xi differs from v in fewer than `threshold` coordinates].
pub fn hamming_event_prob(
    a: &RatMatrix,
    v: &[Rational],
    threshold: usize,
    opts: &EnumOptions,
) -> Result<DyadicProb> {
    hamming_event_prob_constrained(a, v, threshold, None, opts)
}

/// Same event, jointly with T xi = w.
pub fn hamming_event_prob_constrained(
    a: &RatMatrix,
    v: &[Rational],
    threshold: usize,
    cons: Option<&LinearConstraint>,
    opts: &EnumOptions,
) -> Result<DyadicProb> {
    let n = a.cols();
    if n > opts.cap || n >= 64 {
        return Err(Error::EnumerationCapExceeded {
            needed: n,
            cap: opts.cap.min(63),
        });
    }
    let sc = ScaledHamming::build(a, v, cons)?;
    let count = if fits_i128(&sc.bound) {
        run_hamming::<i128>(&sc, threshold, opts)
    } else {
        run_hamming::<BigInt>(&sc, threshold, opts)
    };
    Ok(DyadicProb::dyadic(count, n))
}
