//! Exact probability that xi_1 a_1 + ... + xi_n a_n lands in a quadric
//! restricted to an affine subspace of R^r.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::algebra::{LinearConstraint, QuadPoly};
use crate::engine::walk::{block_starts, clear_denominators, fits_i128, gray_walk, WalkInt};
use crate::engine::{DyadicProb, EnumOptions};
use crate::error::{Error, Result};
use crate::num::Rational;

/// Z = {y in R^r : P(y) = 0 and M y = w}. The affine part may be vacuous.
#[derive(Clone, Debug)]
pub struct QuadricSpec {
    pub r: usize,
    pub p: QuadPoly,
    pub constraints: LinearConstraint,
}

impl QuadricSpec {
    pub fn new(p: QuadPoly, constraints: LinearConstraint) -> Result<Self> {
        if constraints.n() != p.n() {
            return Err(Error::DimensionMismatch(format!(
                "quadric polynomial on {} variables, constraints on {}",
                p.n(),
                constraints.n()
            )));
        }
        Ok(QuadricSpec {
            r: p.n(),
            p,
            constraints,
        })
    }

    pub fn unconstrained(p: QuadPoly) -> Self {
        let n = p.n();
        QuadricSpec {
            r: n,
            p,
            constraints: LinearConstraint::vacuous(n),
        }
    }
}

/// All inputs scaled to integers. The walk maintains y = sum xi_i a_i and the
/// affine residuals incrementally; P is evaluated per point in O(r^2).
struct ScaledVec {
    n: usize,
    r: usize,
    steps: Vec<Vec<BigInt>>, // 2 * a_i, the change of y when xi_i flips sign
    a_cols: Vec<Vec<BigInt>>,
    // P scaled by denom_p, evaluated at y/denom_a: value = y^T A y + denom_a * b^T y + denom_a^2 * c
    pa: Vec<BigInt>,
    pb: Vec<BigInt>,
    pc: BigInt,
    // affine rows scaled: residual_row = <m_row, y> - denom_a * w_row
    m: Vec<BigInt>,
    w: Vec<BigInt>,
    k: usize,
    bound: BigInt,
}

impl ScaledVec {
    fn build(vectors: &[Vec<Rational>], z: &QuadricSpec) -> Result<ScaledVec> {
        let n = vectors.len();
        let r = z.r;
        for (i, a) in vectors.iter().enumerate() {
            if a.len() != r {
                return Err(Error::DimensionMismatch(format!(
                    "vector {i} has dimension {}, quadric lives in R^{r}",
                    a.len()
                )));
            }
        }
        let flat: Vec<&Rational> = vectors.iter().flatten().collect();
        let (a_ints, denom_a) = clear_denominators(&flat);
        let a_cols: Vec<Vec<BigInt>> = (0..n)
            .map(|i| a_ints[i * r..(i + 1) * r].to_vec())
            .collect();
        let steps: Vec<Vec<BigInt>> = a_cols
            .iter()
            .map(|col| col.iter().map(|x| x * 2).collect())
            .collect();

        let mut refs: Vec<&Rational> = Vec::new();
        refs.extend(z.p.quad_matrix().entries());
        refs.extend(z.p.linear());
        refs.push(z.p.constant_term());
        let (p_ints, _) = clear_denominators(&refs);
        let pa = p_ints[..r * r].to_vec();
        let mut pb: Vec<BigInt> = p_ints[r * r..r * r + r].to_vec();
        for x in &mut pb {
            *x *= &denom_a;
        }
        let pc = p_ints[r * r + r].clone() * &denom_a * &denom_a;

        let k = z.constraints.k();
        let mut refs: Vec<&Rational> = Vec::new();
        refs.extend(z.constraints.m.entries());
        refs.extend(z.constraints.w.iter());
        let (m_ints, _) = clear_denominators(&refs);
        let m = m_ints[..k * r].to_vec();
        let w: Vec<BigInt> = m_ints[k * r..].iter().map(|x| x * &denom_a).collect();

        // |y_j| <= sum_i |a_ij|; bound quadratic form accordingly.
        let y_bound: Vec<BigInt> = (0..r)
            .map(|j| {
                a_cols
                    .iter()
                    .map(|col| col[j].abs())
                    .fold(BigInt::one(), |acc, x| acc + x)
            })
            .collect();
        let mut bound = pc.abs();
        for p in 0..r {
            for q in 0..r {
                bound += pa[p * r + q].abs() * &y_bound[p] * &y_bound[q];
            }
            bound += pb[p].abs() * &y_bound[p];
        }
        for row in 0..k {
            let mut rb = w[row].abs();
            for j in 0..r {
                rb += m[row * r + j].abs() * &y_bound[j];
            }
            if rb > bound {
                bound = rb;
            }
        }
        bound *= 4;

        Ok(ScaledVec {
            n,
            r,
            steps,
            a_cols,
            pa,
            pb,
            pc,
            m,
            w,
            k,
            bound,
        })
    }

    fn y_at_bits(&self, bits: u64) -> Vec<BigInt> {
        let mut y = vec![BigInt::zero(); self.r];
        for i in 0..self.n {
            let sign = if bits >> i & 1 == 1 { 1 } else { -1 };
            for j in 0..self.r {
                if sign == 1 {
                    y[j] += &self.a_cols[i][j];
                } else {
                    y[j] -= &self.a_cols[i][j];
                }
            }
        }
        y
    }
}

fn run_vec<T: WalkInt>(sc: &ScaledVec, opts: &EnumOptions) -> u64 {
    let r = sc.r;
    let steps: Vec<Vec<T>> = sc
        .steps
        .iter()
        .map(|col| col.iter().map(|x| T::from_bigint(x)).collect())
        .collect();
    let pa: Vec<T> = sc.pa.iter().map(|x| T::from_bigint(x)).collect();
    let pb: Vec<T> = sc.pb.iter().map(|x| T::from_bigint(x)).collect();
    let pc = T::from_bigint(&sc.pc);
    let m: Vec<T> = sc.m.iter().map(|x| T::from_bigint(x)).collect();
    let w: Vec<T> = sc.w.iter().map(|x| T::from_bigint(x)).collect();

    let in_quadric = |y: &[T]| -> bool {
        for row in 0..sc.k {
            let mut acc = T::zero();
            for j in 0..r {
                if !m[row * r + j].is_zero() {
                    acc.add_assign_ref(&m[row * r + j].mul_ref(&y[j]));
                }
            }
            acc.sub_assign_ref(&w[row]);
            if !acc.is_zero() {
                return false;
            }
        }
        let mut acc = pc.clone();
        for p in 0..r {
            if !pb[p].is_zero() {
                acc.add_assign_ref(&pb[p].mul_ref(&y[p]));
            }
            for q in 0..r {
                if !pa[p * r + q].is_zero() {
                    acc.add_assign_ref(&pa[p * r + q].mul_ref(&y[p]).mul_ref(&y[q]));
                }
            }
        }
        acc.is_zero()
    };

    let p = opts.blocks_for(sc.n);
    let starts = block_starts(sc.n, p);
    let run_one = |start: u64| -> u64 {
        let mut y: Vec<T> = sc
            .y_at_bits(start)
            .iter()
            .map(|x| T::from_bigint(x))
            .collect();
        let mut bits = start;
        let mut count = if in_quadric(&y) { 1u64 } else { 0 };
        gray_walk(sc.n - p, |i| {
            let s_plus = bits >> i & 1 == 1;
            for j in 0..r {
                if s_plus {
                    y[j].sub_assign_ref(&steps[i][j]);
                } else {
                    y[j].add_assign_ref(&steps[i][j]);
                }
            }
            bits ^= 1 << i;
            if in_quadric(&y) {
                count += 1;
            }
        });
        count
    };

    if p == 0 {
        run_one(starts[0])
    } else {
        starts.par_iter().map(|&s| run_one(s)).sum()
    }
}

/// Exact Pr[sum_i xi_i a_i lies in Z].
pub fn vector_event_prob(
    vectors: &[Vec<Rational>],
    z: &QuadricSpec,
    opts: &EnumOptions,
) -> Result<DyadicProb> {
    let n = vectors.len();
    if n > opts.cap || n >= 64 {
        return Err(Error::EnumerationCapExceeded {
            needed: n,
            cap: opts.cap.min(63),
        });
    }
    let sc = ScaledVec::build(vectors, z)?;
    let count = if fits_i128(&sc.bound) {
        run_vec::<i128>(&sc, opts)
    } else {
        run_vec::<BigInt>(&sc, opts)
    };
    Ok(DyadicProb::dyadic(count, n))
}
