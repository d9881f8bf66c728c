//! The exact distribution of Q(xi) on {-1,1}^n, optionally restricted to a
//! fiber {M xi = w}, computed by a Gray-code walk with O(n) work per point.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::algebra::{LinearConstraint, QuadPoly};
use crate::engine::walk::{block_starts, clear_denominators, fits_i128, gray_walk, WalkInt};
use crate::engine::{DyadicProb, EnumOptions};
use crate::error::{Error, Result};
use crate::num::Rational;

/// Exact histogram of Q(xi) values. With a constraint, only fiber points are
/// recorded, so the counts sum to 2^n * Pr[M xi = w] while `total` stays 2^n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomHistogram {
    pub atoms: BTreeMap<Rational, BigUint>,
    pub total: BigUint,
}

impl AtomHistogram {
    pub fn satisfied_count(&self) -> BigUint {
        self.atoms.values().sum()
    }

    pub fn point_prob(&self, z: &Rational) -> DyadicProb {
        let count = self.atoms.get(z).cloned().unwrap_or_else(BigUint::zero);
        DyadicProb::new(count, self.total.clone())
    }

    /// Argmax atom with ties broken towards the smallest value.
    pub fn sup_point_prob(&self) -> Option<(Rational, DyadicProb)> {
        let mut best: Option<(&Rational, &BigUint)> = None;
        for (z, c) in &self.atoms {
            if best.is_none_or(|(_, bc)| c > bc) {
                best = Some((z, c));
            }
        }
        best.map(|(z, c)| (z.clone(), DyadicProb::new(c.clone(), self.total.clone())))
    }
}

/// Q and constraint with denominators cleared; value(x) = int value / denom.
struct Scaled {
    n: usize,
    a: Vec<BigInt>,
    b: Vec<BigInt>,
    c: BigInt,
    denom: BigInt,
    m: Vec<BigInt>,
    w: Vec<BigInt>,
    k: usize,
    bound: BigInt,
}

impl Scaled {
    fn build(q: &QuadPoly, cons: Option<&LinearConstraint>) -> Result<Scaled> {
        let n = q.n();
        let (k, m_rows, w) = match cons {
            Some(c) => {
                if c.n() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "constraint on {} variables, polynomial has {}",
                        c.n(),
                        n
                    )));
                }
                (c.k(), Some(&c.m), c.w.clone())
            }
            None => (0, None, Vec::new()),
        };

        let mut refs: Vec<&Rational> = Vec::with_capacity(n * n + n + 1);
        refs.extend(q.quad_matrix().entries());
        refs.extend(q.linear());
        refs.push(q.constant_term());
        let (ints, denom) = clear_denominators(&refs);
        let a = ints[..n * n].to_vec();
        let b = ints[n * n..n * n + n].to_vec();
        let c = ints[n * n + n].clone();

        let (m, w) = if let Some(mat) = m_rows {
            let mut refs: Vec<&Rational> = Vec::with_capacity(k * n + k);
            refs.extend(mat.entries());
            refs.extend(w.iter());
            let (ints, _) = clear_denominators(&refs);
            (ints[..k * n].to_vec(), ints[k * n..].to_vec())
        } else {
            (Vec::new(), Vec::new())
        };

        let mut bound = c.abs() + BigInt::one();
        for x in &a {
            bound += x.abs() * 2;
        }
        for x in &b {
            bound += x.abs();
        }
        for row in 0..k {
            let mut row_bound = w[row].abs();
            for j in 0..n {
                row_bound += m[row * n + j].abs() * 2;
            }
            if row_bound > bound {
                bound = row_bound;
            }
        }
        bound *= 4;

        Ok(Scaled {
            n,
            a,
            b,
            c,
            denom,
            m,
            w,
            k,
            bound,
        })
    }

    fn value_at_bits(&self, bits: u64) -> BigInt {
        let n = self.n;
        let sign = |j: usize| -> i64 {
            if bits >> j & 1 == 1 {
                1
            } else {
                -1
            }
        };
        let mut acc = self.c.clone();
        for i in 0..n {
            acc += &self.a[i * n + i];
            if sign(i) == 1 {
                acc += &self.b[i];
            } else {
                acc -= &self.b[i];
            }
            for j in 0..i {
                let prod = sign(i) * sign(j);
                let two_aij = &self.a[i * n + j] + &self.a[j * n + i];
                if prod == 1 {
                    acc += two_aij;
                } else {
                    acc -= two_aij;
                }
            }
        }
        acc
    }

    fn residuals_at_bits(&self, bits: u64) -> Vec<BigInt> {
        (0..self.k)
            .map(|row| {
                let mut acc = -self.w[row].clone();
                for j in 0..self.n {
                    if bits >> j & 1 == 1 {
                        acc += &self.m[row * self.n + j];
                    } else {
                        acc -= &self.m[row * self.n + j];
                    }
                }
                acc
            })
            .collect()
    }
}

/// Per-block walker state, generic over the integer representation.
struct BlockWalk<'a, T> {
    rows: &'a [Vec<(usize, T)>],
    b: &'a [T],
    cons_cols: &'a [Vec<(usize, T)>],
    bits: u64,
    value: T,
    residuals: Vec<T>,
    nonzero_residuals: usize,
}

impl<'a, T: WalkInt> BlockWalk<'a, T> {
    fn satisfied(&self) -> bool {
        self.nonzero_residuals == 0
    }

    fn flip(&mut self, j: usize) {
        let s_plus = self.bits >> j & 1 == 1;
        let mut inner = self.b[j].clone();
        for (i, coef) in &self.rows[j] {
            if self.bits >> i & 1 == 1 {
                inner.add_assign_ref(coef);
            } else {
                inner.sub_assign_ref(coef);
            }
        }
        inner.double();
        if s_plus {
            self.value.sub_assign_ref(&inner);
        } else {
            self.value.add_assign_ref(&inner);
        }
        for (row, coef2) in &self.cons_cols[j] {
            let was_zero = self.residuals[*row].is_zero();
            if s_plus {
                self.residuals[*row].sub_assign_ref(coef2);
            } else {
                self.residuals[*row].add_assign_ref(coef2);
            }
            let now_zero = self.residuals[*row].is_zero();
            match (was_zero, now_zero) {
                (true, false) => self.nonzero_residuals += 1,
                (false, true) => self.nonzero_residuals -= 1,
                _ => {}
            }
        }
        self.bits ^= 1 << j;
    }
}

fn run_blocks<T: WalkInt>(sc: &Scaled, opts: &EnumOptions) -> HashMap<T, u64> {
    let n = sc.n;
    // Sparse rows of 2*a[j][i] (i != j) and per-column constraint terms 2*m[row][j].
    let rows: Vec<Vec<(usize, T)>> = (0..n)
        .map(|j| {
            (0..n)
                .filter(|&i| i != j && !sc.a[j * n + i].is_zero())
                .map(|i| {
                    let mut v = T::from_bigint(&sc.a[j * n + i]);
                    v.double();
                    (i, v)
                })
                .collect()
        })
        .collect();
    let b: Vec<T> = sc.b.iter().map(|x| T::from_bigint(x)).collect();
    let cons_cols: Vec<Vec<(usize, T)>> = (0..n)
        .map(|j| {
            (0..sc.k)
                .filter(|&row| !sc.m[row * n + j].is_zero())
                .map(|row| {
                    let mut v = T::from_bigint(&sc.m[row * n + j]);
                    v.double();
                    (row, v)
                })
                .collect()
        })
        .collect();

    let p = opts.blocks_for(n);
    let starts = block_starts(n, p);
    let run_one = |start: u64| -> HashMap<T, u64> {
        let residuals: Vec<T> = sc
            .residuals_at_bits(start)
            .iter()
            .map(|x| T::from_bigint(x))
            .collect();
        let nonzero_residuals = residuals.iter().filter(|r| !r.is_zero()).count();
        let mut walkstate = BlockWalk {
            rows: &rows,
            b: &b,
            cons_cols: &cons_cols,
            bits: start,
            value: T::from_bigint(&sc.value_at_bits(start)),
            residuals,
            nonzero_residuals,
        };
        let mut map: HashMap<T, u64> = HashMap::new();
        if walkstate.satisfied() {
            *map.entry(walkstate.value.clone()).or_insert(0) += 1;
        }
        gray_walk(n - p, |j| {
            walkstate.flip(j);
            if walkstate.satisfied() {
                *map.entry(walkstate.value.clone()).or_insert(0) += 1;
            }
        });
        map
    };

    if p == 0 {
        run_one(starts[0])
    } else {
        starts
            .par_iter()
            .map(|&s| run_one(s))
            .reduce(HashMap::new, |mut acc, m| {
                for (k, v) in m {
                    *acc.entry(k).or_insert(0) += v;
                }
                acc
            })
    }
}

/// Exact distribution of Q(xi) restricted to {xi : M xi = w}; total = 2^n.
pub fn histogram(
    q: &QuadPoly,
    cons: Option<&LinearConstraint>,
    opts: &EnumOptions,
) -> Result<AtomHistogram> {
    let n = q.n();
    if n > opts.cap || n >= 64 {
        return Err(Error::EnumerationCapExceeded {
            needed: n,
            cap: opts.cap.min(63),
        });
    }
    let sc = Scaled::build(q, cons)?;
    let raw: HashMap<BigInt, u64> = if fits_i128(&sc.bound) {
        run_blocks::<i128>(&sc, opts)
            .into_iter()
            .map(|(k, v)| (BigInt::from(k), v))
            .collect()
    } else {
        run_blocks::<BigInt>(&sc, opts)
    };
    let mut atoms = BTreeMap::new();
    for (scaled_value, count) in raw {
        atoms.insert(
            Rational::new(scaled_value, sc.denom.clone()),
            BigUint::from(count),
        );
    }
    Ok(AtomHistogram {
        atoms,
        total: BigUint::one() << n,
    })
}

/// Argmax atom of the unconstrained distribution and its exact probability;
/// ties broken by the smallest value.
pub fn sup_point_prob(q: &QuadPoly, opts: &EnumOptions) -> Result<(Rational, DyadicProb)> {
    let hist = histogram(q, None, opts)?;
    Ok(hist
        .sup_point_prob()
        .expect("unconstrained histogram is nonempty"))
}

/// Exact Pr[M xi = w].
pub fn linear_system_prob(cons: &LinearConstraint, opts: &EnumOptions) -> Result<DyadicProb> {
    let n = cons.n();
    if n > opts.cap || n >= 64 {
        return Err(Error::EnumerationCapExceeded {
            needed: n,
            cap: opts.cap.min(63),
        });
    }
    if cons.k() == 0 {
        return Ok(DyadicProb::dyadic(BigUint::one() << n, n));
    }
    let hist = histogram(&QuadPoly::zero(n), Some(cons), opts)?;
    Ok(DyadicProb::new(hist.satisfied_count(), hist.total))
}
