//! Exact Gaussian elimination over the rationals: rank, kernel, solving,
//! inversion. Pivoting is deterministic (first nonzero entry scanning rows in
//! order), so every caller gets reproducible results.

use num_traits::{One, Zero};

use crate::algebra::matrix::RatMatrix;
use crate::error::{Error, Result};
use crate::num::Rational;

/// Reduced row-echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub mat: RatMatrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

pub fn rref(m: &RatMatrix) -> Rref {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                let tmp = a[(p, j)].clone();
                a[(p, j)] = a[(r, j)].clone();
                a[(r, j)] = tmp;
            }
        }
        let inv = a[(r, c)].clone().recip();
        for j in c..cols {
            let v = &a[(r, j)] * &inv;
            a[(r, j)] = v;
        }
        for i in 0..rows {
            if i != r && !a[(i, c)].is_zero() {
                let f = a[(i, c)].clone();
                for j in c..cols {
                    let v = &a[(i, j)] - &f * &a[(r, j)];
                    a[(i, j)] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { mat: a, pivots }
}

pub fn rank(m: &RatMatrix) -> usize {
    rref(m).rank()
}

/// Exact rank and a basis of the right kernel {x : Mx = 0}.
pub fn rank_and_kernel(m: &RatMatrix) -> (usize, Vec<Vec<Rational>>) {
    let red = rref(m);
    let cols = m.cols();
    let pivots = &red.pivots;
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; cols];
        for &c in pivots {
            v[c] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..cols {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![Rational::zero(); cols];
        v[free] = Rational::one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -red.mat[(i, free)].clone();
        }
        basis.push(v);
    }
    (pivots.len(), basis)
}

/// Solves A X = B exactly, if a solution exists.
pub fn solve_right(a: &RatMatrix, b: &RatMatrix) -> Result<Option<RatMatrix>> {
    if a.rows() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "solve {}x{} X = {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let aug = a.hstack(b)?;
    let red = rref(&aug);
    let n = a.cols();
    // No pivot may fall in the appended block.
    if red.pivots.iter().any(|&c| c >= n) {
        return Ok(None);
    }
    let mut x = RatMatrix::zero(n, b.cols());
    for (i, &pc) in red.pivots.iter().enumerate() {
        for j in 0..b.cols() {
            x[(pc, j)] = red.mat[(i, n + j)].clone();
        }
    }
    Ok(Some(x))
}

/// Inverse of a square nonsingular matrix.
pub fn inverse(a: &RatMatrix) -> Result<RatMatrix> {
    if a.rows() != a.cols() {
        return Err(Error::DimensionMismatch(format!(
            "inverse of {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    solve_right(a, &RatMatrix::identity(a.rows()))?
        .ok_or_else(|| Error::InvalidParameter("matrix is singular".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    #[test]
    fn identity_has_full_rank_and_trivial_kernel() {
        let (r, k) = rank_and_kernel(&RatMatrix::identity(3));
        assert_eq!(r, 3);
        assert!(k.is_empty());
    }

    #[test]
    fn zero_matrix_kernel_is_standard_basis() {
        let (r, k) = rank_and_kernel(&RatMatrix::zero(2, 3));
        assert_eq!(r, 0);
        assert_eq!(k.len(), 3);
        for (i, v) in k.iter().enumerate() {
            for (j, x) in v.iter().enumerate() {
                assert_eq!(*x, if i == j { rat(1) } else { rat(0) });
            }
        }
    }

    #[test]
    fn hand_elimination_example() {
        let m = RatMatrix::from_i64(&[&[1, 1, 1, 1], &[1, 1, 0, 0]]);
        let (r, k) = rank_and_kernel(&m);
        assert_eq!(r, 2);
        assert_eq!(k.len(), 2);
        for v in &k {
            let out = m.mul_vec(v).unwrap();
            assert!(out.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn empty_matrix_rank() {
        let (r, k) = rank_and_kernel(&RatMatrix::empty(4));
        assert_eq!(r, 0);
        assert_eq!(k.len(), 4);
    }

    #[test]
    fn solve_and_inverse() {
        let a = RatMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = inverse(&a).unwrap();
        assert_eq!(a.mul(&inv).unwrap(), RatMatrix::identity(2));
        let b = RatMatrix::from_i64(&[&[1], &[1]]);
        let x = solve_right(&a, &b).unwrap().unwrap();
        assert_eq!(a.mul(&x).unwrap(), b);
        // inconsistent system
        let sing = RatMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        let bad = RatMatrix::from_i64(&[&[0], &[1]]);
        assert!(solve_right(&sing, &bad).unwrap().is_none());
        assert!(inverse(&sing).is_err());
    }
}
