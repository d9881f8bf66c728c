//! Quadratic polynomials Q(x) = x^T A x + b^T x + c with exact rational
//! coefficients, and packed sign vectors in {-1,1}^n.
//!
//! The quadratic part is stored as the full symmetric matrix A, so the
//! coefficient of the monomial x_i x_j (i != j) is `2 A[i,j]`. Input formats
//! give monomial coefficients and are converted on ingest.

use num_traits::Zero;

use crate::algebra::matrix::RatMatrix;
use crate::error::{Error, Result};
use crate::num::{rat, Rational};

/// A point of the hypercube {-1,1}^n, bit j set <=> xi_j = +1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignVector {
    n: usize,
    bits: u64,
}

impl SignVector {
    pub fn new(n: usize, bits: u64) -> Self {
        assert!(n <= 64, "sign vectors are packed into 64 bits");
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        SignVector {
            n,
            bits: bits & mask,
        }
    }

    pub fn all_plus(n: usize) -> Self {
        Self::new(n, u64::MAX)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// +1 or -1.
    pub fn sign(&self, j: usize) -> i64 {
        debug_assert!(j < self.n);
        if self.bits >> j & 1 == 1 {
            1
        } else {
            -1
        }
    }

    pub fn flipped(&self, j: usize) -> Self {
        debug_assert!(j < self.n);
        SignVector {
            n: self.n,
            bits: self.bits ^ (1 << j),
        }
    }

    pub fn signs(&self) -> Vec<i64> {
        (0..self.n).map(|j| self.sign(j)).collect()
    }

    pub fn to_rationals(&self) -> Vec<Rational> {
        (0..self.n).map(|j| rat(self.sign(j))).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadPoly {
    n: usize,
    a: RatMatrix,
    b: Vec<Rational>,
    c: Rational,
}

impl QuadPoly {
    pub fn new(a: RatMatrix, b: Vec<Rational>, c: Rational) -> Result<Self> {
        let n = a.rows();
        if a.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "quadratic part must be square, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        if b.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "linear part has length {}, expected {}",
                b.len(),
                n
            )));
        }
        if !a.is_symmetric() {
            return Err(Error::InvalidParameter(
                "quadratic part must be symmetric".into(),
            ));
        }
        Ok(QuadPoly { n, a, b, c })
    }

    pub fn zero(n: usize) -> Self {
        QuadPoly {
            n,
            a: RatMatrix::zero(n, n),
            b: vec![Rational::zero(); n],
            c: Rational::zero(),
        }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        let mut q = Self::zero(n);
        q.c = c;
        q
    }

    /// Builds from monomial coefficients: `quad` holds (i, j, coeff of x_i x_j)
    /// with i <= j. Off-diagonal monomial coefficients split evenly across
    /// `A[i,j]` and `A[j,i]`.
    pub fn from_monomials(
        n: usize,
        quad: &[(usize, usize, Rational)],
        lin: &[(usize, Rational)],
        c: Rational,
    ) -> Result<Self> {
        let mut a = RatMatrix::zero(n, n);
        for (i, j, coeff) in quad {
            let (i, j) = (*i, *j);
            if i > j {
                return Err(Error::InvalidParameter(format!(
                    "monomial indices must satisfy i <= j, got ({i}, {j})"
                )));
            }
            if j >= n {
                return Err(Error::IndexOutOfRange { index: j, dim: n });
            }
            if i == j {
                a[(i, i)] += coeff;
            } else {
                let half = coeff / rat(2);
                a[(i, j)] += &half;
                a[(j, i)] += &half;
            }
        }
        let mut b = vec![Rational::zero(); n];
        for (i, coeff) in lin {
            if *i >= n {
                return Err(Error::IndexOutOfRange { index: *i, dim: n });
            }
            b[*i] += coeff;
        }
        QuadPoly::new(a, b, c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn quad_matrix(&self) -> &RatMatrix {
        &self.a
    }

    pub fn linear(&self) -> &[Rational] {
        &self.b
    }

    pub fn constant_term(&self) -> &Rational {
        &self.c
    }

    pub fn is_constant(&self) -> bool {
        self.a.is_zero() && self.b.iter().all(Zero::is_zero)
    }

    /// Some(v) iff Q is constant as a function on {-1,1}^n. Diagonal entries
    /// of A survive the test (xi_i^2 = 1 turns them into constants), so
    /// v = c + trace(A) with all other coefficients zero.
    pub fn cube_constant_value(&self) -> Option<Rational> {
        for i in 0..self.n {
            if !self.b[i].is_zero() {
                return None;
            }
            for j in 0..self.n {
                if i != j && !self.a[(i, j)].is_zero() {
                    return None;
                }
            }
        }
        let mut v = self.c.clone();
        for i in 0..self.n {
            v += &self.a[(i, i)];
        }
        Some(v)
    }

    /// Monomial coefficient of x_i x_j for i <= j (`2 A[i,j]` off the diagonal).
    pub fn monomial_coeff(&self, i: usize, j: usize) -> Rational {
        debug_assert!(i <= j);
        if i == j {
            self.a[(i, i)].clone()
        } else {
            &self.a[(i, j)] + &self.a[(j, i)]
        }
    }

    /// Q(x) at a hypercube point.
    pub fn eval(&self, x: &SignVector) -> Result<Rational> {
        if x.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, polynomial has {}",
                x.n(),
                self.n
            )));
        }
        let mut acc = self.c.clone();
        for i in 0..self.n {
            let si = x.sign(i);
            // Diagonal terms contribute A[i,i] regardless of the sign.
            acc += &self.a[(i, i)];
            if si == 1 {
                acc += &self.b[i];
            } else {
                acc -= &self.b[i];
            }
            for j in 0..i {
                if self.a[(i, j)].is_zero() {
                    continue;
                }
                let prod = si * x.sign(j);
                let two_aij = &self.a[(i, j)] + &self.a[(j, i)];
                if prod == 1 {
                    acc += two_aij;
                } else {
                    acc -= two_aij;
                }
            }
        }
        Ok(acc)
    }

    /// Q(x) at an arbitrary rational point.
    pub fn eval_rat(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, polynomial has {}",
                x.len(),
                self.n
            )));
        }
        let ax = self.a.mul_vec(x)?;
        let mut acc = self.c.clone();
        for i in 0..self.n {
            acc += &x[i] * &ax[i];
            acc += &self.b[i] * &x[i];
        }
        Ok(acc)
    }

    /// Q(x with bit j flipped) - Q(x), in O(n).
    ///
    /// Since xi_j^2 is unchanged by the flip, the diagonal never contributes:
    /// the delta is `-2 xi_j (2 sum_{i != j} A[j,i] xi_i + b[j])`.
    pub fn flip_delta(&self, x: &SignVector, j: usize) -> Result<Rational> {
        if x.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, polynomial has {}",
                x.n(),
                self.n
            )));
        }
        if j >= self.n {
            return Err(Error::IndexOutOfRange {
                index: j,
                dim: self.n,
            });
        }
        let mut inner = self.b[j].clone();
        for i in 0..self.n {
            if i != j && !self.a[(j, i)].is_zero() {
                let term = &self.a[(j, i)] * rat(2 * x.sign(i));
                inner += term;
            }
        }
        Ok(inner * rat(-2 * x.sign(j)))
    }

    /// Substitutes fixed rational values for the variables listed in `fixed`
    /// and returns the polynomial in the remaining variables (order
    /// preserved), together with the index map back into the original
    /// variables.
    pub fn substitute(&self, fixed: &[(usize, Rational)]) -> Result<(QuadPoly, Vec<usize>)> {
        let mut value = vec![None; self.n];
        for (i, v) in fixed {
            if *i >= self.n {
                return Err(Error::IndexOutOfRange {
                    index: *i,
                    dim: self.n,
                });
            }
            value[*i] = Some(v.clone());
        }
        let free: Vec<usize> = (0..self.n).filter(|i| value[*i].is_none()).collect();
        let m = free.len();
        let mut a = RatMatrix::zero(m, m);
        for (p, &i) in free.iter().enumerate() {
            for (q, &j) in free.iter().enumerate() {
                a[(p, q)] = self.a[(i, j)].clone();
            }
        }
        let mut b = Vec::with_capacity(m);
        for &i in &free {
            let mut coeff = self.b[i].clone();
            for j in 0..self.n {
                if let Some(v) = &value[j] {
                    coeff += (&self.a[(i, j)] + &self.a[(j, i)]) * v;
                }
            }
            b.push(coeff);
        }
        let mut c = self.c.clone();
        for i in 0..self.n {
            if let Some(vi) = &value[i] {
                c += &self.b[i] * vi;
                for j in 0..self.n {
                    if let Some(vj) = &value[j] {
                        c += &self.a[(i, j)] * vi * vj;
                    }
                }
            }
        }
        Ok((QuadPoly { n: m, a, b, c }, free))
    }
}

/// Perturbation-equivalent polynomial: given Q with quadratic part A,
/// replaces it by
/// A* = A + L M + M^T R + diag(D) and corrects the linear and constant terms
/// so that Q*(xi) = Q(xi) on every sign vector with M xi = w.
pub fn perturb_equivalent(
    q: &QuadPoly,
    m: &RatMatrix,
    w: &[Rational],
    l: &RatMatrix,
    r: &RatMatrix,
    d: &[Rational],
) -> Result<QuadPoly> {
    let n = q.n();
    let k = m.rows();
    if m.cols() != n || l.rows() != n || l.cols() != k || r.rows() != k || r.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "perturbation shapes: M {}x{}, L {}x{}, R {}x{} for n = {n}, k = {k}",
            m.rows(),
            m.cols(),
            l.rows(),
            l.cols(),
            r.rows(),
            r.cols()
        )));
    }
    if w.len() != k || d.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "w has length {} (want {k}), D has length {} (want {n})",
            w.len(),
            d.len()
        )));
    }

    let lm = l.mul(m)?;
    let mtr = m.transpose().mul(r)?;
    let mut a_star = q.quad_matrix().add(&lm)?.add(&mtr)?;
    for (i, di) in d.iter().enumerate() {
        a_star[(i, i)] += di;
    }

    // b* = b - (L + R^T) w, c* = c - sum(D).
    let lw = l.mul_vec(w)?;
    let rtw = r.transpose().mul_vec(w)?;
    let b_star: Vec<Rational> = q
        .linear()
        .iter()
        .zip(lw.iter().zip(rtw.iter()))
        .map(|(bi, (lwi, rwi))| bi - lwi - rwi)
        .collect();
    let mut c_star = q.constant_term().clone();
    for di in d {
        c_star -= di;
    }

    // The construction is symmetric only when L M + M^T R + diag(D) is; the
    // quadratic form x^T A* x is well-defined either way, so symmetrize.
    let sym = a_star.add(&a_star.transpose())?.scale(&crate::num::ratio(1, 2));
    QuadPoly::new(sym, b_star, c_star)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::ratio;

    fn x1x2() -> QuadPoly {
        QuadPoly::from_monomials(2, &[(0, 1, rat(1))], &[], rat(0)).unwrap()
    }

    fn sum_sq(n: usize) -> QuadPoly {
        // (x_1 + ... + x_n)^2
        let mut quad = Vec::new();
        for i in 0..n {
            quad.push((i, i, rat(1)));
            for j in i + 1..n {
                quad.push((i, j, rat(2)));
            }
        }
        QuadPoly::from_monomials(n, &quad, &[], rat(0)).unwrap()
    }

    #[test]
    fn eval_examples() {
        // Q = x1*x2 at (+1,+1) -> 1
        let q = x1x2();
        assert_eq!(q.eval(&SignVector::new(2, 0b11)).unwrap(), rat(1));
        // Q = (x1+x2)^2 at (+1,-1) -> 0
        let q = sum_sq(2);
        assert_eq!(q.eval(&SignVector::new(2, 0b01)).unwrap(), rat(0));
        // Q = (1+x1)(x1+x2+x3+x4) with xi_1 = -1 -> 0
        let q = crate::experiments::families::pinned_product(4);
        for bits in 0..8u64 {
            let x = SignVector::new(4, bits << 1); // bit 0 clear: xi_1 = -1
            assert_eq!(q.eval(&x).unwrap(), rat(0));
        }
        // and another fiber point for sanity: all +1 gives 2*4 = 8
        assert_eq!(q.eval(&SignVector::all_plus(4)).unwrap(), rat(8));
    }

    #[test]
    fn eval_dimension_mismatch() {
        let q = x1x2();
        assert!(q.eval(&SignVector::new(3, 0)).is_err());
    }

    #[test]
    fn flip_delta_examples() {
        // Q = x1*x2, x = (+1,+1), flip j=1 (0-based 0): -2
        let q = x1x2();
        let x = SignVector::new(2, 0b11);
        assert_eq!(q.flip_delta(&x, 0).unwrap(), rat(-2));
        // constant polynomial: 0
        let q = QuadPoly::constant(3, ratio(7, 3));
        assert_eq!(
            q.flip_delta(&SignVector::new(3, 0b101), 2).unwrap(),
            rat(0)
        );
        // Q = sum x_i, all +1, flip any -> -2
        let lin: Vec<(usize, Rational)> = (0..5).map(|i| (i, rat(1))).collect();
        let q = QuadPoly::from_monomials(5, &[], &lin, rat(0)).unwrap();
        assert_eq!(q.flip_delta(&SignVector::all_plus(5), 2).unwrap(), rat(-2));
        assert!(q.flip_delta(&SignVector::all_plus(5), 5).is_err());
    }

    #[test]
    fn flip_delta_matches_direct_difference() {
        // exhaustive check on a dense polynomial
        let q = QuadPoly::from_monomials(
            4,
            &[
                (0, 0, ratio(1, 3)),
                (0, 1, ratio(-2, 5)),
                (0, 3, rat(3)),
                (1, 2, ratio(7, 2)),
                (2, 3, rat(-1)),
            ],
            &[(0, ratio(1, 7)), (2, rat(-4))],
            ratio(5, 6),
        )
        .unwrap();
        for bits in 0..16u64 {
            let x = SignVector::new(4, bits);
            for j in 0..4 {
                let direct = q.eval(&x.flipped(j)).unwrap() - q.eval(&x).unwrap();
                assert_eq!(q.flip_delta(&x, j).unwrap(), direct);
            }
        }
    }

    #[test]
    fn substitute_remark_poly() {
        let q = crate::experiments::families::pinned_product(4);
        let (fixed, free) = q.substitute(&[(0, rat(-1))]).unwrap();
        assert_eq!(free, vec![1, 2, 3]);
        assert!(fixed.is_constant());
        assert_eq!(*fixed.constant_term(), rat(0));
    }

    #[test]
    fn perturb_identity_cases() {
        let q = sum_sq(2);
        // k = 0: no perturbation possible, Q* = Q.
        let m = RatMatrix::empty(2);
        let l = RatMatrix::zero(2, 0);
        let r = RatMatrix::empty(2);
        let qs = perturb_equivalent(&q, &m, &[], &l, &r, &[rat(0), rat(0)]).unwrap();
        assert_eq!(qs, q);

        // L = 0, R = 0, D = (lambda, lambda): differs by lambda * sum x_i^2 - n lambda,
        // so values agree on the whole hypercube.
        let lam = ratio(7, 3);
        let qs = perturb_equivalent(
            &q,
            &m,
            &[],
            &l,
            &r,
            &[lam.clone(), lam.clone()],
        )
        .unwrap();
        for bits in 0..4u64 {
            let x = SignVector::new(2, bits);
            assert_eq!(qs.eval(&x).unwrap(), q.eval(&x).unwrap());
        }
        assert_ne!(qs, q);
    }

    #[test]
    fn perturb_kills_quadratic_part_on_fiber() {
        // n = 4, Q = (x1+x2)(x3+x4), M = (1,1,0,0), w = 0: A is an (M,M)-
        // perturbation of 0, so a suitable L,R gives Q* with zero quadratic
        // part agreeing with Q on the fiber {M xi = 0}.
        let q = QuadPoly::from_monomials(
            4,
            &[(0, 2, rat(1)), (0, 3, rat(1)), (1, 2, rat(1)), (1, 3, rat(1))],
            &[],
            rat(0),
        )
        .unwrap();
        let m = RatMatrix::from_i64(&[&[1, 1, 0, 0]]);
        // A = (1/2) * (e1+e2)(e3+e4)^T + (1/2) * (e3+e4)(e1+e2)^T.
        // Pick L = -(1/2)(e3+e4) (n x 1) and R = -(1/2)(e3+e4)^T (1 x n):
        // L M kills the top-right block, M^T R the bottom-left block.
        let l = RatMatrix::from_fn(4, 1, |i, _| {
            if i >= 2 {
                ratio(-1, 2)
            } else {
                rat(0)
            }
        });
        let r = l.transpose();
        let qs = perturb_equivalent(&q, &m, &[rat(0)], &l, &r, &vec![rat(0); 4]).unwrap();
        assert!(qs.quad_matrix().is_zero());
        for bits in 0..16u64 {
            let x = SignVector::new(4, bits);
            let mx: i64 = x.sign(0) + x.sign(1);
            if mx == 0 {
                assert_eq!(qs.eval(&x).unwrap(), q.eval(&x).unwrap());
            }
        }
    }

    #[test]
    fn perturb_agrees_on_constrained_fiber() {
        // Random-ish L, R, D against a nontrivial constraint; full enumeration.
        let q = QuadPoly::from_monomials(
            3,
            &[(0, 1, rat(2)), (1, 2, rat(-3)), (0, 0, rat(1))],
            &[(1, rat(5))],
            ratio(-1, 2),
        )
        .unwrap();
        let m = RatMatrix::from_i64(&[&[1, -1, 2]]);
        let w = vec![rat(2)];
        let l = RatMatrix::from_i64(&[&[3], &[-1], &[2]]);
        let r = RatMatrix::from_i64(&[&[1, 4, -2]]);
        let d = vec![ratio(1, 2), rat(-2), rat(7)];
        let qs = perturb_equivalent(&q, &m, &w, &l, &r, &d).unwrap();
        let mut fiber_hits = 0;
        for bits in 0..8u64 {
            let x = SignVector::new(3, bits);
            let mx = m.mul_vec(&x.to_rationals()).unwrap();
            if mx == w {
                fiber_hits += 1;
                assert_eq!(qs.eval(&x).unwrap(), q.eval(&x).unwrap());
            }
        }
        assert!(fiber_hits > 0, "test fiber should be nonempty");
    }
}
