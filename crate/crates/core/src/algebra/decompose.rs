//! Writing a quadratic form as a signed sum of squares of linear forms
//! (Lagrange reduction over the rationals), and the translation directions
//! that leave a quadratic polynomial invariant.

use num_traits::Zero;

use crate::algebra::matrix::RatMatrix;
use crate::algebra::poly::QuadPoly;
use crate::error::{Error, Result};
use crate::num::{rat, Rational};
use crate::rank::elim::rank_and_kernel;

/// Returns exactly rank(A) pairs (lambda_i, g_i) with
/// sum_i lambda_i (g_i . x)^2 = x^T A x as polynomials, the g_i linearly
/// independent. Each g_i is normalized so its first nonzero coefficient is 1.
pub fn square_decompose(a: &RatMatrix) -> Result<Vec<(Rational, Vec<Rational>)>> {
    if !a.is_symmetric() {
        return Err(Error::InvalidParameter(
            "square_decompose needs a symmetric matrix".into(),
        ));
    }
    let n = a.rows();
    let mut rem = a.clone();
    let mut out: Vec<(Rational, Vec<Rational>)> = Vec::new();

    loop {
        // Prefer a diagonal pivot.
        if let Some(i) = (0..n).find(|&i| !rem[(i, i)].is_zero()) {
            let d = rem[(i, i)].clone();
            let row: Vec<Rational> = rem.row(i).to_vec();
            let g: Vec<Rational> = row.iter().map(|x| x / &d).collect();
            // rem <- rem - row_i^T row_i / d; this zeroes row and column i.
            for p in 0..n {
                for q in 0..n {
                    let delta = &row[p] * &row[q] / &d;
                    rem[(p, q)] -= delta;
                }
            }
            out.push(normalize(d, g));
            continue;
        }
        // All diagonal entries are zero: hyperbolic pivot on an off-diagonal
        // entry, emitting two squares of opposite sign.
        let Some((i, j)) = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !rem[(i, j)].is_zero())
        else {
            break; // remainder is zero
        };
        let d = rem[(i, j)].clone();
        let bi: Vec<Rational> = rem.row(i).to_vec();
        let bj: Vec<Rational> = rem.row(j).to_vec();
        // x^T rem x = (f+g)^2/(2d) - (f-g)^2/(2d) + x^T rem' x with
        // f = <b_i, x>, g = <b_j, x> and rem' = rem - (b_i b_j^T + b_j b_i^T)/d,
        // which has zero rows and columns i and j.
        let sum: Vec<Rational> = bi.iter().zip(&bj).map(|(x, y)| x + y).collect();
        let diff: Vec<Rational> = bi.iter().zip(&bj).map(|(x, y)| x - y).collect();
        let two_d = &d * rat(2);
        for p in 0..n {
            for q in 0..n {
                let delta = (&bi[p] * &bj[q] + &bj[p] * &bi[q]) / &d;
                rem[(p, q)] -= delta;
            }
        }
        out.push(normalize(two_d.clone().recip(), sum));
        out.push(normalize(-two_d.recip(), diff));
    }

    debug_assert!(rem.is_zero());
    Ok(out)
}

/// Folds the leading coefficient into lambda so g is monic.
fn normalize(lambda: Rational, g: Vec<Rational>) -> (Rational, Vec<Rational>) {
    let Some(lead) = g.iter().find(|x| !x.is_zero()).cloned() else {
        return (lambda, g);
    };
    let scaled: Vec<Rational> = g.iter().map(|x| x / &lead).collect();
    (lambda * &lead * &lead, scaled)
}

/// Basis of {v : A v = 0 and b^T v = 0}. Translating the argument of
/// P(x) = x^T A x + b^T x + c along any such v leaves P unchanged (for
/// symmetric A), and along no other direction.
pub fn translation_directions(q: &QuadPoly) -> Vec<Vec<Rational>> {
    let stacked = q
        .quad_matrix()
        .vstack(&RatMatrix::from_fn(1, q.n(), |_, j| q.linear()[j].clone()))
        .expect("row of length n stacks under an n x n matrix");
    rank_and_kernel(&stacked).1
}
