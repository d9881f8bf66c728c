//! Shared domain types and the purely algebraic constructions: polynomial
//! evaluation, incremental flip deltas, perturbation-equivalent polynomials,
//! square decompositions and quadric translation directions.

pub mod decompose;
pub mod matrix;
pub mod poly;

pub use decompose::{square_decompose, translation_directions};
pub use matrix::RatMatrix;
pub use poly::{perturb_equivalent, QuadPoly, SignVector};

use crate::error::{Error, Result};
use crate::num::Rational;

/// The event "M xi = w"; k = 0 rows encode the vacuous constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub m: RatMatrix,
    pub w: Vec<Rational>,
}

impl LinearConstraint {
    pub fn new(m: RatMatrix, w: Vec<Rational>) -> Result<Self> {
        if w.len() != m.rows() {
            return Err(Error::DimensionMismatch(format!(
                "constraint has {} rows but {} targets",
                m.rows(),
                w.len()
            )));
        }
        Ok(LinearConstraint { m, w })
    }

    pub fn vacuous(n: usize) -> Self {
        LinearConstraint {
            m: RatMatrix::empty(n),
            w: Vec::new(),
        }
    }

    pub fn k(&self) -> usize {
        self.m.rows()
    }

    pub fn n(&self) -> usize {
        self.m.cols()
    }

    pub fn holds_at(&self, x: &SignVector) -> Result<bool> {
        let mx = self.m.mul_vec(&x.to_rationals())?;
        Ok(mx == self.w)
    }
}
