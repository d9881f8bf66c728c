//! Constructive splitting of the index set: partitions `[n] = I u J` so that
//! `(M[.xI], M[.xJ], A[JxI])` carries floor(s/(4k+8)) disjoint robust-rank-2
//! pairs, each found by zeroing rows and columns with a perturbation,
//! locating a nonzero off-diagonal entry, adjusting diagonals, and growing a
//! nonsingular 2x2 block.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::RatMatrix;
use crate::error::{Error, Result};
use crate::num::{rat, Rational};
use crate::rank::elim::{inverse, rank};
use crate::rank::perturb::{verify_m_cert, MCert};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SplitResult {
    /// Global column indices forming I (sorted); J is the complement.
    pub i_set: Vec<usize>,
    pub j_set: Vec<usize>,
    /// Achieved robustness parameter: the number of disjoint pairs.
    pub ell: usize,
    /// Certificate over local positions: I_t indexes into `i_set`, J_t into
    /// `j_set`.
    pub cert: MCert,
    /// The same pairs in global indices, for readability.
    pub pairs_global: Vec<(Vec<usize>, Vec<usize>)>,
}

impl SplitResult {
    /// Re-verifies the certificate against M and A from scratch.
    pub fn verify(&self, m: &RatMatrix, a: &RatMatrix) -> Result<bool> {
        let t = m.select_cols(&self.i_set);
        let u = m.select_cols(&self.j_set);
        let a_sub = a.submatrix(&self.j_set, &self.i_set);
        verify_m_cert(&t, &u, &a_sub, &self.cert)
    }
}

/// Greedy lowest-index independent k-subset of M's columns within `avail`.
fn greedy_core(m: &RatMatrix, avail: &[usize], exclude: &[usize], k: usize) -> Option<Vec<usize>> {
    let mut chosen = Vec::with_capacity(k);
    if k == 0 {
        return Some(chosen);
    }
    for &j in avail {
        if exclude.contains(&j) {
            continue;
        }
        let mut candidate = chosen.clone();
        candidate.push(j);
        if rank(&m.select_cols(&candidate)) == candidate.len() {
            chosen = candidate;
            if chosen.len() == k {
                return Some(chosen);
            }
        }
    }
    None
}

/// The (M,M)-perturbation of A that zeroes all columns in `cols` and all rows
/// in `rows`, given nonsingular core submatrices M[.xcols] and M[.xrows].
fn zeroing_perturbation(
    a: &RatMatrix,
    m: &RatMatrix,
    cols: &[usize],
    rows: &[usize],
) -> Result<RatMatrix> {
    if m.rows() == 0 {
        return Ok(a.clone());
    }
    let n = a.rows();
    let all: Vec<usize> = (0..n).collect();
    // L = -A[.xcols] inv(M[.xcols]) kills the columns of cols in A + L M.
    let m_cols_inv = inverse(&m.select_cols(cols))?;
    let l = a.submatrix(&all, cols).mul(&m_cols_inv)?.scale(&rat(-1));
    let b = a.add(&l.mul(m)?)?;
    // R = -inv(M[.xrows]^T) B[rows x .] kills those rows of B + M^T R, and
    // leaves the zeroed columns intact because B[rows x cols] is already zero.
    let m_rows_inv_t = inverse(&m.select_cols(rows).transpose())?;
    let r = m_rows_inv_t.mul(&b.submatrix(rows, &all))?.scale(&rat(-1));
    b.add(&m.transpose().mul(&r)?)
}

/// One pair (I_t, J_t) within `avail`, following the augmenting construction.
fn find_split_pair(
    m: &RatMatrix,
    a: &RatMatrix,
    avail: &[usize],
) -> Result<(Vec<usize>, Vec<usize>)> {
    let k = m.rows();
    let core_i = greedy_core(m, avail, &[], k).ok_or_else(|| Error::HypothesisViolated {
        set: avail.to_vec(),
        reason: "no nonsingular k x k submatrix of M among the available columns".into(),
    })?;
    let core_j =
        greedy_core(m, avail, &core_i, k).ok_or_else(|| Error::HypothesisViolated {
            set: avail.to_vec(),
            reason: "no second disjoint nonsingular k x k submatrix of M".into(),
        })?;

    let a_prime = zeroing_perturbation(a, m, &core_i, &core_j)?;
    let rest: Vec<usize> = avail
        .iter()
        .copied()
        .filter(|x| !core_i.contains(x) && !core_j.contains(x))
        .collect();

    // Lexicographically first nonzero off-diagonal entry a'_{j,i} on rest x rest.
    let mut pivot: Option<(usize, usize)> = None;
    'outer: for &j in &rest {
        for &i in &rest {
            if i != j && !a_prime[(j, i)].is_zero() {
                pivot = Some((j, i));
                break 'outer;
            }
        }
    }
    let Some((j, i)) = pivot else {
        return Err(Error::HypothesisViolated {
            set: rest,
            reason: "every off-diagonal entry of the perturbed matrix vanishes on this set".into(),
        });
    };

    // Adjust each free diagonal entry so the 2x2 minor on {j,h} x {i,h} is
    // singular: a*_{h,h} = a'_{j,h} a'_{h,i} / a'_{j,i} (the pivot is nonzero,
    // so the equation always solves).
    let mut a_star = a_prime.clone();
    for &h in &rest {
        if h != i && h != j {
            let v = &a_prime[(j, h)] * &a_prime[(h, i)] / &a_prime[(j, i)];
            a_star[(h, h)] = v;
        }
    }

    let rest_minus_j: Vec<usize> = rest.iter().copied().filter(|&x| x != j).collect();
    let j_prime = rest
        .iter()
        .copied()
        .filter(|&x| x != i && x != j)
        .find(|&jp| rank(&a_star.submatrix(&[j, jp], &rest_minus_j)) == 2)
        .ok_or_else(|| Error::HypothesisViolated {
            set: rest.clone(),
            reason: "no row extends the pivot row to rank 2 after diagonal adjustment".into(),
        })?;
    let i_prime = rest
        .iter()
        .copied()
        .filter(|&x| x != i && x != j)
        .find(|&ip| rank(&a_star.submatrix(&[j, j_prime], &[i, ip])) == 2)
        .ok_or_else(|| Error::HypothesisViolated {
            set: rest.clone(),
            reason: "no column extends the pivot to a nonsingular 2 x 2 block".into(),
        })?;
    debug_assert_ne!(j_prime, i_prime, "the adjusted diagonals rule this out");

    let mut i_set = core_i;
    i_set.extend([i, i_prime]);
    i_set.sort_unstable();
    let mut j_set = core_j;
    j_set.extend([j, j_prime]);
    j_set.sort_unstable();

    // Full-rank check of the (2k+2) x (2k+2) block built from the original A.
    let block = a
        .submatrix(&j_set, &i_set)
        .hstack(&m.select_cols(&j_set).transpose())?
        .vstack(&m.select_cols(&i_set).hstack(&RatMatrix::zero(k, k))?)?;
    if rank(&block) != 2 * k + 2 {
        return Err(Error::HypothesisViolated {
            set: i_set,
            reason: "constructed block is rank-deficient".into(),
        });
    }
    Ok((i_set, j_set))
}

/// Splits `[n] = I u J` with `|I| <= s` so that the triple
/// `(M[.xI], M[.xJ], A[JxI])` certifiably carries ell = floor(s/(4k+8))
/// disjoint robust-rank-2 pairs.
///
/// The quantitative hypothesis on A (robust rank 2 of every diagonal
/// modification of every (M,M)-perturbation) is taken on trust; when it
/// fails, the construction reports the violating index set.
pub fn matrix_split(m: &RatMatrix, a: &RatMatrix, s: &Rational) -> Result<SplitResult> {
    let k = m.rows();
    let n = m.cols();
    if a.rows() != n || a.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "A is {}x{}, M has {} columns",
            a.rows(),
            a.cols(),
            n
        )));
    }
    if !a.is_symmetric() {
        return Err(Error::InvalidParameter("A must be symmetric".into()));
    }
    let denom = rat(4 * k as i64 + 8);
    if *s < denom {
        return Err(Error::InvalidParameter(format!(
            "s = {s} is below the threshold 4k+8 = {denom}"
        )));
    }
    if s.is_negative() {
        return Err(Error::InvalidParameter("s must be nonnegative".into()));
    }
    let ell_big = (s / &denom).floor().to_integer();
    let ell = usize::try_from(&ell_big)
        .map_err(|_| Error::InvalidParameter(format!("ell = {ell_big} is out of range")))?;

    let mut avail: Vec<usize> = (0..n).collect();
    let mut pairs_global = Vec::with_capacity(ell);
    for _ in 0..ell {
        let (i_set, j_set) = find_split_pair(m, a, &avail)?;
        avail.retain(|x| !i_set.contains(x) && !j_set.contains(x));
        pairs_global.push((i_set, j_set));
    }

    let mut i_all: Vec<usize> = pairs_global
        .iter()
        .flat_map(|(i_set, _)| i_set.iter().copied())
        .collect();
    i_all.sort_unstable();
    let j_all: Vec<usize> = (0..n).filter(|x| !i_all.contains(x)).collect();

    debug_assert!(Rational::from_integer((i_all.len() as i64).into()) <= *s);

    let local = |set: &[usize], universe: &[usize]| -> Vec<usize> {
        set.iter()
            .map(|x| universe.binary_search(x).expect("subset of universe"))
            .collect()
    };
    let cert = MCert {
        k,
        r: 2,
        s: ell,
        pairs: pairs_global
            .iter()
            .map(|(i_set, j_set)| (local(i_set, &i_all), local(j_set, &j_all)))
            .collect(),
    };
    Ok(SplitResult {
        i_set: i_all,
        j_set: j_all,
        ell,
        cert,
        pairs_global,
    })
}
