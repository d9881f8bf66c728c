//! Minimum rank over (T,U)-perturbations A + L T + U^T R, and greedy
//! certification of the M_r class from the robust-rank-inheritance setup.

use serde::{Deserialize, Serialize};

use crate::algebra::RatMatrix;
use crate::error::{Error, Result};
use crate::rank::elim::{rank, rank_and_kernel};
use crate::rank::halasz::next_combination;

/// min over L, R of rank(A + L T + U^T R), where A is n x m, T is k x m and
/// U is k x n: the rank of the bilinear form x^T A y restricted to
/// x in ker(U), y in ker(T).
pub fn min_perturbed_rank(a: &RatMatrix, t: &RatMatrix, u: &RatMatrix) -> Result<usize> {
    let (n, m) = (a.rows(), a.cols());
    if t.cols() != m {
        return Err(Error::DimensionMismatch(format!(
            "T has {} columns, A has {}",
            t.cols(),
            m
        )));
    }
    if u.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "U has {} columns, A has {} rows",
            u.cols(),
            n
        )));
    }
    let (_, ker_u) = rank_and_kernel(u);
    let (_, ker_t) = rank_and_kernel(t);
    if ker_u.is_empty() || ker_t.is_empty() {
        return Ok(0);
    }
    let bu = RatMatrix::from_rows(ker_u)?.transpose(); // n x dim
    let bt = RatMatrix::from_rows(ker_t)?.transpose(); // m x dim
    Ok(rank(&bu.transpose().mul(a)?.mul(&bt)?))
}

/// The block identity rank([[A, U^T], [T, 0]]) = rank T + rank U + min rank,
/// valid when T and U have full row rank. Kept as an independent route for
/// cross-checking.
pub fn min_perturbed_rank_block(a: &RatMatrix, t: &RatMatrix, u: &RatMatrix) -> Result<usize> {
    let k_t = t.rows();
    let k_u = u.rows();
    if rank(t) != k_t || rank(u) != k_u {
        return Err(Error::InvalidParameter(
            "block identity needs T and U of full row rank".into(),
        ));
    }
    let top = a.hstack(&u.transpose())?;
    let bottom = t.hstack(&RatMatrix::zero(k_t, k_u))?;
    let block = top.vstack(&bottom)?;
    Ok(rank(&block) - k_t - k_u)
}

/// Success evidence for (T, U, A) in M_r^{k,m,n}(s): s disjoint pairs of
/// index sets of size k+r satisfying the three rank conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MCert {
    pub k: usize,
    pub r: usize,
    pub s: usize,
    /// (I_t subset of columns of T, J_t subset of columns of U).
    pub pairs: Vec<(Vec<usize>, Vec<usize>)>,
}

/// Greedy membership search for the M_r class.
///
/// Greedy in the outer loop: once a pair is claimed it is never revisited.
/// Within one pair the search over extensions is exhaustive in lexicographic
/// order, so success is sound; failure only means the greedy frontier is
/// exhausted (the class may still be nonempty), which callers must treat as
/// "not found" rather than non-membership.
pub fn m_membership(
    t: &RatMatrix,
    u: &RatMatrix,
    a: &RatMatrix,
    r: usize,
    s: usize,
) -> Result<Option<MCert>> {
    let k = t.rows();
    let (n, m) = (a.rows(), a.cols());
    if u.rows() != k {
        return Err(Error::DimensionMismatch(format!(
            "T has {} rows, U has {}",
            k,
            u.rows()
        )));
    }
    if t.cols() != m || u.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "A is {n}x{m} but T has {} columns and U has {}",
            t.cols(),
            u.cols()
        )));
    }
    if r < 1 {
        return Err(Error::InvalidParameter("M_r needs r >= 1".into()));
    }
    if m < k + r || n < k + r {
        return Err(Error::InvalidParameter(format!(
            "index sets of size k+r = {} do not fit in {m} columns / {n} rows",
            k + r
        )));
    }

    let mut avail_i: Vec<usize> = (0..m).collect();
    let mut avail_j: Vec<usize> = (0..n).collect();
    let mut pairs = Vec::with_capacity(s);
    for _ in 0..s {
        match find_pair(t, u, a, r, &avail_i, &avail_j)? {
            Some((i_set, j_set)) => {
                avail_i.retain(|x| !i_set.contains(x));
                avail_j.retain(|x| !j_set.contains(x));
                pairs.push((i_set, j_set));
            }
            None => return Ok(None),
        }
    }
    Ok(Some(MCert { k, r, s, pairs }))
}

/// One greedy pair: a T-independent core, a U-independent core, then the
/// lexicographically first r-extensions on both sides making the perturbed
/// rank condition hold.
fn find_pair(
    t: &RatMatrix,
    u: &RatMatrix,
    a: &RatMatrix,
    r: usize,
    avail_i: &[usize],
    avail_j: &[usize],
) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    let k = t.rows();
    let core_i = greedy_independent(t, avail_i, k);
    let core_j = greedy_independent(u, avail_j, k);
    let (Some(core_i), Some(core_j)) = (core_i, core_j) else {
        return Ok(None);
    };
    let rest_i: Vec<usize> = avail_i.iter().copied().filter(|x| !core_i.contains(x)).collect();
    let rest_j: Vec<usize> = avail_j.iter().copied().filter(|x| !core_j.contains(x)).collect();
    if rest_i.len() < r || rest_j.len() < r {
        return Ok(None);
    }

    let mut pick_i: Vec<usize> = (0..r).collect();
    loop {
        let mut i_set = core_i.clone();
        i_set.extend(pick_i.iter().map(|&p| rest_i[p]));
        i_set.sort_unstable();
        let t_sub = t.select_cols(&i_set);
        if rank(&t_sub) == k {
            let mut pick_j: Vec<usize> = (0..r).collect();
            loop {
                let mut j_set = core_j.clone();
                j_set.extend(pick_j.iter().map(|&p| rest_j[p]));
                j_set.sort_unstable();
                let u_sub = u.select_cols(&j_set);
                if rank(&u_sub) == k
                    && min_perturbed_rank(&a.submatrix(&j_set, &i_set), &t_sub, &u_sub)? >= r
                {
                    return Ok(Some((i_set, j_set)));
                }
                if !next_combination(&mut pick_j, rest_j.len()) {
                    break;
                }
            }
        }
        if !next_combination(&mut pick_i, rest_i.len()) {
            return Ok(None);
        }
    }
}

/// Lowest-index-first independent column subset of the given size.
fn greedy_independent(m: &RatMatrix, avail: &[usize], want: usize) -> Option<Vec<usize>> {
    let mut chosen: Vec<usize> = Vec::with_capacity(want);
    if want == 0 {
        return Some(chosen);
    }
    for &j in avail {
        let mut candidate = chosen.clone();
        candidate.push(j);
        if rank(&m.select_cols(&candidate)) == candidate.len() {
            chosen = candidate;
            if chosen.len() == want {
                return Some(chosen);
            }
        }
    }
    None
}

/// Re-checks conditions (a), (b), (c) for every claimed pair.
pub fn verify_m_cert(
    t: &RatMatrix,
    u: &RatMatrix,
    a: &RatMatrix,
    cert: &MCert,
) -> Result<bool> {
    let k = t.rows();
    if cert.k != k || cert.pairs.len() != cert.s {
        return Ok(false);
    }
    let mut seen_i = std::collections::HashSet::new();
    let mut seen_j = std::collections::HashSet::new();
    for (i_set, j_set) in &cert.pairs {
        if i_set.len() != k + cert.r || j_set.len() != k + cert.r {
            return Ok(false);
        }
        if !i_set.iter().all(|x| seen_i.insert(*x)) || !j_set.iter().all(|x| seen_j.insert(*x)) {
            return Ok(false);
        }
        let t_sub = t.select_cols(i_set);
        let u_sub = u.select_cols(j_set);
        if rank(&t_sub) != k || rank(&u_sub) != k {
            return Ok(false);
        }
        if min_perturbed_rank(&a.submatrix(j_set, i_set), &t_sub, &u_sub)? < cert.r {
            return Ok(false);
        }
    }
    Ok(true)
}
