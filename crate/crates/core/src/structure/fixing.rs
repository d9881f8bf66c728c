//! The minimum fixing number: the smallest number of variables whose fixing
//! pins Q to a constant on the remaining cube. A polynomial "robustly depends
//! on at least m variables" exactly when no m-1 of them can be fixed to
//! determine its value, so the extremal m equals this minimum.

use num_traits::{Signed, Zero};

use crate::algebra::{QuadPoly, SignVector};
use crate::engine::general::ProductDist;
use crate::error::{Error, Result};
use crate::num::{rat, Rational};
use crate::rank::halasz::next_combination;
use crate::structure::offdiag::matching_lower_bound;

/// A variable set and assignment that pins Q, with the pinned value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixingWitness {
    pub indices: Vec<usize>,
    pub values: Vec<Rational>,
    pub pinned_value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixingNumber {
    /// The exact minimum, with a minimum witness (empty witness for m = 0).
    Exact { m: usize, witness: FixingWitness },
    /// Brute force refused; the matching bound is a valid lower bound on m.
    Inconclusive { lower_bound: usize },
}

/// Exhaustively computes the minimum fixing number for n within the cap.
///
/// A fixing (F, a) pins Q iff the free block of A has no off-diagonal
/// nonzero entry and every free linear coefficient vanishes after the
/// substitution; both are coefficient conditions, so each candidate is
/// checked without enumerating the fiber.
pub fn min_fixing_number(q: &QuadPoly, cap: usize) -> Result<FixingNumber> {
    let n = q.n();
    if n > cap {
        let (lower_bound, _) = matching_lower_bound(q.quad_matrix())?;
        return Ok(FixingNumber::Inconclusive { lower_bound });
    }
    let a = q.quad_matrix();
    // off-diagonal support masks
    let masks: Vec<u64> = (0..n)
        .map(|i| {
            let mut m = 0u64;
            for j in 0..n {
                if i != j && !a[(i, j)].is_zero() {
                    m |= 1 << j;
                }
            }
            m
        })
        .collect();
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };

    for f in 0..=n {
        let mut subset: Vec<usize> = (0..f).collect();
        loop {
            let fixed_mask: u64 = subset.iter().fold(0, |acc, &i| acc | 1 << i);
            let free_mask = full & !fixed_mask;
            let independent = (0..n)
                .filter(|&i| free_mask >> i & 1 == 1)
                .all(|i| masks[i] & free_mask == 0);
            if independent {
                if let Some(values) = pinning_assignment(q, &subset, free_mask) {
                    let assignment: Vec<(usize, Rational)> = subset
                        .iter()
                        .cloned()
                        .zip(values.iter().cloned())
                        .collect();
                    let (restricted, _) = q.substitute(&assignment)?;
                    let pinned_value = restricted
                        .cube_constant_value()
                        .expect("pinning conditions certify cube constancy");
                    return Ok(FixingNumber::Exact {
                        m: f,
                        witness: FixingWitness {
                            indices: subset.clone(),
                            values,
                            pinned_value,
                        },
                    });
                }
            }
            if f == 0 || !next_combination(&mut subset, n) {
                break;
            }
        }
    }
    unreachable!("fixing every variable always pins the polynomial")
}

/// Searches sign assignments on the fixed set making every free linear
/// coefficient vanish. Returns the first in bit order (lowest bits = +1 last).
fn pinning_assignment(q: &QuadPoly, fixed: &[usize], free_mask: u64) -> Option<Vec<Rational>> {
    let a = q.quad_matrix();
    let f = fixed.len();
    'assign: for bits in 0..(1u64 << f) {
        let sign = |pos: usize| -> i64 {
            if bits >> pos & 1 == 1 {
                1
            } else {
                -1
            }
        };
        for i in 0..q.n() {
            if free_mask >> i & 1 == 0 {
                continue;
            }
            let mut coeff = q.linear()[i].clone();
            for (pos, &j) in fixed.iter().enumerate() {
                if !a[(i, j)].is_zero() {
                    coeff += &a[(i, j)] * rat(2 * sign(pos));
                }
            }
            if !coeff.is_zero() {
                continue 'assign;
            }
        }
        return Some((0..f).map(|pos| rat(sign(pos))).collect());
    }
    None
}

/// Independent check: substitutes the witness and walks the whole fiber.
pub fn verify_fixing_witness(q: &QuadPoly, w: &FixingWitness) -> Result<bool> {
    let assignment: Vec<(usize, Rational)> = w
        .indices
        .iter()
        .cloned()
        .zip(w.values.iter().cloned())
        .collect();
    let (restricted, _) = q.substitute(&assignment)?;
    let m = restricted.n();
    if m > 22 {
        return Err(Error::EnumerationCapExceeded { needed: m, cap: 22 });
    }
    for bits in 0..(1u64 << m) {
        if restricted.eval(&SignVector::new(m, bits))? != w.pinned_value {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exhaustive verification that no strictly smaller fixing exists: on every
/// fixed set of size < m and every assignment, the fiber is non-constant.
pub fn verify_fixing_minimality(q: &QuadPoly, m: usize) -> Result<bool> {
    let n = q.n();
    for f in 0..m {
        let mut subset: Vec<usize> = (0..f).collect();
        loop {
            for bits in 0..(1u64 << f) {
                let assignment: Vec<(usize, Rational)> = subset
                    .iter()
                    .enumerate()
                    .map(|(pos, &i)| (i, rat(if bits >> pos & 1 == 1 { 1 } else { -1 })))
                    .collect();
                let (restricted, _) = q.substitute(&assignment)?;
                let probe = restricted.eval(&SignVector::all_plus(restricted.n()))?;
                let constant = (0..(1u64 << restricted.n()))
                    .all(|b| restricted.eval(&SignVector::new(restricted.n(), b)).unwrap() == probe);
                if constant {
                    return Ok(false);
                }
            }
            if f == 0 || !next_combination(&mut subset, n) {
                break;
            }
        }
    }
    Ok(true)
}

/// Outcome of the exact fixing-box search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoxRobustness {
    Exact {
        m: usize,
        /// Minimizing box: per variable, the atom indices kept.
        worst_box: Vec<Vec<usize>>,
    },
    Inconclusive,
}

/// Exact minimum over all fixing boxes of #{i : Pr[zeta_i in R_i] <= 1-delta},
/// enumerating every product of nonempty support subsets (up to `box_cap`
/// boxes). Constancy on a box is decided by the same coefficient conditions
/// as `min_fixing_number`, generalized to arbitrary atoms.
pub fn fixing_box_robustness(
    q: &QuadPoly,
    dist: &ProductDist,
    delta: &Rational,
    box_cap: u128,
) -> Result<BoxRobustness> {
    let n = q.n();
    if dist.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "distribution on {} variables, polynomial on {}",
            dist.n(),
            n
        )));
    }
    if !delta.is_positive() || delta >= &rat(1) {
        return Err(Error::InvalidParameter("delta must lie in (0, 1)".into()));
    }
    let mut total: u128 = 1;
    for d in &dist.factors {
        if d.support_size() > 16 {
            return Ok(BoxRobustness::Inconclusive);
        }
        total = total.saturating_mul((1u128 << d.support_size()) - 1);
        if total > box_cap {
            return Ok(BoxRobustness::Inconclusive);
        }
    }

    let threshold = rat(1) - delta;
    let mut best: Option<(usize, Vec<Vec<usize>>)> = None;
    // Odometer over nonempty subset masks per variable.
    let sizes: Vec<usize> = dist.factors.iter().map(|d| d.support_size()).collect();
    let mut mask: Vec<u64> = vec![1; n];
    loop {
        if let Some(count) = box_count_if_fixing(q, dist, &mask, &threshold) {
            if best.as_ref().is_none_or(|(b, _)| count < *b) {
                let boxes = mask
                    .iter()
                    .enumerate()
                    .map(|(i, &mk)| (0..sizes[i]).filter(|a| mk >> a & 1 == 1).collect())
                    .collect();
                best = Some((count, boxes));
                if count == 0 {
                    break;
                }
            }
        }
        // increment odometer
        let mut pos = 0;
        loop {
            if pos == n {
                break;
            }
            mask[pos] += 1;
            if mask[pos] < (1u64 << sizes[pos]) {
                break;
            }
            mask[pos] = 1;
            pos += 1;
        }
        if pos == n {
            break;
        }
    }
    let (m, worst_box) = best.expect("the full box is always a candidate when Q is constant; otherwise some all-singleton box pins Q");
    Ok(BoxRobustness::Exact { m, worst_box })
}

/// If Q is constant on the box, returns how many coordinates have
/// Pr[zeta_i in R_i] <= threshold.
fn box_count_if_fixing(
    q: &QuadPoly,
    dist: &ProductDist,
    mask: &[u64],
    threshold: &Rational,
) -> Option<usize> {
    let n = q.n();
    let a = q.quad_matrix();
    let active: Vec<usize> = (0..n).filter(|&i| mask[i].count_ones() >= 2).collect();
    for (pos, &i) in active.iter().enumerate() {
        for &j in &active[pos + 1..] {
            if !a[(i, j)].is_zero() {
                return None;
            }
        }
    }
    for &i in &active {
        // A_ii (u + u') + 2 sum_fixed A_ij r_j + b_i = 0 for every atom pair.
        let atoms: Vec<&Rational> = dist.factors[i]
            .atoms()
            .iter()
            .enumerate()
            .filter(|(idx, _)| mask[i] >> idx & 1 == 1)
            .map(|(_, (v, _))| v)
            .collect();
        let mut fixed_part = q.linear()[i].clone();
        for j in 0..n {
            if j != i && mask[j].count_ones() == 1 {
                if a[(i, j)].is_zero() {
                    continue;
                }
                let idx = mask[j].trailing_zeros() as usize;
                let r_j = &dist.factors[j].atoms()[idx].0;
                fixed_part += &a[(i, j)] * rat(2) * r_j;
            }
        }
        let first_sum = atoms[0] + atoms[1];
        if !(&a[(i, i)] * &first_sum + &fixed_part).is_zero() {
            return None;
        }
        // any further distinct pair sum forces A_ii = 0 as well
        if atoms.len() >= 3 && !a[(i, i)].is_zero() {
            return None;
        }
    }
    let mut count = 0;
    for i in 0..n {
        let mass: Rational = dist.factors[i]
            .atoms()
            .iter()
            .enumerate()
            .filter(|(idx, _)| mask[i] >> idx & 1 == 1)
            .map(|(_, (_, p))| p.clone())
            .sum();
        if &mass <= threshold {
            count += 1;
        }
    }
    Some(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::general::DiscreteDist;
    use crate::experiments::families::{pinned_product, squared_sum};
    use crate::num::ratio;

    #[test]
    fn pinned_product_has_fixing_number_one() {
        let q = pinned_product(4);
        let FixingNumber::Exact { m, witness } = min_fixing_number(&q, 14).unwrap() else {
            panic!("within cap");
        };
        assert_eq!(m, 1);
        assert_eq!(witness.indices, vec![0]);
        assert_eq!(witness.values, vec![rat(-1)]);
        assert_eq!(witness.pinned_value, rat(0));
        assert!(verify_fixing_witness(&q, &witness).unwrap());
        assert!(verify_fixing_minimality(&q, m).unwrap());
    }

    #[test]
    fn single_product_term_needs_both_variables() {
        let q = QuadPoly::from_monomials(2, &[(0, 1, rat(1))], &[], rat(0)).unwrap();
        let FixingNumber::Exact { m, witness } = min_fixing_number(&q, 14).unwrap() else {
            panic!("within cap");
        };
        assert_eq!(m, 2);
        assert!(verify_fixing_witness(&q, &witness).unwrap());
        assert!(verify_fixing_minimality(&q, m).unwrap());
    }

    #[test]
    fn constant_polynomial_has_fixing_number_zero() {
        let q = QuadPoly::constant(5, ratio(3, 7));
        let FixingNumber::Exact { m, witness } = min_fixing_number(&q, 14).unwrap() else {
            panic!("within cap");
        };
        assert_eq!(m, 0);
        assert!(witness.indices.is_empty());
        assert_eq!(witness.pinned_value, ratio(3, 7));
    }

    #[test]
    fn squared_sum_fixing_number() {
        // (x1+...+xn)^2: the free block must be a single variable, and the
        // fixed signs must cancel; for odd n they can, pinning with n-1.
        let FixingNumber::Exact { m, .. } = min_fixing_number(&squared_sum(5), 14).unwrap() else {
            panic!("within cap");
        };
        assert_eq!(m, 4);
        let FixingNumber::Exact { m, .. } = min_fixing_number(&squared_sum(4), 14).unwrap() else {
            panic!("within cap");
        };
        assert_eq!(m, 4);
    }

    #[test]
    fn cap_exceeded_falls_back_to_matching_bound() {
        let q = squared_sum(6);
        match min_fixing_number(&q, 4).unwrap() {
            FixingNumber::Inconclusive { lower_bound } => assert_eq!(lower_bound, 3),
            other => panic!("expected inconclusive, got {other:?}"),
        }
    }

    #[test]
    fn rademacher_box_metric_matches_fixing_number() {
        for q in [pinned_product(4), squared_sum(3)] {
            let dist = ProductDist::rademacher(q.n());
            let FixingNumber::Exact { m, .. } = min_fixing_number(&q, 14).unwrap() else {
                panic!("within cap");
            };
            let BoxRobustness::Exact { m: bm, .. } =
                fixing_box_robustness(&q, &dist, &ratio(1, 2), 1 << 21).unwrap()
            else {
                panic!("within cap");
            };
            assert_eq!(bm, m);
        }
    }

    #[test]
    fn constant_q_has_box_metric_zero() {
        let q = QuadPoly::constant(3, rat(2));
        let dist = ProductDist::rademacher(3);
        let BoxRobustness::Exact { m, worst_box } =
            fixing_box_robustness(&q, &dist, &ratio(1, 2), 1 << 21).unwrap()
        else {
            panic!("within cap");
        };
        assert_eq!(m, 0);
        assert!(worst_box.iter().all(|r| r.len() == 2), "full box wins");
    }

    #[test]
    fn box_constancy_agrees_with_full_enumeration() {
        // oracle: walk every box and every point of the box
        let q = QuadPoly::from_monomials(
            3,
            &[(0, 0, rat(1)), (0, 1, rat(2))],
            &[(2, rat(1)), (0, rat(-1))],
            rat(0),
        )
        .unwrap();
        let dist = ProductDist::new(vec![
            DiscreteDist::uniform(&[rat(-1), rat(1)]).unwrap(),
            DiscreteDist::uniform(&[rat(-1), rat(0), rat(1)]).unwrap(),
            DiscreteDist::uniform(&[rat(-1), rat(1)]).unwrap(),
        ]);
        let sizes: Vec<usize> = dist.factors.iter().map(|d| d.support_size()).collect();
        let mut mask = vec![1u64; 3];
        loop {
            let fast = box_count_if_fixing(&q, &dist, &mask, &ratio(1, 2)).is_some();
            // enumerate all points of the box
            let choices: Vec<Vec<Rational>> = (0..3)
                .map(|i| {
                    dist.factors[i]
                        .atoms()
                        .iter()
                        .enumerate()
                        .filter(|(idx, _)| mask[i] >> idx & 1 == 1)
                        .map(|(_, (v, _))| v.clone())
                        .collect()
                })
                .collect();
            let mut values = Vec::new();
            for a0 in &choices[0] {
                for a1 in &choices[1] {
                    for a2 in &choices[2] {
                        values.push(
                            q.eval_rat(&[a0.clone(), a1.clone(), a2.clone()]).unwrap(),
                        );
                    }
                }
            }
            let slow = values.windows(2).all(|w| w[0] == w[1]);
            assert_eq!(fast, slow, "box {mask:?}");
            let mut pos = 0;
            loop {
                if pos == 3 {
                    break;
                }
                mask[pos] += 1;
                if mask[pos] < (1u64 << sizes[pos]) {
                    break;
                }
                mask[pos] = 1;
                pos += 1;
            }
            if pos == 3 {
                break;
            }
        }
    }

    #[test]
    fn pinned_product_box_metric_is_one() {
        let q = pinned_product(4);
        let dist = ProductDist::rademacher(4);
        let BoxRobustness::Exact { m, worst_box } =
            fixing_box_robustness(&q, &dist, &ratio(1, 2), 1 << 21).unwrap()
        else {
            panic!("within cap");
        };
        assert_eq!(m, 1);
        // witness: {-1} x {+-1}^3
        assert_eq!(worst_box[0], vec![0]);
        assert!(worst_box[1..].iter().all(|r| r.len() == 2));
    }
}
