//! Exact Pr[Q(zeta) = z] for independent finite-support variables, by a
//! reflected mixed-radix Gray walk over the support product (one coordinate
//! moves to an adjacent atom per step).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::QuadPoly;
use crate::engine::walk::{clear_denominators, fits_i128, WalkInt};
use crate::error::{Error, Result};
use crate::num::{rat, ratio, Rational};

/// A finite-support distribution with exact rational atom probabilities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteDist {
    atoms: Vec<(Rational, Rational)>,
}

impl DiscreteDist {
    pub fn new(atoms: Vec<(Rational, Rational)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidParameter("distribution with no atoms".into()));
        }
        let mut sum = Rational::zero();
        for (v, p) in &atoms {
            if !p.is_positive() {
                return Err(Error::InvalidParameter(format!(
                    "atom at {v} has non-positive probability {p}"
                )));
            }
            if atoms.iter().filter(|(u, _)| u == v).count() != 1 {
                return Err(Error::InvalidParameter(format!("duplicate atom value {v}")));
            }
            sum += p;
        }
        if !sum.is_one() {
            return Err(Error::InvalidParameter(format!(
                "atom probabilities sum to {sum}, not 1"
            )));
        }
        Ok(DiscreteDist { atoms })
    }

    pub fn rademacher() -> Self {
        DiscreteDist {
            atoms: vec![(rat(-1), ratio(1, 2)), (rat(1), ratio(1, 2))],
        }
    }

    pub fn constant(value: Rational) -> Self {
        DiscreteDist {
            atoms: vec![(value, rat(1))],
        }
    }

    pub fn uniform(values: &[Rational]) -> Result<Self> {
        let p = Rational::new(BigInt::one(), BigInt::from(values.len()));
        Self::new(values.iter().map(|v| (v.clone(), p.clone())).collect())
    }

    pub fn atoms(&self) -> &[(Rational, Rational)] {
        &self.atoms
    }

    pub fn support_size(&self) -> usize {
        self.atoms.len()
    }

    pub fn max_atom_mass(&self) -> Rational {
        self.atoms
            .iter()
            .map(|(_, p)| p.clone())
            .max()
            .expect("distribution has at least one atom")
    }

    pub fn prob_of(&self, value: &Rational) -> Rational {
        self.atoms
            .iter()
            .find(|(v, _)| v == value)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(Rational::zero)
    }
}

/// Independent coordinates zeta_1, ..., zeta_n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductDist {
    pub factors: Vec<DiscreteDist>,
}

impl ProductDist {
    pub fn new(factors: Vec<DiscreteDist>) -> Self {
        ProductDist { factors }
    }

    pub fn rademacher(n: usize) -> Self {
        ProductDist {
            factors: vec![DiscreteDist::rademacher(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.factors.len()
    }

    pub fn support_product(&self) -> u128 {
        self.factors
            .iter()
            .fold(1u128, |acc, d| acc.saturating_mul(d.support_size() as u128))
    }
}

/// Loopless reflected mixed-radix Gray generation; every call to `step`
/// moves exactly one digit to an adjacent value. All radices must be >= 2.
struct MixedGray {
    radices: Vec<usize>,
    digits: Vec<usize>,
    dirs: Vec<i8>,
    focus: Vec<usize>,
}

impl MixedGray {
    fn new(radices: Vec<usize>) -> Self {
        let n = radices.len();
        debug_assert!(radices.iter().all(|&m| m >= 2));
        MixedGray {
            radices,
            digits: vec![0; n],
            dirs: vec![1; n],
            focus: (0..=n).collect(),
        }
    }

    /// Returns (digit index, old value, new value), or None when exhausted.
    fn step(&mut self) -> Option<(usize, usize, usize)> {
        let n = self.radices.len();
        let j = self.focus[0];
        self.focus[0] = 0;
        if j == n {
            return None;
        }
        let old = self.digits[j];
        let new = (old as i64 + self.dirs[j] as i64) as usize;
        self.digits[j] = new;
        if new == 0 || new == self.radices[j] - 1 {
            self.dirs[j] = -self.dirs[j];
            self.focus[j] = self.focus[j + 1];
            self.focus[j + 1] = j + 1;
        }
        Some((j, old, new))
    }
}

struct ScaledGeneral {
    n: usize,
    a: Vec<BigInt>,     // n x n, A * Dc
    b2: Vec<BigInt>,    // b * Dc * Dv
    c2: BigInt,         // c * Dc * Dv^2
    xv: Vec<Vec<BigInt>>, // scaled atom values per variable
    target: Option<BigInt>,
    bound: BigInt,
}

impl ScaledGeneral {
    fn build(q: &QuadPoly, dist: &ProductDist, z: &Rational) -> ScaledGeneral {
        let n = q.n();
        let mut refs: Vec<&Rational> = Vec::new();
        refs.extend(q.quad_matrix().entries());
        refs.extend(q.linear());
        refs.push(q.constant_term());
        let (coef, _dc) = clear_denominators(&refs);
        let a = coef[..n * n].to_vec();
        let b = coef[n * n..n * n + n].to_vec();
        let c = coef[n * n + n].clone();

        let all_values: Vec<&Rational> = dist
            .factors
            .iter()
            .flat_map(|d| d.atoms().iter().map(|(v, _)| v))
            .collect();
        let (flat_scaled, dv) = clear_denominators(&all_values);
        let mut xv = Vec::with_capacity(n);
        let mut pos = 0;
        for d in &dist.factors {
            let m = d.support_size();
            xv.push(flat_scaled[pos..pos + m].to_vec());
            pos += m;
        }

        let b2: Vec<BigInt> = b.iter().map(|x| x * &dv).collect();
        let c2 = &c * &dv * &dv;

        // target = z * Dc * Dv^2, which must land on an integer to be hit.
        let zt = z * Rational::from_integer(&_dc * &dv * &dv);
        let target = zt.is_integer().then(|| zt.to_integer());

        let vmax = xv
            .iter()
            .flatten()
            .map(|x| x.abs())
            .fold(BigInt::one(), |acc, x| if x > acc { x } else { acc });
        let mut bound = c2.abs();
        for x in &a {
            bound += x.abs() * &vmax * &vmax;
        }
        for x in &b2 {
            bound += x.abs() * &vmax;
        }
        bound *= 8;

        ScaledGeneral {
            n,
            a,
            b2,
            c2,
            xv,
            target,
            bound,
        }
    }
}

fn run_general<T: WalkInt>(sc: &ScaledGeneral, dist: &ProductDist) -> Rational {
    let n = sc.n;
    let a: Vec<T> = sc.a.iter().map(|x| T::from_bigint(x)).collect();
    let b2: Vec<T> = sc.b2.iter().map(|x| T::from_bigint(x)).collect();
    let xv: Vec<Vec<T>> = sc
        .xv
        .iter()
        .map(|col| col.iter().map(|x| T::from_bigint(x)).collect())
        .collect();
    let Some(target) = sc.target.as_ref().map(T::from_bigint) else {
        return Rational::zero();
    };

    // Per-variable probability numerators over a per-variable denominator.
    let mut prob_num: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    let mut total_den = BigInt::one();
    for d in &dist.factors {
        let probs: Vec<&Rational> = d.atoms().iter().map(|(_, p)| p).collect();
        let (nums, den) = clear_denominators(&probs);
        total_den *= &den;
        prob_num.push(nums);
    }

    // Start state: every digit at 0.
    let cur: Vec<usize> = vec![0; n];
    let mut rowsum: Vec<T> = (0..n)
        .map(|j| {
            let mut acc = T::zero();
            for i in 0..n {
                if i != j && !a[j * n + i].is_zero() {
                    acc.add_assign_ref(&a[j * n + i].mul_ref(&xv[i][cur[i]]));
                }
            }
            acc
        })
        .collect();
    let mut value = {
        let mut acc = T::from_bigint(&sc.c2);
        for j in 0..n {
            acc.add_assign_ref(&a[j * n + j].mul_ref(&xv[j][0]).mul_ref(&xv[j][0]));
            acc.add_assign_ref(&b2[j].mul_ref(&xv[j][0]));
            // sum_j x_j rowsum_j covers every off-diagonal pair in both orders
            acc.add_assign_ref(&rowsum[j].mul_ref(&xv[j][0]));
        }
        acc
    };
    let mut weight: BigInt = prob_num.iter().map(|nums| &nums[0]).product();
    let mut acc_num = BigInt::zero();
    if value == target {
        acc_num += &weight;
    }

    // Variables with a single atom never move; Gray-walk the rest.
    let movable: Vec<usize> = (0..n)
        .filter(|&j| dist.factors[j].support_size() >= 2)
        .collect();
    if movable.is_empty() {
        return Rational::new(acc_num, total_den);
    }
    let mut gray = MixedGray::new(movable.iter().map(|&j| xv[j].len()).collect());
    while let Some((slot, old_d, new_d)) = gray.step() {
        let j = movable[slot];
        let old = xv[j][old_d].clone();
        let new = xv[j][new_d].clone();
        let mut diff = new.clone();
        diff.sub_assign_ref(&old);
        // delta = A[j][j] (new^2 - old^2) + 2 diff rowsum_j + b2[j] diff
        let mut sq_delta = new.mul_ref(&new);
        sq_delta.sub_assign_ref(&old.mul_ref(&old));
        let mut delta = a[j * n + j].mul_ref(&sq_delta);
        let mut cross = diff.mul_ref(&rowsum[j]);
        cross.double();
        delta.add_assign_ref(&cross);
        delta.add_assign_ref(&b2[j].mul_ref(&diff));
        value.add_assign_ref(&delta);
        for i in 0..n {
            if i != j && !a[i * n + j].is_zero() {
                rowsum[i].add_assign_ref(&a[i * n + j].mul_ref(&diff));
            }
        }
        weight = weight / &prob_num[j][old_d] * &prob_num[j][new_d];
        if value == target {
            acc_num += &weight;
        }
    }
    Rational::new(acc_num, total_den)
}

/// Exact Pr[Q(zeta) = z] over the support product, each outcome weighted by
/// the product of its atom probabilities.
pub fn general_point_prob(
    q: &QuadPoly,
    dist: &ProductDist,
    z: &Rational,
    cap: u128,
) -> Result<Rational> {
    if dist.n() != q.n() {
        return Err(Error::DimensionMismatch(format!(
            "distribution on {} variables, polynomial on {}",
            dist.n(),
            q.n()
        )));
    }
    let states = dist.support_product();
    if states > cap {
        return Err(Error::SupportProductCapExceeded { needed: states, cap });
    }
    let sc = ScaledGeneral::build(q, dist, z);
    if fits_i128(&sc.bound) {
        Ok(run_general::<i128>(&sc, dist))
    } else {
        Ok(run_general::<BigInt>(&sc, dist))
    }
}

pub const DEFAULT_GENERAL_CAP: u128 = 20_000_000;
