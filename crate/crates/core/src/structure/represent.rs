//! Representing a finite-support random variable as alpha + xi * beta with
//! xi an independent fair sign: the constructive case analysis, exactly as
//! rational measures.
//!
//! Case split: a constant is (z, 0); a majority atom z (mass >= 1/2) pairs z
//! against the conditional remainder; otherwise the median splits the mass
//! into a below-part and an above-part, and the heavier side sets the branch.

use num_traits::{Signed, Zero};

use crate::engine::general::DiscreteDist;
use crate::error::Result;
use crate::num::{rat, ratio, Rational};

/// Joint law of (alpha, beta); the sign xi is implicit and independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReprOutput {
    /// ((alpha, beta), probability), probabilities summing to one.
    pub atoms: Vec<((Rational, Rational), Rational)>,
}

impl ReprOutput {
    /// The distribution of alpha + xi * beta as an exact rational measure.
    pub fn induced_law(&self) -> Vec<(Rational, Rational)> {
        let mut acc: std::collections::BTreeMap<Rational, Rational> =
            std::collections::BTreeMap::new();
        let half = ratio(1, 2);
        for ((a, b), p) in &self.atoms {
            *acc.entry(a + b).or_insert_with(Rational::zero) += p * &half;
            *acc.entry(a - b).or_insert_with(Rational::zero) += p * &half;
        }
        acc.into_iter().filter(|(_, p)| !p.is_zero()).collect()
    }

    pub fn prob_beta_zero(&self) -> Rational {
        self.atoms
            .iter()
            .filter(|((_, b), _)| b.is_zero())
            .map(|(_, p)| p.clone())
            .sum()
    }

    /// Property (a): at most one alpha value carries beta = 0.
    pub fn at_most_one_zero_beta_atom(&self) -> bool {
        self.atoms.iter().filter(|((_, b), _)| b.is_zero()).count() <= 1
    }

    fn push(&mut self, a: Rational, b: Rational, p: Rational) {
        if p.is_zero() {
            return;
        }
        for ((ea, eb), ep) in &mut self.atoms {
            if *ea == a && *eb == b {
                *ep += p;
                return;
            }
        }
        self.atoms.push(((a, b), p));
    }
}

/// Builds the representation zeta = alpha + xi * beta.
pub fn represent_discrete(dist: &DiscreteDist) -> Result<ReprOutput> {
    let mut out = ReprOutput { atoms: Vec::new() };
    let atoms = dist.atoms();
    let half = ratio(1, 2);
    let two = rat(2);

    if atoms.len() == 1 {
        out.push(atoms[0].0.clone(), Rational::zero(), rat(1));
        return Ok(out);
    }

    // Majority outcome: some mass >= 1/2. Two atoms can tie at exactly 1/2;
    // the larger value is the majority then, which also normalizes the sign
    // convention beta = (z - Y)/2 with Y below z in the Rademacher case.
    let majority = atoms
        .iter()
        .filter(|(_, p)| *p >= half)
        .max_by(|l, r| l.0.cmp(&r.0));
    if let Some((z, pz)) = majority {
        let rho = rat(1) - pz; // Pr[zeta != z], in (0, 1/2]
        out.push(z.clone(), Rational::zero(), rat(1) - &two * &rho);
        for (y, py) in atoms.iter().filter(|(v, _)| v != z) {
            // conditional mass py / rho, carried with weight 2 rho
            out.push((z + y) / &two, (z - y) / &two, &two * py);
        }
        return Ok(out);
    }

    // No majority: median x = sup {t : Pr[zeta >= t] >= 1/2} over atom values.
    let mut sorted: Vec<&(Rational, Rational)> = atoms.iter().collect();
    sorted.sort_by(|l, r| l.0.cmp(&r.0));
    let mut tail = Rational::zero();
    let mut median = &sorted[0].0;
    for (v, p) in sorted.iter().rev() {
        tail += p;
        if tail >= half {
            median = v;
            break;
        }
    }
    let rho1: Rational = sorted
        .iter()
        .filter(|(v, _)| v < median)
        .map(|(_, p)| p.clone())
        .sum();
    let rho2: Rational = sorted
        .iter()
        .filter(|(v, _)| v > median)
        .map(|(_, p)| p.clone())
        .sum();
    debug_assert!(rho1.is_positive() && rho2.is_positive());

    let below: Vec<&(Rational, Rational)> = sorted.iter().filter(|(v, _)| v < median).copied().collect();
    let above: Vec<&(Rational, Rational)> = sorted.iter().filter(|(v, _)| v > median).copied().collect();

    if rho1 >= rho2 {
        out.push(
            median.clone(),
            Rational::zero(),
            rat(1) - &two * &rho1,
        );
        for (y1, p1) in &below {
            // weight (2 rho1 - 2 rho2) * p1 / rho1
            let w = (&rho1 - &rho2) * &two * p1 / &rho1;
            out.push((median + y1) / &two, (median - y1) / &two, w);
        }
        for (y1, p1) in &below {
            for (y2, p2) in &above {
                // weight 2 rho2 * (p1/rho1) * (p2/rho2) = 2 p1 p2 / rho1
                let w = &two * p1 * p2 / &rho1;
                out.push((y2 + y1) / &two, (y2 - y1) / &two, w);
            }
        }
    } else {
        out.push(
            median.clone(),
            Rational::zero(),
            rat(1) - &two * &rho2,
        );
        for (y2, p2) in &above {
            let w = (&rho2 - &rho1) * &two * p2 / &rho2;
            out.push((median + y2) / &two, (y2 - median) / &two, w);
        }
        for (y2, p2) in &above {
            for (y1, p1) in &below {
                let w = &two * p1 * p2 / &rho2;
                out.push((y2 + y1) / &two, (y2 - y1) / &two, w);
            }
        }
    }
    Ok(out)
}

/// Exact distributional equality of alpha + xi beta against the input law.
pub fn reproduces_law(repr: &ReprOutput, dist: &DiscreteDist) -> bool {
    let mut want: Vec<(Rational, Rational)> = dist
        .atoms()
        .iter()
        .map(|(v, p)| (v.clone(), p.clone()))
        .collect();
    want.sort_by(|l, r| l.0.cmp(&r.0));
    repr.induced_law() == want
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn total(repr: &ReprOutput) -> Rational {
        repr.atoms.iter().map(|(_, p)| p.clone()).sum()
    }

    #[test]
    fn rademacher_becomes_pure_sign() {
        let d = DiscreteDist::rademacher();
        let repr = represent_discrete(&d).unwrap();
        assert_eq!(repr.atoms, vec![((rat(0), rat(1)), rat(1))]);
        assert!(reproduces_law(&repr, &d));
    }

    #[test]
    fn constant_gets_zero_beta() {
        let d = DiscreteDist::constant(ratio(5, 3));
        let repr = represent_discrete(&d).unwrap();
        assert_eq!(repr.atoms, vec![((ratio(5, 3), rat(0)), rat(1))]);
    }

    #[test]
    fn uniform_three_points() {
        // uniform on {0,1,2}: atoms ((1,0), 1/3) and ((1,1), 2/3).
        let d = DiscreteDist::uniform(&[rat(0), rat(1), rat(2)]).unwrap();
        let repr = represent_discrete(&d).unwrap();
        let mut atoms = repr.atoms.clone();
        atoms.sort_by(|l, r| l.0 .1.cmp(&r.0 .1));
        assert_eq!(
            atoms,
            vec![
                ((rat(1), rat(0)), ratio(1, 3)),
                ((rat(1), rat(1)), ratio(2, 3)),
            ]
        );
        assert!(reproduces_law(&repr, &d));
    }

    #[test]
    fn majority_branch_keeps_alpha_plus_beta_constant() {
        // Pr[zeta = 2] = 2/3, Pr[zeta = 0] = 1/4, Pr[zeta = 7] = 1/12.
        let d = DiscreteDist::new(vec![
            (rat(2), ratio(2, 3)),
            (rat(0), ratio(1, 4)),
            (rat(7), ratio(1, 12)),
        ])
        .unwrap();
        let repr = represent_discrete(&d).unwrap();
        assert!(total(&repr).is_one());
        assert!(reproduces_law(&repr, &d));
        assert!(repr.at_most_one_zero_beta_atom());
        // property (b): majority mass > 1/2 forces alpha + beta = 2 always
        for ((a, b), _) in &repr.atoms {
            assert_eq!(a + b, rat(2));
        }
        assert!(repr.prob_beta_zero() <= d.max_atom_mass());
    }

    #[test]
    fn no_majority_median_branch() {
        // masses 2/5, 2/5, 1/5: no majority.
        let d = DiscreteDist::new(vec![
            (rat(-3), ratio(2, 5)),
            (rat(1), ratio(2, 5)),
            (rat(4), ratio(1, 5)),
        ])
        .unwrap();
        let repr = represent_discrete(&d).unwrap();
        assert!(total(&repr).is_one());
        assert!(reproduces_law(&repr, &d));
        assert!(repr.at_most_one_zero_beta_atom());
        assert!(repr.prob_beta_zero() <= d.max_atom_mass());
    }

    #[test]
    fn mirror_branch_when_upper_mass_dominates() {
        // rho1 = 1/5 < rho2 = 2/5 around the median.
        let d = DiscreteDist::new(vec![
            (rat(-2), ratio(1, 5)),
            (rat(0), ratio(2, 5)),
            (rat(3), ratio(1, 5)),
            (rat(5), ratio(1, 5)),
        ])
        .unwrap();
        let repr = represent_discrete(&d).unwrap();
        assert!(total(&repr).is_one());
        assert!(reproduces_law(&repr, &d));
        assert!(repr.prob_beta_zero() <= d.max_atom_mass());
    }
}
