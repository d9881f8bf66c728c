//! Property tests for the library invariants: incremental evaluation,
//! perturbation equivalence on fibers, square decompositions, translation
//! invariance, the numeric inequality, engine/oracle equivalence, and the
//! representation construction.

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use qlo_core::algebra::{
    perturb_equivalent, square_decompose, translation_directions, LinearConstraint, QuadPoly,
    RatMatrix, SignVector,
};
use qlo_core::engine::general::DiscreteDist;
use qlo_core::engine::naive::naive_histogram;
use qlo_core::engine::{histogram, linear_system_prob, EnumOptions};
use qlo_core::num::{rat, ratio, Rational};
use qlo_core::rank::{self, rank_and_kernel};
use qlo_core::structure::{represent_discrete, reproduces_law};

fn arb_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| ratio(p, q))
}

fn arb_poly(max_n: usize) -> impl Strategy<Value = QuadPoly> {
    (2usize..=max_n).prop_flat_map(|n| {
        let quad = proptest::collection::vec(
            ((0..n, 0..n), arb_rational()),
            0..=(n * (n + 1) / 2).min(12),
        );
        let lin = proptest::collection::vec((0..n, arb_rational()), 0..=n);
        (Just(n), quad, lin, arb_rational()).prop_map(|(n, quad, lin, c)| {
            let quad: Vec<(usize, usize, Rational)> = quad
                .into_iter()
                .map(|((i, j), v)| (i.min(j), i.max(j), v))
                .collect();
            let lin: Vec<(usize, Rational)> = lin.into_iter().collect();
            QuadPoly::from_monomials(n, &quad, &lin, c).expect("well-formed")
        })
    })
}

fn arb_sym_matrix(max_n: usize) -> impl Strategy<Value = RatMatrix> {
    (1usize..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(arb_rational(), n * n).prop_map(move |vals| {
            let mut a = RatMatrix::zero(n, n);
            for i in 0..n {
                for j in i..n {
                    let v = vals[i * n + j].clone();
                    a[(i, j)] = v.clone();
                    a[(j, i)] = v;
                }
            }
            a
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// eval(flip(x, j)) - eval(x) = flip_delta(x, j), exactly.
    #[test]
    fn flip_delta_equals_direct_difference(q in arb_poly(9), bits in any::<u64>(), j in 0usize..9) {
        let n = q.n();
        let j = j % n;
        let x = SignVector::new(n, bits);
        let direct = q.eval(&x.flipped(j)).unwrap() - q.eval(&x).unwrap();
        prop_assert_eq!(q.flip_delta(&x, j).unwrap(), direct);
    }

    /// The perturbed polynomial agrees with the original on the whole fiber.
    #[test]
    fn perturbation_agrees_on_fiber(
        q in arb_poly(8),
        m_vals in proptest::collection::vec(-2i64..=2, 8),
        w0 in -2i64..=2,
        l_vals in proptest::collection::vec(-3i64..=3, 8),
        r_vals in proptest::collection::vec(-3i64..=3, 8),
        d_vals in proptest::collection::vec(-2i64..=2, 8),
    ) {
        let n = q.n();
        let m = RatMatrix::from_fn(1, n, |_, j| rat(m_vals[j]));
        let w = vec![rat(w0)];
        let l = RatMatrix::from_fn(n, 1, |i, _| rat(l_vals[i]));
        let r = RatMatrix::from_fn(1, n, |_, j| rat(r_vals[j]));
        let d: Vec<Rational> = (0..n).map(|i| rat(d_vals[i])).collect();
        let qs = perturb_equivalent(&q, &m, &w, &l, &r, &d).unwrap();
        for bits in 0..(1u64 << n) {
            let x = SignVector::new(n, bits);
            let mx = m.mul_vec(&x.to_rationals()).unwrap();
            if mx == w {
                prop_assert_eq!(qs.eval(&x).unwrap(), q.eval(&x).unwrap());
            }
        }
    }

    /// Sum of lambda_i (g_i . x)^2 reproduces the quadratic form with exactly
    /// rank(A) independent terms.
    #[test]
    fn square_decomposition_reproduces_the_form(a in arb_sym_matrix(6)) {
        let n = a.rows();
        let pairs = square_decompose(&a).unwrap();
        prop_assert_eq!(pairs.len(), rank::rank(&a));
        // coefficient-wise identity via probing at e_i and e_i + e_j
        for i in 0..n {
            for j in 0..n {
                let mut x = vec![Rational::zero(); n];
                x[i] += rat(1);
                x[j] += rat(1);
                let form: Rational = pairs
                    .iter()
                    .map(|(lam, g)| {
                        let dot: Rational = g.iter().zip(&x).map(|(a, b)| a * b).sum();
                        lam * &dot * &dot
                    })
                    .sum();
                let ax = a.mul_vec(&x).unwrap();
                let direct: Rational = x.iter().zip(&ax).map(|(l, r)| l * r).sum();
                prop_assert_eq!(form, direct);
            }
        }
        if !pairs.is_empty() {
            let g_mat = RatMatrix::from_rows(pairs.iter().map(|(_, g)| g.clone()).collect()).unwrap();
            prop_assert_eq!(rank::rank(&g_mat), pairs.len());
        }
    }

    /// Shifting the argument along any translation direction never changes
    /// the value at rational points.
    #[test]
    fn translation_directions_leave_values_fixed(
        q in arb_poly(6),
        w_vals in proptest::collection::vec((-5i64..=5, 1i64..=3), 6),
        lam in (-4i64..=4, 1i64..=3),
    ) {
        let n = q.n();
        let basis = translation_directions(&q);
        let w: Vec<Rational> = (0..n).map(|i| ratio(w_vals[i].0, w_vals[i].1)).collect();
        let lam = ratio(lam.0, lam.1);
        let base = q.eval_rat(&w).unwrap();
        for v in &basis {
            let shifted: Vec<Rational> = w.iter().zip(v).map(|(wi, vi)| wi + &lam * vi).collect();
            prop_assert_eq!(q.eval_rat(&shifted).unwrap(), base.clone());
        }
    }

    /// a^2 <= ab + c implies a <= b + sqrt(c) for nonnegative reals; in exact
    /// arithmetic: a >= b implies (a-b)^2 <= c.
    #[test]
    fn numeric_inequality_exact_form(
        a in (0i64..=40, 1i64..=5),
        b in (0i64..=40, 1i64..=5),
        c in (0i64..=1600, 1i64..=5),
    ) {
        let a = ratio(a.0, a.1);
        let b = ratio(b.0, b.1);
        let c = ratio(c.0, c.1);
        prop_assume!(&a * &a <= &a * &b + &c);
        if a >= b {
            let d = &a - &b;
            prop_assert!(&d * &d <= c);
        }
    }

    /// Gray-code engine vs naive per-point engine, with and without fibers.
    #[test]
    fn engines_agree(q in arb_poly(8), m_vals in proptest::collection::vec(-2i64..=2, 8), w0 in -1i64..=1) {
        let n = q.n();
        let opts = EnumOptions::default();
        let fast = histogram(&q, None, &opts).unwrap();
        let slow = naive_histogram(&q, None, 26).unwrap();
        prop_assert_eq!(&fast, &slow);
        let cons = LinearConstraint::new(
            RatMatrix::from_fn(1, n, |_, j| rat(m_vals[j])),
            vec![rat(2 * w0)],
        ).unwrap();
        let fast = histogram(&q, Some(&cons), &opts).unwrap();
        let slow = naive_histogram(&q, Some(&cons), 26).unwrap();
        prop_assert_eq!(fast, slow);
    }

    /// Counts always total 2^n without a constraint, and never exceed it.
    #[test]
    fn histogram_totals(q in arb_poly(8)) {
        let hist = histogram(&q, None, &EnumOptions::default()).unwrap();
        prop_assert_eq!(
            hist.satisfied_count(),
            num_bigint::BigUint::one() << q.n()
        );
    }

    /// Exact fiber probability never beats 2^-rank(M).
    #[test]
    fn odlyzko_holds_exactly(
        rows in 1usize..=3,
        n in 4usize..=9,
        vals in proptest::collection::vec(-2i64..=2, 27),
        w_vals in proptest::collection::vec(-2i64..=2, 3),
    ) {
        let m = RatMatrix::from_fn(rows, n, |i, j| rat(vals[i * 9 + j]));
        let w: Vec<Rational> = (0..rows).map(|i| rat(w_vals[i])).collect();
        let cons = LinearConstraint::new(m.clone(), w).unwrap();
        let p = linear_system_prob(&cons, &EnumOptions::default()).unwrap();
        let bound = qlo_core::num::pow2(-(rank::rank(&m) as i64));
        prop_assert!(p.to_rational() <= bound);
    }

    /// The constructed (alpha, beta) law reproduces the input distribution
    /// exactly, with the three stated properties.
    #[test]
    fn representation_reproduces_law(
        raw in proptest::collection::vec(((-12i64..=12, 1i64..=3), 1u32..=6), 1..=5)
    ) {
        let mut values: Vec<Rational> = Vec::new();
        let mut weights: Vec<Rational> = Vec::new();
        for ((p, q), w) in raw {
            let v = ratio(p, q);
            if !values.contains(&v) {
                values.push(v);
                weights.push(rat(w as i64));
            }
        }
        let total: Rational = weights.iter().sum();
        let atoms: Vec<(Rational, Rational)> = values
            .into_iter()
            .zip(weights.into_iter().map(|w| w / &total))
            .collect();
        let dist = DiscreteDist::new(atoms).unwrap();
        let repr = represent_discrete(&dist).unwrap();
        prop_assert!(reproduces_law(&repr, &dist));
        prop_assert!(repr.at_most_one_zero_beta_atom());
        prop_assert!(repr.prob_beta_zero() <= dist.max_atom_mass());
        let mass: Rational = repr.atoms.iter().map(|(_, p)| p.clone()).sum();
        prop_assert!(mass.is_one());
        prop_assert!(repr.atoms.iter().all(|(_, p)| p.is_positive()));
    }

    /// Kernel vectors produced by elimination really are kernel vectors, and
    /// rank + kernel dimension = column count.
    #[test]
    fn rank_nullity_and_kernel_membership(
        rows in 1usize..=4,
        cols in 1usize..=5,
        vals in proptest::collection::vec(-3i64..=3, 20),
    ) {
        let m = RatMatrix::from_fn(rows, cols, |i, j| rat(vals[i * 5 + j]));
        let (r, kernel) = rank_and_kernel(&m);
        prop_assert_eq!(r + kernel.len(), cols);
        for v in &kernel {
            let out = m.mul_vec(v).unwrap();
            prop_assert!(out.iter().all(|x| x.is_zero()));
        }
    }
}

/// Spec-scale fiber agreement: a fixed 14-variable instance, full enumeration.
#[test]
fn perturbation_fiber_agreement_at_fourteen_variables() {
    let n = 14;
    let mut rng = qlo_core::experiments::families::seeded_rng(1414);
    let q = qlo_core::experiments::families::random_dense(&mut rng, n);
    let m = RatMatrix::from_fn(1, n, |_, j| if j < 6 { rat(1) } else { rat(0) });
    let w = vec![rat(0)];
    let l = RatMatrix::from_fn(n, 1, |i, _| rat((i % 5) as i64 - 2));
    let r = RatMatrix::from_fn(1, n, |_, j| rat((j % 4) as i64 - 1));
    let d: Vec<Rational> = (0..n).map(|i| rat((i % 3) as i64)).collect();
    let qs = perturb_equivalent(&q, &m, &w, &l, &r, &d).unwrap();
    let mut fiber = 0u32;
    for bits in 0..(1u64 << n) {
        let x = SignVector::new(n, bits);
        let mx = m.mul_vec(&x.to_rationals()).unwrap();
        if mx == w {
            fiber += 1;
            assert_eq!(qs.eval(&x).unwrap(), q.eval(&x).unwrap());
        }
    }
    assert!(fiber > 0);
}

/// With a constraint, the histogram counts sum to 2^n Pr[M xi = w] exactly.
#[test]
fn constrained_totals_match_the_fiber_probability() {
    let mut rng = qlo_core::experiments::families::seeded_rng(77);
    for _ in 0..10 {
        let n = 8;
        let q = qlo_core::experiments::families::random_dense(&mut rng, n);
        let m = qlo_core::experiments::families::random_int_matrix(&mut rng, 2, n, 2);
        let w = vec![rat(0), rat(2)];
        let cons = LinearConstraint::new(m, w).unwrap();
        let opts = EnumOptions::default();
        let hist = histogram(&q, Some(&cons), &opts).unwrap();
        let fiber = linear_system_prob(&cons, &opts).unwrap();
        assert_eq!(&hist.satisfied_count(), fiber.count());
        assert_eq!(hist.total, *fiber.total());
    }
}
