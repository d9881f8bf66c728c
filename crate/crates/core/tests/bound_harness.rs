//! Randomized hypothesis-generating harnesses: for each closed-form bound,
//! build instances that provably satisfy its hypotheses, compute the exact
//! event probability, and check domination under directed rounding. The
//! bounds with astronomically large constants clamp at 1 on desk-scale
//! instances; the clamp flag keeps that visible, and the comparisons stay
//! honest either way.

use num_traits::Zero;
use rand::Rng;

use qlo_core::algebra::{LinearConstraint, QuadPoly, RatMatrix};
use qlo_core::bounds;
use qlo_core::engine::{
    hamming_event_prob, hamming_event_prob_constrained, histogram, linear_system_prob,
    monte_carlo_rademacher, EnumOptions,
};
use qlo_core::experiments::families::{random_int_matrix, seeded_rng, squared_sum};
use qlo_core::num::{rat, ratio, Rational};
use qlo_core::rank::{
    self, halasz_membership_oracle, min_perturbed_rank, m_membership,
};

#[test]
fn halasz_deletion_bound_holds_on_certified_members() {
    // (s/k)^{-k/2} whenever the exact membership oracle certifies H(s).
    let mut rng = seeded_rng(801);
    let opts = EnumOptions::serial(26);
    let mut checked = 0;
    for trial in 0..400 {
        let k = 1 + trial % 2;
        let n = 6 + trial % 7;
        let m = random_int_matrix(&mut rng, k, n, 2);
        for s in 1..=3usize {
            if !halasz_membership_oracle(&m, s) {
                continue;
            }
            let w: Vec<Rational> = (0..k).map(|_| rat(rng.gen_range(-2..=2))).collect();
            let cons = LinearConstraint::new(m.clone(), w).unwrap();
            let p = linear_system_prob(&cons, &opts).unwrap();
            let bound = bounds::halasz_sub(k, &rat(s as i64)).unwrap();
            assert!(bound.dominates(&p), "trial {trial}, s = {s}");
            checked += 1;
        }
    }
    assert!(checked > 50, "hypothesis generator too weak: {checked}");
}

#[test]
fn low_rank_bound_holds_under_verified_hypotheses() {
    // Prop-style low-rank shape: rank A <= r-1, M in H(s), and no large
    // principal submatrix of A is an (M,M)-perturbation of zero. The last
    // condition is checked exhaustively over deletion subsets.
    let mut rng = seeded_rng(802);
    let opts = EnumOptions::serial(26);
    let r = 3usize;
    let mut done = 0;
    let mut attempts = 0;
    while done < 25 {
        attempts += 1;
        assert!(attempts < 2000, "generator starved");
        let n = 7 + attempts % 3;
        let k = attempts % 2;
        let s = 1 + attempts % 2;
        // A = g g^T - h h^T has rank <= 2 = r - 1
        let g: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(-2..=2))).collect();
        let h: Vec<Rational> = (0..n).map(|_| rat(rng.gen_range(-2..=2))).collect();
        let a = RatMatrix::from_fn(n, n, |i, j| &g[i] * &g[j] - &h[i] * &h[j]);
        if rank::rank(&a) > r - 1 {
            continue;
        }
        let m = if k == 0 {
            RatMatrix::empty(n)
        } else {
            random_int_matrix(&mut rng, 1, n, 2)
        };
        if k == 1 && !halasz_membership_oracle(&m, s) {
            continue;
        }
        // no I with |I| >= n-s such that A[IxI] is an (M_I, M_I)-perturbation of 0
        let mut hypothesis_ok = true;
        'subsets: for drop_size in 0..=s {
            let mut subset: Vec<usize> = (0..drop_size).collect();
            loop {
                let keep: Vec<usize> = (0..n).filter(|x| !subset.contains(x)).collect();
                let a_sub = a.submatrix(&keep, &keep);
                let m_sub = m.select_cols(&keep);
                if min_perturbed_rank(&a_sub, &m_sub, &m_sub).unwrap() == 0 {
                    hypothesis_ok = false;
                    break 'subsets;
                }
                if drop_size == 0 || !qlo_core::rank::halasz::next_combination(&mut subset, n) {
                    break;
                }
            }
        }
        if !hypothesis_ok {
            continue;
        }
        let lin: Vec<(usize, Rational)> = (0..n).map(|i| (i, rat(rng.gen_range(-2..=2)))).collect();
        let quad: Vec<(usize, usize, Rational)> = (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .map(|(i, j)| {
                let c = if i == j {
                    a[(i, i)].clone()
                } else {
                    &a[(i, j)] + &a[(j, i)]
                };
                (i, j, c)
            })
            .filter(|(_, _, c)| !c.is_zero())
            .collect();
        let q = QuadPoly::from_monomials(n, &quad, &lin, rat(rng.gen_range(-2..=2))).unwrap();
        let w: Vec<Rational> = (0..k).map(|_| rat(rng.gen_range(-1..=1))).collect();
        let cons = LinearConstraint::new(m.clone(), w).unwrap();
        let hist = histogram(&q, Some(&cons), &opts).unwrap();
        let p = hist.point_prob(&rat(0));
        let bound = bounds::low_rank(k, &rat(s as i64), r).unwrap();
        assert!(bound.dominates(&p), "attempt {attempts}");
        assert!(bound.clamped(), "desk-scale low-rank bounds clamp at 1");
        done += 1;
    }
}

#[test]
fn hamming_ball_bound_holds_on_planted_instances() {
    // The witness-counting Hamming bound, with hypotheses planted directly:
    // disjoint identity blocks guarantee the robust-rank conditions.
    let mut rng = seeded_rng(803);
    let opts = EnumOptions::serial(26);
    for trial in 0..25usize {
        let k = trial % 2;
        let r = 2usize;
        let s = 2usize;
        let block = k + r;
        let m_cols = s * block + 2; // T side
        let n_rows = s * block + 1; // A side
        if m_cols > 12 {
            continue;
        }
        // A carries s disjoint identity blocks at (rows t*block.., cols t*block..)
        let mut a = RatMatrix::zero(n_rows, m_cols);
        for t in 0..s {
            for d in 0..block {
                a[(t * block + d, t * block + d)] = rat(1);
            }
        }
        // sprinkle noise strictly outside the planted blocks (extra row and
        // extra columns only), so the planted rank survives by construction
        for _ in 0..4 {
            let i = rng.gen_range(0..n_rows);
            let j = rng.gen_range(s * block..m_cols);
            a[(i, j)] = rat(rng.gen_range(-2..=2));
            a[(n_rows - 1, rng.gen_range(0..m_cols))] = rat(rng.gen_range(-2..=2));
        }
        // T: k rows carrying disjoint identities inside each I_t
        let t_mat = RatMatrix::from_fn(k, m_cols, |row, col| {
            if col % block == row && col / block < s {
                rat(1)
            } else {
                rat(0)
            }
        });
        // hypotheses re-verified rather than trusted
        let empty_u = RatMatrix::empty(n_rows);
        for t in 0..s {
            let i_t: Vec<usize> = (t * block..(t + 1) * block).collect();
            let j_t: Vec<usize> = (t * block..(t + 1) * block).collect();
            if k > 0 {
                assert_eq!(rank::rank(&t_mat.select_cols(&i_t)), k);
            }
            let sub = a.submatrix(&j_t, &i_t);
            let min_rank =
                min_perturbed_rank(&sub, &t_mat.select_cols(&i_t), &empty_u.select_cols(&j_t))
                    .unwrap();
            // noise cannot spoil a planted identity block from outside it,
            // but verify rather than trust
            assert!(min_rank >= r, "planted block lost its rank");
        }
        let v: Vec<Rational> = (0..n_rows).map(|_| rat(rng.gen_range(-1..=1))).collect();
        let w: Vec<Rational> = (0..k).map(|_| rat(rng.gen_range(-1..=1))).collect();
        let cons = (k > 0).then(|| LinearConstraint::new(t_mat.clone(), w).unwrap());
        // "at most s/6 nonzero coordinates" = fewer than floor(s/6) + 1
        let threshold = s / 6 + 1;
        let p =
            hamming_event_prob_constrained(&a, &v, threshold, cons.as_ref(), &opts).unwrap();
        let bound = bounds::hamming_ball(k, r, &rat(s as i64)).unwrap();
        assert!(bound.dominates(&p), "trial {trial}");
        assert!(bound.clamped(), "the 10^60 constant clamps at desk scale");
    }
}

#[test]
fn hamming_identity_matrix_sanity() {
    // unconstrained special case: the image of the identity never lands on 0
    let opts = EnumOptions::serial(26);
    let a = RatMatrix::identity(6);
    let v = vec![rat(0); 6];
    let p = hamming_event_prob(&a, &v, 3, &opts).unwrap();
    assert!(p.is_zero());
    let p = hamming_event_prob(&a, &v, 7, &opts).unwrap();
    assert_eq!(p.to_rational(), rat(1));
}

#[test]
fn recursion_unrolled_vs_closed_form_grid() {
    // k <= 3, ell <= 6, log2 s in {10, 100, 1000, 10000}
    for k in 0..=3u32 {
        for ell in k..=6u32 {
            for e in [10usize, 100, 1000, 10000] {
                let s = Rational::from_integer(num_traits::pow::pow(
                    num_bigint::BigInt::from(2),
                    e,
                ));
                let unrolled = bounds::recursion_unrolled(k, ell, &s).unwrap();
                let closed = bounds::closed_form(k, ell, &s).unwrap();
                assert!(
                    unrolled.le_not_refuted(&closed),
                    "violated at k={k}, ell={ell}, log2 s={e}"
                );
            }
        }
    }
}

#[test]
fn monte_carlo_wilson_calibration() {
    // Pr[(x1+x2)^2 = 0] = 1/2 exactly; over 200 seeds of 10^5 samples the
    // Wilson interval should cover the truth in at least 95% of runs (the
    // interval is rounded outward, so coverage only improves).
    let q = squared_sum(2);
    let truth = ratio(1, 2);
    let mut covered = 0;
    for seed in 0..200u64 {
        let report = monte_carlo_rademacher(&q, &rat(0), 100_000, seed).unwrap();
        if report.wilson_contains(&truth) {
            covered += 1;
        }
    }
    assert!(covered >= 190, "coverage {covered}/200 below 95%");
}

#[test]
fn m_membership_on_planted_diagonal() {
    // sanity companion for the Hamming harness: the k = 0 reduction counts
    // disjoint nonzero entries
    let a = RatMatrix::from_fn(6, 6, |i, j| if i == j { rat(1) } else { rat(0) });
    let t = RatMatrix::empty(6);
    let u = RatMatrix::empty(6);
    assert!(m_membership(&t, &u, &a, 1, 6).unwrap().is_some());
    assert!(m_membership(&t, &u, &a, 2, 3).unwrap().is_some());
}
