//! Named instance families used by the sweep harness and the test suites.

use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{QuadPoly, RatMatrix};
use crate::num::{rat, ratio, Rational};

/// (x_1 + ... + x_m)^2.
pub fn squared_sum(m: usize) -> QuadPoly {
    let mut quad = Vec::new();
    for i in 0..m {
        quad.push((i, i, rat(1)));
        for j in i + 1..m {
            quad.push((i, j, rat(2)));
        }
    }
    QuadPoly::from_monomials(m, &quad, &[], rat(0)).expect("well-formed family")
}

/// (x_1 + ... + x_h)(x_{h+1} + ... + x_n) with h = n/2.
pub fn bilinear_split(n: usize) -> QuadPoly {
    let h = n / 2;
    let mut quad = Vec::new();
    for i in 0..h {
        for j in h..n {
            quad.push((i, j, rat(1)));
        }
    }
    QuadPoly::from_monomials(n, &quad, &[], rat(0)).expect("well-formed family")
}

/// (1 + x_1)(x_1 + x_2 + ... + x_n), which vanishes whenever xi_1 = -1.
pub fn pinned_product(n: usize) -> QuadPoly {
    let mut quad = vec![(0, 0, rat(1))];
    for j in 1..n {
        quad.push((0, j, rat(1)));
    }
    let lin: Vec<(usize, Rational)> = (0..n).map(|i| (i, rat(1))).collect();
    QuadPoly::from_monomials(n, &quad, &lin, rat(0)).expect("well-formed family")
}

/// Small random rational in [-max_num/max_den, max_num/max_den].
pub fn random_rational(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rational {
    let num = rng.gen_range(-max_num..=max_num);
    let den = rng.gen_range(1..=max_den);
    ratio(num, den)
}

/// Dense random quadratic with all monomial coefficients drawn independently.
pub fn random_dense(rng: &mut ChaCha8Rng, n: usize) -> QuadPoly {
    let mut quad = Vec::new();
    for i in 0..n {
        for j in i..n {
            quad.push((i, j, random_rational(rng, 4, 3)));
        }
    }
    let lin: Vec<(usize, Rational)> = (0..n).map(|i| (i, random_rational(rng, 4, 3))).collect();
    QuadPoly::from_monomials(n, &quad, &lin, random_rational(rng, 4, 3)).expect("well-formed")
}

/// Random quadratic whose off-diagonal support is a perfect matching on
/// disjoint pairs (the MNV-style nondegenerate shape).
pub fn random_matching_support(rng: &mut ChaCha8Rng, pairs: usize) -> QuadPoly {
    let n = 2 * pairs;
    let mut quad = Vec::new();
    for p in 0..pairs {
        let mut c = random_rational(rng, 4, 3);
        if c.is_zero() {
            c = rat(1);
        }
        quad.push((2 * p, 2 * p + 1, c));
    }
    QuadPoly::from_monomials(n, &quad, &[], rat(0)).expect("well-formed")
}

/// Random linear polynomial with nonzero coefficients.
pub fn random_linear(rng: &mut ChaCha8Rng, n: usize) -> QuadPoly {
    let lin: Vec<(usize, Rational)> = (0..n)
        .map(|i| {
            let mut c = random_rational(rng, 6, 4);
            if c.is_zero() {
                c = ratio(1, 2);
            }
            (i, c)
        })
        .collect();
    QuadPoly::from_monomials(n, &[], &lin, rat(0)).expect("well-formed")
}

/// Random k x n matrix with small integer entries.
pub fn random_int_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, max: i64) -> RatMatrix {
    RatMatrix::from_fn(rows, cols, |_, _| rat(rng.gen_range(-max..=max)))
}

/// Random symmetric n x n matrix with dense small rational entries.
pub fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> RatMatrix {
    let mut a = RatMatrix::zero(n, n);
    for i in 0..n {
        for j in i..n {
            let v = random_rational(rng, 5, 2);
            a[(i, j)] = v.clone();
            a[(j, i)] = v;
        }
    }
    a
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
