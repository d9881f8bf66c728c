//! Off-diagonal robustness of a symmetric matrix: the largest s such that
//! every principal submatrix on >= n-s indices keeps a nonzero off-diagonal
//! entry. Dropping the condition for some s means <= s vertices cover every
//! edge of the off-diagonal support graph, so the answer is tau(G) - 1 with
//! tau the exact minimum vertex cover.

use num_traits::Zero;

use crate::algebra::RatMatrix;
use crate::error::{Error, Result};

/// Off-diagonal support graph as adjacency bitmasks.
fn support_graph(a: &RatMatrix) -> Result<Vec<u64>> {
    if !a.is_symmetric() {
        return Err(Error::InvalidParameter(
            "off-diagonal robustness needs a symmetric matrix".into(),
        ));
    }
    let n = a.rows();
    if n > 64 {
        return Err(Error::InvalidParameter(
            "support graphs are limited to 64 vertices".into(),
        ));
    }
    let mut adj = vec![0u64; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && !a[(i, j)].is_zero() {
                adj[i] |= 1 << j;
            }
        }
    }
    Ok(adj)
}

/// Greedy maximal matching in lexicographic edge order.
fn greedy_matching(adj: &[u64], active: u64) -> Vec<(usize, usize)> {
    let n = adj.len();
    let mut used = 0u64;
    let mut pairs = Vec::new();
    for i in 0..n {
        if active >> i & 1 == 0 || used >> i & 1 == 1 {
            continue;
        }
        let candidates = adj[i] & active & !used;
        if candidates != 0 {
            // the lowest free neighbor is always above i: lower vertices were
            // either matched or permanently out of free neighbors
            let j = candidates.trailing_zeros() as usize;
            used |= (1 << i) | (1 << j);
            pairs.push((i.min(j), i.max(j)));
        }
    }
    pairs
}

/// Exact minimum vertex cover by branch and bound: branch on a maximum-degree
/// vertex (take it, or take its whole neighborhood), prune with the matching
/// lower bound.
fn min_vertex_cover_size(adj: &[u64], active: u64, best_so_far: usize) -> usize {
    let n = adj.len();
    let mut degree_max = 0;
    let mut pick = None;
    for i in 0..n {
        if active >> i & 1 == 0 {
            continue;
        }
        let d = (adj[i] & active).count_ones() as usize;
        if d > degree_max {
            degree_max = d;
            pick = Some(i);
        }
    }
    let Some(v) = pick else {
        return 0; // no edges left
    };
    if degree_max == 1 {
        // remaining graph is a matching: one endpoint per edge
        let mut count = 0;
        let mut act = active;
        for i in 0..n {
            if act >> i & 1 == 1 && adj[i] & act != 0 {
                let j = (adj[i] & act).trailing_zeros() as usize;
                act &= !((1 << i) | (1 << j));
                count += 1;
            }
        }
        return count;
    }
    let lb = greedy_matching(adj, active).len();
    if lb >= best_so_far {
        return best_so_far; // cannot beat the incumbent
    }
    // branch 1: v in the cover
    let take_v = 1 + min_vertex_cover_size(adj, active & !(1 << v), best_so_far - 1);
    let mut best = take_v.min(best_so_far);
    // branch 2: all neighbors of v in the cover
    let nb = adj[v] & active;
    let nb_count = nb.count_ones() as usize;
    if nb_count < best {
        let take_nb =
            nb_count + min_vertex_cover_size(adj, active & !nb & !(1 << v), best - nb_count);
        best = best.min(take_nb);
    }
    best
}

/// Exact minimum vertex cover of the off-diagonal support graph.
pub fn min_vertex_cover(a: &RatMatrix) -> Result<usize> {
    let adj = support_graph(a)?;
    let n = adj.len();
    let active = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    Ok(min_vertex_cover_size(&adj, active, n + 1))
}

/// The largest s >= 0 such that every principal submatrix on >= n-s indices
/// has a nonzero off-diagonal entry; -1 when A is diagonal.
pub fn offdiag_robustness(a: &RatMatrix) -> Result<i64> {
    let adj = support_graph(a)?;
    if adj.iter().all(|&m| m == 0) {
        return Ok(-1);
    }
    let n = adj.len();
    let active = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let tau = min_vertex_cover_size(&adj, active, n + 1);
    Ok(tau as i64 - 1)
}

/// Greedy maximal matching of the off-diagonal support graph; the returned
/// size lower-bounds the maximum matching, and tau <= 2 * size.
pub fn matching_lower_bound(a: &RatMatrix) -> Result<(usize, Vec<(usize, usize)>)> {
    let adj = support_graph(a)?;
    let n = adj.len();
    let active = if n == 0 {
        0
    } else if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    };
    let pairs = greedy_matching(&adj, active);
    Ok((pairs.len(), pairs))
}

/// Brute-force oracle: tests every index subset of size >= n - s directly.
pub fn offdiag_robustness_oracle(a: &RatMatrix) -> Result<i64> {
    let adj = support_graph(a)?;
    if adj.iter().all(|&m| m == 0) {
        return Ok(-1);
    }
    let n = adj.len();
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let holds_for = |s: usize| -> bool {
        // every S with |S| >= n - s must contain an edge
        for mask in 0..=full {
            if (mask.count_ones() as usize) < n - s {
                continue;
            }
            let has_edge = (0..n).any(|i| mask >> i & 1 == 1 && adj[i] & mask != 0);
            if !has_edge {
                return false;
            }
        }
        true
    };
    let mut s = 0;
    while s < n && holds_for(s + 1) {
        s += 1;
    }
    Ok(s as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    fn from_edges(n: usize, edges: &[(usize, usize)]) -> RatMatrix {
        let mut a = RatMatrix::zero(n, n);
        for &(i, j) in edges {
            a[(i, j)] = rat(1);
            a[(j, i)] = rat(1);
        }
        a
    }

    #[test]
    fn single_edge_gives_zero() {
        let a = from_edges(4, &[(0, 1)]);
        assert_eq!(offdiag_robustness(&a).unwrap(), 0);
    }

    #[test]
    fn complete_graph_k5() {
        let edges: Vec<(usize, usize)> = (0..5)
            .flat_map(|i| (i + 1..5).map(move |j| (i, j)))
            .collect();
        let a = from_edges(5, &edges);
        assert_eq!(min_vertex_cover(&a).unwrap(), 4);
        assert_eq!(offdiag_robustness(&a).unwrap(), 3);
    }

    #[test]
    fn diagonal_matrix_sentinel() {
        let a = RatMatrix::identity(4);
        assert_eq!(offdiag_robustness(&a).unwrap(), -1);
    }

    #[test]
    fn matching_examples() {
        // K4: two disjoint edges.
        let edges: Vec<(usize, usize)> = (0..4)
            .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
            .collect();
        let (l, pairs) = matching_lower_bound(&from_edges(4, &edges)).unwrap();
        assert_eq!(l, 2);
        assert_eq!(pairs, vec![(0, 1), (2, 3)]);
        // path 1-2-3
        let (l, _) = matching_lower_bound(&from_edges(3, &[(0, 1), (1, 2)])).unwrap();
        assert_eq!(l, 1);
        // empty graph
        let (l, pairs) = matching_lower_bound(&RatMatrix::zero(3, 3)).unwrap();
        assert_eq!(l, 0);
        assert!(pairs.is_empty());
    }

    #[test]
    fn agrees_with_subset_oracle() {
        use crate::experiments::families::seeded_rng;
        use rand::Rng;
        let mut rng = seeded_rng(404);
        for _ in 0..40 {
            let n = rng.gen_range(2..=8);
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(0.4) {
                        edges.push((i, j));
                    }
                }
            }
            let a = from_edges(n, &edges);
            assert_eq!(
                offdiag_robustness(&a).unwrap(),
                offdiag_robustness_oracle(&a).unwrap(),
                "edges {edges:?}"
            );
        }
    }

    #[test]
    fn matching_and_cover_inequalities() {
        use crate::experiments::families::seeded_rng;
        use rand::Rng;
        let mut rng = seeded_rng(1000);
        for _ in 0..40 {
            let n = rng.gen_range(2..=10);
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(0.35) {
                        edges.push((i, j));
                    }
                }
            }
            if edges.is_empty() {
                continue;
            }
            let a = from_edges(n, &edges);
            let (l, _) = matching_lower_bound(&a).unwrap();
            let s = offdiag_robustness(&a).unwrap();
            // l - 1 <= s <= 2l - 1 from nu <= tau <= 2 nu
            assert!(l as i64 - 1 <= s && s < 2 * l as i64, "l={l}, s={s}");
        }
    }
}
