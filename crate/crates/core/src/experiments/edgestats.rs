//! Induced edge statistics N_G(k, l): over all k-vertex subsets of a graph,
//! how many induce exactly l edges.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::num::{binomial, Rational};
use crate::rank::halasz::next_combination;

/// Simple graph on up to 64 vertices, adjacency kept as bitmasks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > 64 {
            return Err(Error::InvalidParameter(
                "graphs are limited to 64 vertices".into(),
            ));
        }
        let mut adj = vec![0u64; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::IndexOutOfRange {
                    index: u.max(v),
                    dim: n,
                });
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("loop at vertex {u}")));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(Graph { n, adj })
    }

    pub fn complete(n: usize) -> Self {
        Self::new(
            n,
            &(0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .collect::<Vec<_>>(),
        )
        .expect("complete graph is simple")
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            adj: vec![0; n],
        }
    }

    pub fn cycle(n: usize) -> Self {
        Self::new(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>())
            .expect("cycle is simple")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    /// Parses an edge-list text: one "u v" pair per line, 0-indexed; blank
    /// lines and lines starting with '#' are skipped. The vertex count is
    /// 1 + the largest index unless `n` is given.
    pub fn parse_edge_list(text: &str, n: Option<usize>) -> Result<Self> {
        let mut edges = Vec::new();
        let mut max_v = 0usize;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let (Some(u), Some(v)) = (it.next(), it.next()) else {
                return Err(Error::Parse(format!("line {}: expected 'u v'", lineno + 1)));
            };
            let u: usize = u
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad vertex {u:?}", lineno + 1)))?;
            let v: usize = v
                .parse()
                .map_err(|_| Error::Parse(format!("line {}: bad vertex {v:?}", lineno + 1)))?;
            max_v = max_v.max(u).max(v);
            edges.push((u, v));
        }
        let n = n.unwrap_or(if edges.is_empty() { 0 } else { max_v + 1 });
        Self::new(n, &edges)
    }
}

/// Exact counts N_G(k, l) over all k-subsets, bitset implementation.
pub fn edge_stats(g: &Graph, k: usize, cap: u64) -> Result<BTreeMap<usize, u64>> {
    if k > g.n {
        return Ok(BTreeMap::new());
    }
    let total = binomial(g.n as u64, k as u64);
    if total > cap.into() {
        return Err(Error::InvalidParameter(format!(
            "C({}, {k}) = {total} exceeds the cap {cap}",
            g.n
        )));
    }
    let mut counts: BTreeMap<usize, u64> = BTreeMap::new();
    if k == 0 {
        counts.insert(0, 1);
        return Ok(counts);
    }
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let mask: u64 = subset.iter().fold(0, |acc, &v| acc | 1 << v);
        let edges: usize = subset
            .iter()
            .map(|&v| (g.adj[v] & mask).count_ones() as usize)
            .sum::<usize>()
            / 2;
        *counts.entry(edges).or_insert(0) += 1;
        if !next_combination(&mut subset, g.n) {
            break;
        }
    }
    Ok(counts)
}

/// Independent second implementation: depth-first combination walk carrying
/// the induced edge count incrementally.
pub fn edge_stats_recursive(g: &Graph, k: usize) -> BTreeMap<usize, u64> {
    let mut counts = BTreeMap::new();
    if k > g.n {
        return counts;
    }
    if k == 0 {
        counts.insert(0, 1);
        return counts;
    }
    fn walk(
        g: &Graph,
        k: usize,
        start: usize,
        chosen_mask: u64,
        chosen_len: usize,
        edges: usize,
        counts: &mut BTreeMap<usize, u64>,
    ) {
        if chosen_len == k {
            *counts.entry(edges).or_insert(0) += 1;
            return;
        }
        for v in start..g.n {
            if g.n - v < k - chosen_len {
                break;
            }
            let added = (g.adj[v] & chosen_mask).count_ones() as usize;
            walk(
                g,
                k,
                v + 1,
                chosen_mask | 1 << v,
                chosen_len + 1,
                edges + added,
                counts,
            );
        }
    }
    walk(g, k, 0, 0, 0, 0, &mut counts);
    counts
}

/// Normalized ratio N / C(n, k) for one count.
pub fn normalized_ratio(g: &Graph, k: usize, count: u64) -> Rational {
    let total = binomial(g.n as u64, k as u64);
    Rational::new(count.into(), num_bigint::BigInt::from(total))
}

/// The comparison-only shape 1/sqrt(min(l, C(k,2)-l)/k) with unit constant;
/// None at the degenerate ends l = 0 and l = C(k,2).
pub fn inducibility_shape(k: usize, l: usize) -> Option<f64> {
    let kc2 = k * (k - 1) / 2;
    let m = l.min(kc2.saturating_sub(l));
    if m == 0 {
        return None;
    }
    Some(1.0 / ((m as f64) / (k as f64)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    #[test]
    fn complete_and_empty_hit_the_ends() {
        for n in [5, 8] {
            for k in [2, 3, 4] {
                let kc2 = k * (k - 1) / 2;
                let total = binomial(n as u64, k as u64);
                let complete = edge_stats(&Graph::complete(n), k, 1 << 30).unwrap();
                assert_eq!(complete.len(), 1);
                assert_eq!(u64::try_from(&total).unwrap(), complete[&kc2]);
                assert_eq!(
                    normalized_ratio(&Graph::complete(n), k, complete[&kc2]),
                    rat(1)
                );
                let empty = edge_stats(&Graph::empty(n), k, 1 << 30).unwrap();
                assert_eq!(empty[&0], u64::try_from(&total).unwrap());
            }
        }
    }

    #[test]
    fn five_cycle_triples() {
        let counts = edge_stats(&Graph::cycle(5), 3, 1 << 30).unwrap();
        let expected: BTreeMap<usize, u64> = [(1, 5), (2, 5)].into_iter().collect();
        assert_eq!(counts, expected);
    }

    #[test]
    fn counts_sum_to_binomial() {
        let g = Graph::new(7, &[(0, 1), (1, 2), (2, 3), (0, 3), (4, 5), (5, 6)]).unwrap();
        for k in 1..=5 {
            let counts = edge_stats(&g, k, 1 << 30).unwrap();
            let sum: u64 = counts.values().sum();
            assert_eq!(sum, u64::try_from(&binomial(7, k as u64)).unwrap());
        }
    }

    #[test]
    fn bitset_and_recursive_implementations_agree() {
        use crate::experiments::families::seeded_rng;
        use rand::Rng;
        let mut rng = seeded_rng(2024);
        for _ in 0..30 {
            let n = rng.gen_range(3..=10);
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(0.4) {
                        edges.push((i, j));
                    }
                }
            }
            let g = Graph::new(n, &edges).unwrap();
            for k in 1..=n.min(5) {
                assert_eq!(
                    edge_stats(&g, k, 1 << 30).unwrap(),
                    edge_stats_recursive(&g, k)
                );
            }
        }
    }

    #[test]
    fn edge_list_parsing() {
        let g = Graph::parse_edge_list("0 1\n1 2\n\n# comment\n2 0\n", None).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.edge_count(), 3);
        assert!(Graph::parse_edge_list("0 zero", None).is_err());
        assert!(Graph::parse_edge_list("1 1", None).is_err());
    }

    #[test]
    fn shape_column_degenerates_at_the_ends() {
        assert!(inducibility_shape(4, 0).is_none());
        assert!(inducibility_shape(4, 6).is_none());
        let mid = inducibility_shape(4, 3).unwrap();
        assert!((mid - (4.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }
}
