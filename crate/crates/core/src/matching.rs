//! Minimum-weight perfect matching on small complete graphs.
//!
//! The default backend is Edmonds' blossom algorithm (via `rustworkx-core`),
//! run as a maximum-cardinality maximum-weight matching on shifted
//! distances. A `2^n` subset dynamic program is kept as a cross-check for
//! small inputs.

use std::convert::Infallible;

use rustworkx_core::max_weight_matching::max_weight_matching;
use rustworkx_core::petgraph::graph::UnGraph;

use crate::chain::Weight;
use crate::error::{Error, Result};

/// Largest vertex count accepted by the subset dynamic program.
pub const SUBSET_DP_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchingBackend {
    #[default]
    Blossom,
    SubsetDp,
}

/// Symmetric distance table over `n` vertices; `None` means unreachable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceTable {
    n: usize,
    dist: Vec<Option<Weight>>,
}

impl DistanceTable {
    pub fn new(n: usize) -> Self {
        DistanceTable {
            n,
            dist: vec![None; n * n],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn set(&mut self, i: usize, j: usize, d: Option<Weight>) {
        self.dist[i * self.n + j] = d;
        self.dist[j * self.n + i] = d;
    }

    pub fn get(&self, i: usize, j: usize) -> Option<Weight> {
        self.dist[i * self.n + j]
    }
}

/// A perfect pairing and its total distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairing {
    /// Pairs `(i, j)` with `i < j`, sorted.
    pub pairs: Vec<(usize, usize)>,
    pub value: Weight,
}

/// Minimum-weight perfect matching over the finite entries of `table`.
/// Returns `None` when no perfect matching of finite weight exists.
pub fn min_weight_perfect_matching(
    table: &DistanceTable,
    backend: MatchingBackend,
) -> Result<Option<Pairing>> {
    if table.len() % 2 == 1 {
        return Ok(None);
    }
    if table.is_empty() {
        return Ok(Some(Pairing {
            pairs: Vec::new(),
            value: 0,
        }));
    }
    match backend {
        MatchingBackend::Blossom => Ok(blossom(table)),
        MatchingBackend::SubsetDp => subset_dp(table),
    }
}

fn blossom(table: &DistanceTable) -> Option<Pairing> {
    let n = table.len();
    let mut graph: UnGraph<(), i128> = UnGraph::with_capacity(n, n * (n - 1) / 2);
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    // Every perfect matching has n/2 edges, so maximising the sum of
    // (shift - d) over maximum-cardinality matchings minimises the sum of d.
    let shift = (0..n)
        .flat_map(|i| (i + 1..n).filter_map(move |j| table.get(i, j)))
        .map(i128::from)
        .max()
        .unwrap_or(0)
        + 1;
    for i in 0..n {
        for j in i + 1..n {
            if let Some(d) = table.get(i, j) {
                graph.add_edge(nodes[i], nodes[j], shift - i128::from(d));
            }
        }
    }
    let matched = max_weight_matching(&graph, true, |e| Ok::<i128, Infallible>(*e.weight()), false)
        .unwrap_or_else(|never| match never {});
    if matched.len() * 2 != n {
        return None;
    }
    let mut pairs: Vec<(usize, usize)> = matched
        .into_iter()
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect();
    pairs.sort_unstable();
    let value = pairs
        .iter()
        .map(|&(a, b)| table.get(a, b).expect("matched edges are finite"))
        .sum();
    Some(Pairing { pairs, value })
}

/// Exact `O(2^n n)` dynamic program: the lowest unmatched vertex is paired
/// with each remaining candidate.
fn subset_dp(table: &DistanceTable) -> Result<Option<Pairing>> {
    let n = table.len();
    if n > SUBSET_DP_LIMIT {
        return Err(Error::Resource(format!(
            "subset matching supports at most {SUBSET_DP_LIMIT} vertices, got {n}"
        )));
    }
    let full = (1usize << n) - 1;
    // best[mask] = cheapest pairing of the vertices in mask
    let mut best: Vec<Option<Weight>> = vec![None; full + 1];
    let mut choice = vec![0u8; full + 1];
    best[0] = Some(0);
    for mask in 1..=full {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let (Some(d), Some(sub)) = (table.get(i, j), best[rest & !(1 << j)]) else {
                continue;
            };
            if best[mask].is_none_or(|b| d + sub < b) {
                best[mask] = Some(d + sub);
                choice[mask] = j as u8;
            }
        }
    }
    let Some(value) = best[full] else {
        return Ok(None);
    };
    let mut pairs = Vec::with_capacity(n / 2);
    let mut mask = full;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        let j = choice[mask] as usize;
        pairs.push((i, j));
        mask &= !(1 << i) & !(1 << j);
    }
    pairs.sort_unstable();
    Ok(Some(Pairing { pairs, value }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Every perfect pairing, by recursion on the lowest vertex.
    fn all_pairings(items: &[usize]) -> Vec<Vec<(usize, usize)>> {
        if items.is_empty() {
            return vec![vec![]];
        }
        let first = items[0];
        let mut out = Vec::new();
        for k in 1..items.len() {
            let rest: Vec<usize> = items[1..]
                .iter()
                .copied()
                .filter(|&x| x != items[k])
                .collect();
            for mut p in all_pairings(&rest) {
                p.push((first, items[k]));
                out.push(p);
            }
        }
        out
    }

    fn exhaustive(table: &DistanceTable) -> Option<Weight> {
        let items: Vec<usize> = (0..table.len()).collect();
        all_pairings(&items)
            .iter()
            .filter_map(|p| {
                p.iter()
                    .map(|&(a, b)| table.get(a, b))
                    .sum::<Option<Weight>>()
            })
            .min()
    }

    fn check(table: &DistanceTable, expect: Option<Weight>) {
        for backend in [MatchingBackend::Blossom, MatchingBackend::SubsetDp] {
            let got = min_weight_perfect_matching(table, backend).unwrap();
            assert_eq!(got.as_ref().map(|p| p.value), expect, "{backend:?}");
            if let Some(p) = got {
                let mut seen: Vec<usize> = p.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
                seen.sort_unstable();
                assert_eq!(seen, (0..table.len()).collect::<Vec<_>>());
                let total: Weight = p.pairs.iter().map(|&(a, b)| table.get(a, b).unwrap()).sum();
                assert_eq!(total, p.value);
            }
        }
    }

    #[test]
    fn two_vertices() {
        let mut t = DistanceTable::new(2);
        t.set(0, 1, Some(9));
        check(&t, Some(9));
    }

    #[test]
    fn dominant_pairs() {
        let mut t = DistanceTable::new(4);
        for i in 0..4 {
            for j in i + 1..4 {
                t.set(i, j, Some(5));
            }
        }
        t.set(0, 1, Some(1));
        t.set(2, 3, Some(1));
        check(&t, Some(2));
        let p = min_weight_perfect_matching(&t, MatchingBackend::Blossom)
            .unwrap()
            .unwrap();
        assert_eq!(p.pairs, vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn odd_or_disconnected_has_no_matching() {
        check(&DistanceTable::new(3), None);
        let mut t = DistanceTable::new(4);
        t.set(0, 1, Some(1));
        t.set(0, 2, Some(1));
        t.set(0, 3, Some(1));
        check(&t, None);
    }

    #[test]
    fn random_six_vertex_metrics_match_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = 2 * rng.gen_range(1..=4);
            let mut t = DistanceTable::new(n);
            for i in 0..n {
                for j in i + 1..n {
                    let d = if rng.gen_bool(0.15) {
                        None
                    } else {
                        Some(rng.gen_range(0..40))
                    };
                    t.set(i, j, d);
                }
            }
            let expect = exhaustive(&t);
            check(&t, expect);
        }
    }

    #[test]
    fn subset_dp_refuses_large_inputs() {
        let t = DistanceTable::new(22);
        assert!(matches!(
            min_weight_perfect_matching(&t, MatchingBackend::SubsetDp),
            Err(Error::Resource(_))
        ));
    }
}
