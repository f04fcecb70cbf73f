//! Polynomial-time minimum bounded chain in dimension one.
//!
//! An optimal 1-chain bounding a vertex set `U` is a disjoint union of
//! shortest paths between the pairs of a minimum-weight perfect matching of
//! `U` under shortest-path distance. The solver matches each connected
//! component separately and assembles the chain as a symmetric difference of
//! one shortest path per pair.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::chain::{Chain, Weight};
use crate::complex::ComplexSlice;
use crate::error::{Error, Result};
use crate::matching::{min_weight_perfect_matching, DistanceTable, MatchingBackend, Pairing};
use crate::result::{SolveResult, SolveStats, Status};

/// Single-source shortest paths from each source vertex.
///
/// Vertices are indices into the slice's face table (its 0-simplices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceClosure {
    pub sources: Vec<usize>,
    /// `dist[i][v]`: distance from `sources[i]` to `v`, `None` if unreachable.
    pub dist: Vec<Vec<Option<Weight>>>,
    /// `pred[i][v]`: `(previous vertex, edge index)` on the chosen path.
    pub pred: Vec<Vec<Option<(usize, usize)>>>,
}

impl DistanceClosure {
    /// Edge indices of the chosen shortest path from `sources[i]` to `target`.
    pub fn path_edges(&self, i: usize, target: usize) -> Option<Vec<usize>> {
        self.dist[i][target]?;
        let mut edges = Vec::new();
        let mut v = target;
        while let Some((prev, edge)) = self.pred[i][v] {
            edges.push(edge);
            v = prev;
        }
        debug_assert_eq!(v, self.sources[i]);
        Some(edges)
    }
}

fn require_graph(slice: &ComplexSlice) -> Result<()> {
    if slice.dim() != 1 {
        return Err(Error::usage(format!(
            "the dimension-one solver needs a 1-dimensional slice, got dimension {}",
            slice.dim()
        )));
    }
    if !slice.weights().is_non_negative() {
        return Err(Error::usage(
            "the dimension-one solver needs non-negative weights",
        ));
    }
    Ok(())
}

/// Edge endpoints: both faces of a 1-simplex, as sorted vertex indices.
fn endpoints(slice: &ComplexSlice, edge: usize) -> (usize, usize) {
    let f = slice.faces_of(edge);
    (f[0], f[1])
}

/// Dijkstra from every source. Among equal-length paths the predecessor with
/// the smallest vertex id wins.
pub fn distance_closure(slice: &ComplexSlice, sources: &[usize]) -> Result<DistanceClosure> {
    require_graph(slice)?;
    let n = slice.num_faces();
    let weights = slice.weights();
    let mut dist = Vec::with_capacity(sources.len());
    let mut pred = Vec::with_capacity(sources.len());
    for &s in sources {
        if s >= n {
            return Err(Error::usage(format!("source vertex {s} out of range")));
        }
        let mut d: Vec<Option<Weight>> = vec![None; n];
        let mut p: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut settled = vec![false; n];
        let mut heap = BinaryHeap::new();
        d[s] = Some(0);
        heap.push(Reverse((0, s)));
        while let Some(Reverse((du, u))) = heap.pop() {
            if settled[u] {
                continue;
            }
            settled[u] = true;
            for &e in slice.cofaces_of(u) {
                let (a, b) = endpoints(slice, e);
                let v = if a == u { b } else { a };
                if settled[v] {
                    continue;
                }
                let nd = du + weights.get(e);
                let better = match (d[v], p[v]) {
                    (None, _) => true,
                    (Some(old), _) if nd < old => true,
                    (Some(old), Some((prev, _))) => nd == old && u < prev,
                    (Some(_), None) => false,
                };
                if better {
                    if d[v] != Some(nd) {
                        heap.push(Reverse((nd, v)));
                    }
                    d[v] = Some(nd);
                    p[v] = Some((u, e));
                }
            }
        }
        dist.push(d);
        pred.push(p);
    }
    Ok(DistanceClosure {
        sources: sources.to_vec(),
        dist,
        pred,
    })
}

/// Symmetric difference of one chosen shortest path per matched pair.
/// `pairing` indexes into `closure.sources`.
pub fn assemble_chain(pairing: &Pairing, closure: &DistanceClosure) -> Result<Chain> {
    let mut edges = Vec::new();
    for &(i, j) in &pairing.pairs {
        if i >= closure.sources.len() || j >= closure.sources.len() {
            return Err(Error::usage("pairing refers to an unknown source"));
        }
        let path = closure
            .path_edges(i, closure.sources[j])
            .ok_or_else(|| Error::usage("paired vertices are not connected"))?;
        edges.extend(path);
    }
    Ok(Chain::from_indices(1, edges))
}

fn components(slice: &ComplexSlice) -> Vec<usize> {
    let n = slice.num_faces();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = next;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &e in slice.cofaces_of(u) {
                let (a, b) = endpoints(slice, e);
                for v in [a, b] {
                    if label[v] == usize::MAX {
                        label[v] = next;
                        stack.push(v);
                    }
                }
            }
        }
        next += 1;
    }
    label
}

/// Options for [`solve_mbc1`].
#[derive(Debug, Clone, Copy, Default)]
pub struct Mbc1Options {
    pub matching: MatchingBackend,
}

/// Minimum-weight 1-chain `W` with `∂W = U`.
pub fn solve_mbc1(slice: &ComplexSlice, u: &Chain, opts: Mbc1Options) -> Result<SolveResult> {
    require_graph(slice)?;
    if u.dim() != 0 || u.span() > slice.num_faces() {
        return Err(Error::usage(
            "boundary must be a chain of vertices of the slice",
        ));
    }
    let label = components(slice);
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for v in u.iter() {
        groups.entry(label[v]).or_default().push(v);
    }
    let mut stats = SolveStats {
        sources: Some(u.len() as u64),
        ..Default::default()
    };
    if groups.values().any(|g| g.len() % 2 == 1) {
        return Ok(SolveResult::without_solution(Status::Infeasible, stats));
    }

    let mut edges = Chain::empty(1);
    let mut total: Weight = 0;
    for sources in groups.values() {
        let closure = distance_closure(slice, sources)?;
        let mut table = DistanceTable::new(sources.len());
        for i in 0..sources.len() {
            for (j, &target) in sources.iter().enumerate().skip(i + 1) {
                table.set(i, j, closure.dist[i][target]);
            }
        }
        let Some(pairing) = min_weight_perfect_matching(&table, opts.matching)? else {
            return Ok(SolveResult::without_solution(Status::Infeasible, stats));
        };
        total += pairing.value;
        edges = edges.add(&assemble_chain(&pairing, &closure)?)?;
    }
    let weight = edges.weight(slice.weights());
    debug_assert!(weight <= total);
    stats.candidates = Some(groups.len() as u64);
    Ok(SolveResult::optimal(weight, edges, stats))
}
