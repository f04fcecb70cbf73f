//! Shortest-path search from a boundary `U` to the empty chain.
//!
//! States are `(d-1)`-chains. From a chain `U'` the search fixes one pivot
//! face `ρ ∈ U'` and moves to `U' △ ∂σ` for every coface `σ` of `ρ`, paying
//! `w_σ`. Every bounding chain of `U` can be added one simplex at a time in
//! this way, so the cheapest path to `∅` is an optimal bounding chain.
//!
//! With a bound `k` on the number of simplices, states that would exceed `k`
//! steps are dropped. For non-uniform weights the visited set is keyed by
//! `(chain, steps)`, which is the layered graph over step counts realised
//! implicitly.

use std::cmp::{Ordering, Reverse};
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};
use std::str::FromStr;

use crate::chain::{symmetric_difference, Chain, Weight};
use crate::complex::ComplexSlice;
use crate::error::{Error, Result};
use crate::gf2::{feasibility_check, Gf2Matrix};
use crate::result::{SolveResult, SolveStats, Status};

/// How the pivot face of a chain is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotStrategy {
    MinIndex,
    /// Fewest cofaces, ties to the smaller index.
    #[default]
    MinCofaceDegree,
    MaxIndex,
}

impl PivotStrategy {
    pub const ALL: [PivotStrategy; 3] = [
        PivotStrategy::MinIndex,
        PivotStrategy::MinCofaceDegree,
        PivotStrategy::MaxIndex,
    ];
}

impl FromStr for PivotStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min-index" => Ok(PivotStrategy::MinIndex),
            "min-coface" => Ok(PivotStrategy::MinCofaceDegree),
            "max-index" => Ok(PivotStrategy::MaxIndex),
            other => Err(Error::usage(format!("unknown pivot strategy {other:?}"))),
        }
    }
}

/// Picks the pivot face of a non-empty chain.
pub fn pivot_select(chain: &Chain, strategy: PivotStrategy, a: &Gf2Matrix) -> Result<usize> {
    let members = chain.members();
    let pick = match strategy {
        PivotStrategy::MinIndex => members.first().copied(),
        PivotStrategy::MaxIndex => members.last().copied(),
        PivotStrategy::MinCofaceDegree => {
            members.iter().copied().min_by_key(|&r| (a.row(r).len(), r))
        }
    };
    pick.ok_or_else(|| Error::usage("cannot pick a pivot in an empty chain"))
}

/// A node of the search: the remaining boundary and how it was reached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchState {
    pub chain: Chain,
    pub cost: Weight,
    pub steps: usize,
    /// `(parent state id, column added)`.
    pub parent: Option<(usize, usize)>,
}

/// Successors of `state`: one per coface of its pivot face.
/// `id` is the arena index successors record as their parent.
pub fn expand_state(
    state: &SearchState,
    id: usize,
    a: &Gf2Matrix,
    pivot: PivotStrategy,
) -> Result<Vec<SearchState>> {
    let rho = pivot_select(&state.chain, pivot, a)?;
    Ok(a.row(rho)
        .iter()
        .map(|&sigma| SearchState {
            chain: Chain::from_sorted(
                state.chain.dim(),
                symmetric_difference(state.chain.members(), a.column(sigma)),
            ),
            cost: state.cost + a.weights().get(sigma),
            steps: state.steps + 1,
            parent: Some((id, sigma)),
        })
        .collect())
}

#[derive(Debug, Clone, Copy)]
pub struct DijkstraOptions {
    /// Largest number of simplices a solution may contain.
    pub k_bound: Option<usize>,
    pub pivot: PivotStrategy,
    /// Run Gaussian elimination first so infeasible inputs stop immediately.
    pub check_feasibility: bool,
    /// Cap on distinct visited states.
    pub max_states: Option<usize>,
}

impl Default for DijkstraOptions {
    fn default() -> Self {
        DijkstraOptions {
            k_bound: None,
            pivot: PivotStrategy::default(),
            check_feasibility: true,
            max_states: None,
        }
    }
}

struct Queued {
    cost: Weight,
    steps: usize,
    chain: Chain,
    id: usize,
}

impl Queued {
    fn key(&self) -> (Weight, usize, &Chain) {
        (self.cost, self.steps, &self.chain)
    }
}

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Queued {}

impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Queued {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// Solves the bounded chain problem on a complex slice.
pub fn solve_dijkstra(
    slice: &ComplexSlice,
    u: &Chain,
    opts: DijkstraOptions,
) -> Result<SolveResult> {
    search(&slice.boundary_matrix(), u, opts)
}

/// Solves `min w(x)` subject to `Ax = u` by the search described above.
pub fn search(a: &Gf2Matrix, u: &Chain, opts: DijkstraOptions) -> Result<SolveResult> {
    run(a, u, opts, &mut |_| {})
}

pub(crate) fn run(
    a: &Gf2Matrix,
    u: &Chain,
    opts: DijkstraOptions,
    on_extract: &mut dyn FnMut(&SearchState),
) -> Result<SolveResult> {
    if !a.weights().is_non_negative() {
        return Err(Error::usage("the search solver needs non-negative weights"));
    }
    if u.span() > a.rows() {
        return Err(Error::usage("boundary refers to a row outside the matrix"));
    }
    let mut stats = SolveStats {
        coface_degree: Some(a.max_row_degree() as u64),
        ..Default::default()
    };
    if opts.check_feasibility && !u.is_empty() && feasibility_check(a, u)?.is_none() {
        return Ok(SolveResult::without_solution(Status::Infeasible, stats));
    }

    let layered = opts.k_bound.is_some() && !a.weights().is_uniform();
    let layer = |steps: usize| if layered { steps } else { 0 };
    let start = Chain::from_sorted(u.dim(), u.members().to_vec());

    let mut arena: Vec<SearchState> = vec![SearchState {
        chain: start.clone(),
        cost: 0,
        steps: 0,
        parent: None,
    }];
    let mut settled = vec![false];
    let mut best: HashMap<(Chain, usize), usize> = HashMap::new();
    best.insert((start.clone(), 0), 0);
    let mut heap = BinaryHeap::new();
    heap.push(Reverse(Queued {
        cost: 0,
        steps: 0,
        chain: start,
        id: 0,
    }));

    let mut expanded = 0u64;
    let mut frontier_peak = 1u64;
    let mut pruned = false;
    let mut found = None;

    while let Some(Reverse(entry)) = heap.pop() {
        let id = entry.id;
        if settled[id] || best.get(&(entry.chain, layer(arena[id].steps))) != Some(&id) {
            continue;
        }
        settled[id] = true;
        on_extract(&arena[id]);
        if arena[id].chain.is_empty() {
            found = Some(id);
            break;
        }
        if opts.k_bound.is_some_and(|k| arena[id].steps >= k) {
            // every successor would exceed the bound
            if !a
                .row(pivot_select(&arena[id].chain, opts.pivot, a)?)
                .is_empty()
            {
                pruned = true;
            }
            continue;
        }
        expanded += 1;
        for next in expand_state(&arena[id], id, a, opts.pivot)? {
            let key = (next.chain.clone(), layer(next.steps));
            let next_id = arena.len();
            match best.entry(key) {
                Entry::Occupied(mut slot) => {
                    let old = &arena[*slot.get()];
                    if settled[*slot.get()] || (old.cost, old.steps) <= (next.cost, next.steps) {
                        continue;
                    }
                    slot.insert(next_id);
                }
                Entry::Vacant(slot) => {
                    slot.insert(next_id);
                }
            }
            if opts.max_states.is_some_and(|cap| best.len() > cap) {
                stats.states_expanded = Some(expanded);
                stats.states_generated = Some(arena.len() as u64);
                stats.frontier_peak = Some(frontier_peak);
                return Ok(SolveResult::without_solution(Status::ResourceLimit, stats));
            }
            heap.push(Reverse(Queued {
                cost: next.cost,
                steps: next.steps,
                chain: next.chain.clone(),
                id: next_id,
            }));
            arena.push(next);
            settled.push(false);
        }
        frontier_peak = frontier_peak.max(heap.len() as u64);
    }

    stats.states_expanded = Some(expanded);
    stats.states_generated = Some(arena.len() as u64);
    stats.frontier_peak = Some(frontier_peak);

    let Some(goal) = found else {
        let status = if pruned {
            Status::NotFoundWithinBound
        } else {
            Status::Infeasible
        };
        return Ok(SolveResult::without_solution(status, stats));
    };
    let mut columns = Vec::new();
    let mut at = goal;
    while let Some((prev, sigma)) = arena[at].parent {
        columns.push(sigma);
        at = prev;
    }
    let witness = Chain::from_indices(a.source_dim(), columns);
    let weight = witness.weight(a.weights());
    debug_assert!(weight <= arena[goal].cost);
    Ok(SolveResult::optimal(weight, witness, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::Simplex;
    use crate::gen;

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    fn unit(tops: &[&[u32]]) -> ComplexSlice {
        ComplexSlice::build(2, tops.iter().map(|t| (s(t), 1)).collect(), vec![]).unwrap()
    }

    #[test]
    fn single_triangle() {
        let k = unit(&[&[1, 2, 3]]);
        let u = k.boundary(&Chain::from_indices(2, [0])).unwrap();
        let r = solve_dijkstra(&k, &u, DijkstraOptions::default()).unwrap();
        assert_eq!(r.status, Status::Optimal);
        assert_eq!(r.weight, 1);
        assert_eq!(r.witness.unwrap().members(), &[0]);
        assert_eq!(r.stats.states_expanded, Some(1));
    }

    #[test]
    fn empty_boundary_needs_no_expansion() {
        let k = unit(&[&[1, 2, 3]]);
        let r = solve_dijkstra(&k, &Chain::empty(1), DijkstraOptions::default()).unwrap();
        assert_eq!((r.status, r.weight), (Status::Optimal, 0));
        assert_eq!(r.stats.states_expanded, Some(0));
    }

    #[test]
    fn octahedron_minus_face() {
        let (k, u) = gen::octahedron_minus_face();
        for pivot in PivotStrategy::ALL {
            let opts = DijkstraOptions {
                pivot,
                ..Default::default()
            };
            let r = solve_dijkstra(&k, &u, opts).unwrap();
            assert_eq!(r.weight, 7);
            assert_eq!(r.witness.unwrap().len(), 7);
        }
    }

    #[test]
    fn pivot_choices() {
        let k = gen::octahedron().slice;
        let a = k.boundary_matrix();
        let c = Chain::from_indices(1, [5, 2, 9]);
        assert_eq!(pivot_select(&c, PivotStrategy::MinIndex, &a).unwrap(), 2);
        assert_eq!(pivot_select(&c, PivotStrategy::MaxIndex, &a).unwrap(), 9);
        // all degrees are 2 on the octahedron, so the index breaks the tie
        assert_eq!(
            pivot_select(&c, PivotStrategy::MinCofaceDegree, &a).unwrap(),
            2
        );
        let single = Chain::from_indices(1, [7]);
        for p in PivotStrategy::ALL {
            assert_eq!(pivot_select(&single, p, &a).unwrap(), 7);
        }
        assert!(pivot_select(&Chain::empty(1), PivotStrategy::MinIndex, &a).is_err());

        let k = unit(&[&[1, 2, 3], &[2, 3, 4]]);
        let a = k.boundary_matrix();
        let shared = k.face_index(&s(&[2, 3])).unwrap();
        let lone = k.face_index(&s(&[3, 4])).unwrap();
        let c = Chain::from_indices(1, [shared, lone]);
        assert_eq!(
            pivot_select(&c, PivotStrategy::MinCofaceDegree, &a).unwrap(),
            lone
        );
    }

    #[test]
    fn expansion() {
        let k = unit(&[&[1, 2, 3], &[2, 3, 4]]);
        let a = k.boundary_matrix();
        let quad = k.boundary(&Chain::from_indices(2, [0, 1])).unwrap();
        let state = SearchState {
            chain: quad,
            cost: 0,
            steps: 0,
            parent: None,
        };
        let next = expand_state(&state, 0, &a, PivotStrategy::MinIndex).unwrap();
        // pivot {1,2} has the single coface {1,2,3}
        assert_eq!(next.len(), 1);
        let expect = k.boundary(&Chain::from_indices(2, [1])).unwrap();
        assert_eq!(next[0].chain, expect);
        assert_eq!(
            (next[0].cost, next[0].steps, next[0].parent),
            (1, 1, Some((0, 0)))
        );

        let k = gen::octahedron().slice;
        let a = k.boundary_matrix();
        let state = SearchState {
            chain: k.boundary(&Chain::from_indices(2, [0, 3])).unwrap(),
            cost: 0,
            steps: 0,
            parent: None,
        };
        for p in PivotStrategy::ALL {
            assert_eq!(expand_state(&state, 0, &a, p).unwrap().len(), 2);
        }
    }

    #[test]
    fn extracted_costs_never_decrease() {
        let inst = gen::random_slice(&gen::RandomSliceParams {
            top: 14,
            vertices: 7,
            dim: 2,
            seed: 3,
            max_weight: 9,
            boundary_density: 0.4,
        })
        .unwrap();
        let a = inst.slice.boundary_matrix();
        let mut costs = Vec::new();
        let r = run(&a, &inst.boundary, DijkstraOptions::default(), &mut |s| {
            costs.push(s.cost)
        })
        .unwrap();
        assert_eq!(r.status, Status::Optimal);
        assert!(costs.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn infeasible_and_bounded() {
        let (k, u) = gen::octahedron_minus_face();
        for check in [true, false] {
            let opts = DijkstraOptions {
                k_bound: Some(6),
                check_feasibility: check,
                ..Default::default()
            };
            assert_eq!(
                solve_dijkstra(&k, &u, opts).unwrap().status,
                Status::NotFoundWithinBound
            );
        }
        let opts = DijkstraOptions {
            k_bound: Some(7),
            ..Default::default()
        };
        assert_eq!(solve_dijkstra(&k, &u, opts).unwrap().weight, 7);

        let k = unit(&[&[1, 2, 3]]);
        let u = k.face_chain(&[s(&[1, 2])]).unwrap();
        for check in [true, false] {
            let opts = DijkstraOptions {
                check_feasibility: check,
                ..Default::default()
            };
            assert_eq!(
                solve_dijkstra(&k, &u, opts).unwrap().status,
                Status::Infeasible
            );
        }
    }

    #[test]
    fn state_cap() {
        let (k, u) = gen::octahedron_minus_face();
        let opts = DijkstraOptions {
            max_states: Some(3),
            ..Default::default()
        };
        assert_eq!(
            solve_dijkstra(&k, &u, opts).unwrap().status,
            Status::ResourceLimit
        );
    }

    #[test]
    fn negative_weights_rejected() {
        let k = ComplexSlice::build(2, vec![(s(&[1, 2, 3]), -1)], vec![]).unwrap();
        assert!(solve_dijkstra(&k, &Chain::empty(1), DijkstraOptions::default()).is_err());
    }
}
