//! Single entry point over all solvers, with mandatory witness verification.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::chain::{Chain, WeightVector};
use crate::complex::ComplexSlice;
use crate::dijkstra::{self, DijkstraOptions, PivotStrategy};
use crate::error::{Error, Result};
use crate::gf2::{hasse_graph, Gf2Matrix};
use crate::gmld::{solve_gmld, GmldOptions};
use crate::matching::MatchingBackend;
use crate::mbc1::{solve_mbc1, Mbc1Options};
use crate::oracle::{brute_force_mld, BruteMode};
use crate::result::{SolveResult, SolveStats, Status};
use crate::td::{greedy_decomposition, make_nice, Heuristic, NiceTreeDecomposition};

/// A bounded chain instance on a complex, or a decoding instance on a matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Complex {
        slice: ComplexSlice,
        boundary: Chain,
    },
    Matrix {
        matrix: Gf2Matrix,
        target: Chain,
    },
}

impl Instance {
    /// The matrix form `(A, u)` of the instance.
    pub fn to_mld(&self) -> Result<(Gf2Matrix, Chain)> {
        match self {
            Instance::Complex { slice, boundary } => {
                let (a, u, _) = mbc_to_mld(slice, boundary)?;
                Ok((a, u))
            }
            Instance::Matrix { matrix, target } => Ok((matrix.clone(), target.clone())),
        }
    }
}

/// Rewrites `MBC_d(K, U)` as `MLD(A, u, ω)` with `A = ∂_d`.
pub fn mbc_to_mld(slice: &ComplexSlice, u: &Chain) -> Result<(Gf2Matrix, Chain, WeightVector)> {
    if u.dim() + 1 != slice.dim() {
        return Err(Error::input(format!(
            "boundary has dimension {} but the complex has dimension {}",
            u.dim(),
            slice.dim()
        )));
    }
    let a = slice.boundary_matrix();
    let target = a
        .row_chain(u.iter())
        .map_err(|_| Error::input("boundary refers to an unknown face"))?;
    let weights = slice.weights().clone();
    Ok((a, target, weights))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Mbc1,
    Dijkstra,
    Treewidth,
    Brute,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::Mbc1,
        Algorithm::Dijkstra,
        Algorithm::Treewidth,
        Algorithm::Brute,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Mbc1 => "mbc1",
            Algorithm::Dijkstra => "dijkstra",
            Algorithm::Treewidth => "treewidth",
            Algorithm::Brute => "brute",
        }
    }

    /// Whether the algorithm accepts the instance at all.
    pub fn applies_to(self, instance: &Instance) -> bool {
        match (self, instance) {
            (Algorithm::Mbc1, Instance::Complex { slice, .. }) => {
                slice.dim() == 1 && slice.weights().is_non_negative()
            }
            (Algorithm::Mbc1, Instance::Matrix { .. }) => false,
            (Algorithm::Dijkstra, Instance::Complex { slice, .. }) => {
                slice.weights().is_non_negative()
            }
            (Algorithm::Dijkstra, Instance::Matrix { matrix, .. }) => {
                matrix.weights().is_non_negative()
            }
            _ => true,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                Error::usage(format!(
                    "unknown algorithm {s:?} (expected mbc1, dijkstra, treewidth or brute)"
                ))
            })
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Dijkstra: largest solution size considered.
    pub k_bound: Option<usize>,
    pub pivot: PivotStrategy,
    pub check_feasibility: bool,
    pub max_states: Option<usize>,
    /// Treewidth: decomposition to use instead of a greedy one.
    pub decomposition: Option<NiceTreeDecomposition>,
    pub heuristic: Heuristic,
    pub max_bag_bits: usize,
    pub brute_mode: BruteMode,
    pub matching: MatchingBackend,
    /// Record wall time in the stats. Off by default so output is reproducible.
    pub timing: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        let d = DijkstraOptions::default();
        SolveOptions {
            k_bound: d.k_bound,
            pivot: d.pivot,
            check_feasibility: d.check_feasibility,
            max_states: d.max_states,
            decomposition: None,
            heuristic: Heuristic::default(),
            max_bag_bits: GmldOptions::default().max_bag_bits,
            brute_mode: BruteMode::default(),
            matching: MatchingBackend::default(),
            timing: false,
        }
    }
}

/// Greedy nice tree decomposition of the Hasse graph of `a`.
pub fn decompose_matrix(a: &Gf2Matrix, heuristic: Heuristic) -> Result<NiceTreeDecomposition> {
    make_nice(&greedy_decomposition(&hasse_graph(a).to_graph(), heuristic))
}

/// Solves `instance` with `algorithm` and checks any witness before
/// returning it. Resource errors become a `ResourceLimit` status.
pub fn solve(
    instance: &Instance,
    algorithm: Algorithm,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    let (a, u) = instance.to_mld()?;
    let started = Instant::now();
    let outcome = dispatch(instance, &a, &u, algorithm, opts);
    let elapsed = started.elapsed();
    let mut result = match outcome {
        Ok(r) => r,
        Err(Error::Resource(_)) => {
            SolveResult::without_solution(Status::ResourceLimit, SolveStats::default())
        }
        Err(e) => return Err(e),
    };
    if opts.timing {
        result.stats.wall_time_us = Some(elapsed.as_micros() as u64);
    }
    verify(&a, &u, &result, algorithm, opts)?;
    Ok(result)
}

fn dispatch(
    instance: &Instance,
    a: &Gf2Matrix,
    u: &Chain,
    algorithm: Algorithm,
    opts: &SolveOptions,
) -> Result<SolveResult> {
    match algorithm {
        Algorithm::Mbc1 => match instance {
            Instance::Complex { slice, boundary } if slice.dim() == 1 => solve_mbc1(
                slice,
                boundary,
                Mbc1Options {
                    matching: opts.matching,
                },
            ),
            Instance::Complex { slice, .. } => Err(Error::usage(format!(
                "mbc1 solves 1-dimensional complexes, this one has dimension {}",
                slice.dim()
            ))),
            Instance::Matrix { .. } => Err(Error::usage("mbc1 needs a complex, not a matrix")),
        },
        Algorithm::Dijkstra => dijkstra::search(
            a,
            u,
            DijkstraOptions {
                k_bound: opts.k_bound,
                pivot: opts.pivot,
                check_feasibility: opts.check_feasibility,
                max_states: opts.max_states,
            },
        ),
        Algorithm::Treewidth => {
            let ntd = match &opts.decomposition {
                Some(ntd) => ntd.clone(),
                None => decompose_matrix(a, opts.heuristic)?,
            };
            let gopts = GmldOptions {
                max_bag_bits: opts.max_bag_bits,
            };
            Ok(solve_gmld(a, u, &ntd, gopts)?.result)
        }
        Algorithm::Brute => brute_force_mld(a, u, opts.brute_mode),
    }
}

fn verify(
    a: &Gf2Matrix,
    u: &Chain,
    result: &SolveResult,
    algorithm: Algorithm,
    opts: &SolveOptions,
) -> Result<()> {
    let fail = |msg: String| Err(Error::Internal(format!("{algorithm}: {msg}")));
    match (&result.status, &result.witness) {
        (Status::Optimal, None) => fail("optimal result without a witness".into()),
        (Status::Optimal, Some(w)) => {
            if w.span() > a.cols() {
                return fail("witness refers to an unknown column".into());
            }
            if a.apply(w)?.members() != u.members() {
                return fail("witness boundary differs from the target".into());
            }
            let weight = w.weight(a.weights());
            if weight != result.weight {
                return fail(format!(
                    "witness weighs {weight}, reported {}",
                    result.weight
                ));
            }
            if algorithm == Algorithm::Dijkstra && opts.k_bound.is_some_and(|k| w.len() > k) {
                return fail(format!("witness has {} simplices, over the bound", w.len()));
            }
            Ok(())
        }
        (_, Some(_)) => fail(format!("{} result carries a witness", result.status)),
        (_, None) => Ok(()),
    }
}
