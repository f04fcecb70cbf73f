//! Brute-force reference solvers. Slow on purpose and independent of the
//! search and dynamic-programming code paths.

use crate::chain::{Chain, Weight};
use crate::error::{Error, Result};
use crate::gf2::{solve_linear, Gf2Matrix};
use crate::result::{SolveResult, SolveStats, Status};

/// Largest number of free bits either brute-force mode enumerates.
pub const BRUTE_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BruteMode {
    /// All `2^n` column subsets.
    Exhaustive,
    /// One particular solution plus every combination of the kernel basis.
    #[default]
    Kernel,
}

/// Minimum-weight `x` with `Ax = u` by enumeration.
pub fn brute_force_mld(a: &Gf2Matrix, u: &Chain, mode: BruteMode) -> Result<SolveResult> {
    if u.span() > a.rows() {
        return Err(Error::usage("target refers to a row outside the matrix"));
    }
    match mode {
        BruteMode::Exhaustive => exhaustive(a, u),
        BruteMode::Kernel => kernel(a, u),
    }
}

fn exhaustive(a: &Gf2Matrix, u: &Chain) -> Result<SolveResult> {
    let n = a.cols();
    if n > BRUTE_LIMIT {
        return Err(Error::Resource(format!(
            "exhaustive search supports at most {BRUTE_LIMIT} columns, got {n}"
        )));
    }
    // residual is Ax + u; the current x solves when no row is set
    let mut residual = vec![false; a.rows()];
    for r in u.iter() {
        residual[r] = true;
    }
    let mut dirty = u.len();
    let mut x = vec![false; n];
    let mut weight: Weight = 0;
    let mut best: Option<(Weight, Vec<bool>)> = None;
    for step in 0u64..(1u64 << n) {
        if step > 0 {
            let c = step.trailing_zeros() as usize;
            x[c] = !x[c];
            let w = a.weights().get(c);
            weight += if x[c] { w } else { -w };
            for &r in a.column(c) {
                residual[r] = !residual[r];
                if residual[r] {
                    dirty += 1;
                } else {
                    dirty -= 1;
                }
            }
        }
        if dirty == 0 && best.as_ref().is_none_or(|b| weight < b.0) {
            best = Some((weight, x.clone()));
        }
    }
    let stats = SolveStats {
        candidates: Some(1 << n),
        ..Default::default()
    };
    Ok(finish(a, best, stats))
}

fn kernel(a: &Gf2Matrix, u: &Chain) -> Result<SolveResult> {
    let sol = solve_linear(a, u)?;
    let Some(x0) = sol.particular else {
        return Ok(SolveResult::without_solution(
            Status::Infeasible,
            SolveStats::default(),
        ));
    };
    let k = sol.kernel.len();
    if k > BRUTE_LIMIT {
        return Err(Error::Resource(format!(
            "kernel enumeration supports dimension at most {BRUTE_LIMIT}, got {k}"
        )));
    }
    let mut x = vec![false; a.cols()];
    let mut weight: Weight = 0;
    for c in x0.iter() {
        x[c] = true;
        weight += a.weights().get(c);
    }
    let mut best: Option<(Weight, Vec<bool>)> = None;
    // reflected Gray code over the kernel basis: one basis vector per step
    for step in 0u64..(1u64 << k) {
        if step > 0 {
            for c in sol.kernel[step.trailing_zeros() as usize].iter() {
                x[c] = !x[c];
                let w = a.weights().get(c);
                weight += if x[c] { w } else { -w };
            }
        }
        if best.as_ref().is_none_or(|b| weight < b.0) {
            best = Some((weight, x.clone()));
        }
    }
    let stats = SolveStats {
        candidates: Some(1 << k),
        ..Default::default()
    };
    Ok(finish(a, best, stats))
}

fn finish(a: &Gf2Matrix, best: Option<(Weight, Vec<bool>)>, stats: SolveStats) -> SolveResult {
    match best {
        None => SolveResult::without_solution(Status::Infeasible, stats),
        Some((w, x)) => {
            let chain = a.column_chain(x.iter().enumerate().filter(|(_, &b)| b).map(|(c, _)| c));
            SolveResult::optimal(w, chain, stats)
        }
    }
}

/// Smallest-cardinality `x` with `|x| <= k` and `Ax = u`, trying subsets in
/// order of size and then lexicographically. Fails when the number of
/// subsets to try exceeds `budget`.
pub fn bounded_enumeration(
    a: &Gf2Matrix,
    u: &Chain,
    k: usize,
    budget: u64,
) -> Result<Option<Chain>> {
    if u.span() > a.rows() {
        return Err(Error::usage("target refers to a row outside the matrix"));
    }
    let n = a.cols();
    let k = k.min(n);
    let mut needed: u64 = 0;
    let mut layer: u64 = 1;
    for size in 0..=k {
        if size > 0 {
            layer = layer * (n - size + 1) as u64 / size as u64;
        }
        needed = needed.saturating_add(layer);
    }
    if needed > budget {
        return Err(Error::Resource(format!(
            "{needed} subsets exceed the enumeration budget of {budget}"
        )));
    }
    for size in 0..=k {
        let mut pick: Vec<usize> = (0..size).collect();
        loop {
            let x = a.column_chain(pick.iter().copied());
            if a.apply(&x)?.members() == u.members() {
                return Ok(Some(x));
            }
            // next combination in lexicographic order
            let Some(i) = (0..size).rev().find(|&i| pick[i] < n - size + i) else {
                break;
            };
            pick[i] += 1;
            for j in i + 1..size {
                pick[j] = pick[j - 1] + 1;
            }
        }
    }
    Ok(None)
}
