//! Acceptance criteria. Runs without the test harness and prints one
//! PASS/FAIL line per criterion; exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mbc_core::bench::{self, SuiteEntry};
use mbc_core::dijkstra::{search, DijkstraOptions};
use mbc_core::gen::{self, RandomSliceParams};
use mbc_core::gmld::{solve_gmld, GmldOptions};
use mbc_core::io;
use mbc_core::mbc1::{solve_mbc1, Mbc1Options};
use mbc_core::oracle::{bounded_enumeration, brute_force_mld, BruteMode};
use mbc_core::report::ResultDocument;
use mbc_core::solve::decompose_matrix;
use mbc_core::td::{
    greedy_decomposition, make_nice, validate_decomposition, validate_nice, Graph, Heuristic,
    NodeKind,
};
use mbc_core::{
    solve, Algorithm, Chain, ComplexSlice, Instance, Simplex, SolveOptions, Status, Weight,
    WeightVector,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn opts() -> SolveOptions {
    SolveOptions::default()
}

/// Oracle agreement on random feasible d = 2 instances.
fn oracle_sweep() -> Outcome {
    let started = Instant::now();
    let mut instances = 0;
    for seed in 0..500u64 {
        let g = gen::random_slice(&RandomSliceParams {
            top: 4 + (seed % 13) as usize,
            vertices: 6 + (seed % 3) as usize,
            dim: 2,
            seed,
            max_weight: 9,
            boundary_density: 0.4,
        })
        .map_err(|e| e.to_string())?;
        let a = g.slice.boundary_matrix();
        let brute =
            brute_force_mld(&a, &g.boundary, BruteMode::Exhaustive).map_err(|e| e.to_string())?;
        ensure!(
            brute.status == Status::Optimal,
            "seed {seed}: oracle found no solution"
        );
        let inst = Instance::Complex {
            slice: g.slice.clone(),
            boundary: g.boundary.clone(),
        };
        for alg in [Algorithm::Dijkstra, Algorithm::Treewidth] {
            let r = solve(&inst, alg, &opts()).map_err(|e| format!("seed {seed} {alg}: {e}"))?;
            ensure!(
                r.status == Status::Optimal && r.weight == brute.weight,
                "seed {seed}: {alg} gives {} {} but the oracle gives {}",
                r.status,
                r.weight,
                brute.weight
            );
            let w = r.witness.unwrap();
            ensure!(
                g.slice.boundary(&w).unwrap() == g.boundary,
                "seed {seed}: {alg} witness misses U"
            );
        }
        instances += 1;
    }
    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(120), "sweep took {elapsed:?}");
    Ok(format!(
        "{instances} instances agree, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

struct RandomGraph {
    slice: ComplexSlice,
    edges: Vec<(u32, u32, Weight)>,
}

fn random_graph(rng: &mut ChaCha8Rng, max_edges: usize) -> RandomGraph {
    let n = rng.gen_range(3..=9u32);
    let mut pairs: Vec<(u32, u32)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let m = rng.gen_range(1..=max_edges.min(pairs.len()));
    let mut edges = Vec::new();
    for _ in 0..m {
        let (i, j) = pairs.swap_remove(rng.gen_range(0..pairs.len()));
        edges.push((i, j, rng.gen_range(0..=20)));
    }
    let tops = edges
        .iter()
        .map(|&(i, j, w)| (Simplex::new(vec![i, j]).unwrap(), w))
        .collect();
    let slice = ComplexSlice::build(1, tops, vec![]).unwrap();
    // keep edges in slice order so subset bits line up with column indices
    let edges = slice
        .top()
        .iter()
        .zip(slice.weights().as_slice())
        .map(|(s, &w)| (s.vertices()[0], s.vertices()[1], w))
        .collect();
    RandomGraph { slice, edges }
}

fn vertex(slice: &ComplexSlice, v: u32) -> usize {
    slice.face_index(&Simplex::new(vec![v]).unwrap()).unwrap()
}

/// Minimum weight over all 2^|E| edge sets whose odd-degree vertices are `target`.
fn edge_subset_oracle(edges: &[(u32, u32, Weight)], target: u64) -> Option<Weight> {
    let mut best = None;
    for mask in 0u64..(1 << edges.len()) {
        let mut odd = 0u64;
        let mut w = 0;
        for (e, &(i, j, wt)) in edges.iter().enumerate() {
            if mask >> e & 1 == 1 {
                odd ^= (1 << i) ^ (1 << j);
                w += wt;
            }
        }
        if odd == target && best.is_none_or(|b| w < b) {
            best = Some(w);
        }
    }
    best
}

fn shortest_path(edges: &[(u32, u32, Weight)], s: u32, t: u32) -> Option<Weight> {
    let mut dist = [None::<Weight>; 16];
    dist[s as usize] = Some(0);
    for _ in 0..16 {
        for &(i, j, w) in edges {
            for (x, y) in [(i, j), (j, i)] {
                if let Some(dx) = dist[x as usize] {
                    if dist[y as usize].is_none_or(|dy| dx + w < dy) {
                        dist[y as usize] = Some(dx + w);
                    }
                }
            }
        }
    }
    dist[t as usize]
}

/// One-dimensional solver against edge-subset enumeration and shortest paths.
fn mbc1_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..300 {
        let g = random_graph(&mut rng, 18);
        let chosen: Vec<usize> = (0..g.edges.len()).filter(|_| rng.gen_bool(0.4)).collect();
        let u = g.slice.boundary(&Chain::from_indices(1, chosen)).unwrap();
        let target: u64 = u
            .iter()
            .map(|f| 1u64 << g.slice.faces()[f].vertices()[0])
            .fold(0, |a, b| a ^ b);
        let expect = edge_subset_oracle(&g.edges, target);
        let r = solve_mbc1(&g.slice, &u, Mbc1Options::default()).map_err(|e| e.to_string())?;
        ensure!(
            r.is_optimal() && Some(r.weight) == expect,
            "graph {case}: {} {} vs oracle {expect:?}",
            r.status,
            r.weight
        );
        ensure!(
            g.slice.boundary(r.witness.as_ref().unwrap()).unwrap() == u,
            "graph {case}: witness misses U"
        );
    }
    for case in 0..100 {
        let g = random_graph(&mut rng, 18);
        let used: Vec<u32> = g.slice.faces().iter().map(|f| f.vertices()[0]).collect();
        let s = used[rng.gen_range(0..used.len())];
        let t = loop {
            let t = used[rng.gen_range(0..used.len())];
            if t != s {
                break t;
            }
        };
        let u = Chain::from_indices(0, [vertex(&g.slice, s), vertex(&g.slice, t)]);
        let r = solve_mbc1(&g.slice, &u, Mbc1Options::default()).map_err(|e| e.to_string())?;
        match shortest_path(&g.edges, s, t) {
            Some(d) => ensure!(
                r.is_optimal() && r.weight == d,
                "pair {case}: {} vs distance {d}",
                r.weight
            ),
            None => ensure!(
                r.status == Status::Infeasible,
                "pair {case}: disconnected pair solved"
            ),
        }
    }
    Ok("300 graphs match 2^|E| enumeration, 100 pairs match shortest paths".into())
}

/// Octahedron with one face missing.
fn octahedron_family() -> Outcome {
    let (slice, u) = gen::octahedron_minus_face();
    // independent oracle over all 2^7 chains
    let mut best = None;
    for mask in 0u32..(1 << 7) {
        let w = Chain::from_indices(2, (0..7).filter(|i| mask >> i & 1 == 1));
        if slice.boundary(&w).unwrap() == u && best.is_none_or(|b| w.len() < b) {
            best = Some(w.len());
        }
    }
    ensure!(best == Some(7), "exhaustive oracle gives {best:?}");
    let inst = Instance::Complex {
        slice: slice.clone(),
        boundary: u.clone(),
    };
    for alg in [Algorithm::Dijkstra, Algorithm::Treewidth, Algorithm::Brute] {
        let r = solve(&inst, alg, &opts()).map_err(|e| e.to_string())?;
        ensure!(
            r.is_optimal() && r.weight == 7,
            "{alg} gives {} {}",
            r.status,
            r.weight
        );
    }
    let a = slice.boundary_matrix();
    let none = bounded_enumeration(&a, &u, 6, 1 << 12).map_err(|e| e.to_string())?;
    ensure!(none.is_none(), "a chain of at most 6 faces was found");
    let seven = bounded_enumeration(&a, &u, 7, 1 << 12).map_err(|e| e.to_string())?;
    ensure!(
        seven == Some(Chain::from_indices(2, 0..7)),
        "k = 7 gives {seven:?}"
    );
    Ok("weight 7 from dijkstra, treewidth, brute; none at k=6, 7-chain at k=7".into())
}

/// Negative weights in the dynamic program.
fn negative_weights() -> Outcome {
    let slice = gen::octahedron()
        .slice
        .with_weights(WeightVector::new(vec![-1; 8]))
        .unwrap();
    let a = slice.boundary_matrix();
    let u = Chain::empty(1);
    let ntd = decompose_matrix(&a, Heuristic::MinFill).map_err(|e| e.to_string())?;
    let r = solve_gmld(&a, &u, &ntd, GmldOptions::default())
        .map_err(|e| e.to_string())?
        .result;
    ensure!(
        r.is_optimal() && r.weight == -8,
        "dp gives {} {}",
        r.status,
        r.weight
    );
    ensure!(
        r.witness.as_ref().map(Chain::len) == Some(8),
        "witness {:?}",
        r.witness
    );
    for mode in [BruteMode::Exhaustive, BruteMode::Kernel] {
        let b = brute_force_mld(&a, &u, mode).map_err(|e| e.to_string())?;
        ensure!(b.weight == -8, "{mode:?} oracle gives {}", b.weight);
    }
    Ok("dp and both oracles give -8 with all 8 faces".into())
}

/// `k` just below and at the minimum solution size.
fn k_bound_semantics() -> Outcome {
    let mut checked = 0;
    let mut seed = 0u64;
    while checked < 100 {
        seed += 1;
        let g = gen::random_slice(&RandomSliceParams {
            top: 6 + (seed % 9) as usize,
            vertices: 7,
            dim: 2,
            seed: 10_000 + seed,
            max_weight: 1,
            boundary_density: 0.35,
        })
        .map_err(|e| e.to_string())?;
        if g.boundary.is_empty() {
            continue;
        }
        let a = g.slice.boundary_matrix();
        let min = bounded_enumeration(&a, &g.boundary, a.cols(), 1 << 20)
            .map_err(|e| e.to_string())?
            .ok_or("generated boundary is infeasible")?
            .len();
        let below = search(
            &a,
            &g.boundary,
            DijkstraOptions {
                k_bound: Some(min - 1),
                ..Default::default()
            },
        )
        .map_err(|e| e.to_string())?;
        ensure!(
            below.status == Status::NotFoundWithinBound,
            "seed {seed}: k = {} gives {}",
            min - 1,
            below.status
        );
        let at = search(
            &a,
            &g.boundary,
            DijkstraOptions {
                k_bound: Some(min),
                ..Default::default()
            },
        )
        .map_err(|e| e.to_string())?;
        ensure!(
            at.is_optimal() && at.weight == min as Weight,
            "seed {seed}: k = {min} gives {} {}",
            at.status,
            at.weight
        );
        checked += 1;
    }
    Ok(format!("{checked} instances"))
}

fn random_plain_graph(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(1..=40);
    let p = rng.gen_range(0.0..0.3);
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// Nice decompositions of random graphs.
fn decomposition_validity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in 0..200 {
        let g = random_plain_graph(&mut rng);
        let heuristic = if case % 2 == 0 {
            Heuristic::MinFill
        } else {
            Heuristic::MinDegree
        };
        let td = greedy_decomposition(&g, heuristic);
        validate_decomposition(&td, &g).map_err(|v| format!("graph {case}: {v}"))?;
        let nice = make_nice(&td).map_err(|e| e.to_string())?;
        validate_nice(&nice, &g).map_err(|v| format!("graph {case}: {v}"))?;
        validate_decomposition(&nice.to_tree_decomposition(), &g)
            .map_err(|v| format!("graph {case}: {v}"))?;
        ensure!(
            nice.nodes[nice.root].bag.is_empty(),
            "graph {case}: root bag not empty"
        );
        ensure!(
            nice.width() <= td.width(),
            "graph {case}: width {} > {}",
            nice.width(),
            td.width()
        );
    }
    Ok("200 graphs".into())
}

fn median_time(f: impl Fn()) -> Duration {
    let mut t: Vec<Duration> = (0..5)
        .map(|_| {
            let s = Instant::now();
            f();
            s.elapsed()
        })
        .collect();
    t.sort();
    t[2]
}

/// Scaling: DP time on strips, per-bag join work, search size.
fn scaling() -> Outcome {
    let mut report = Vec::new();

    let lengths = [25usize, 50, 100, 200];
    let mut points = Vec::new();
    for &len in &lengths {
        let g = gen::triangle_strip(len).unwrap();
        let a = g.slice.boundary_matrix();
        let ntd = decompose_matrix(&a, Heuristic::MinFill).unwrap();
        let n = a.rows() + a.cols();
        let t = median_time(|| {
            solve_gmld(&a, &g.boundary, &ntd, GmldOptions::default()).unwrap();
        });
        points.push((n, ntd.width(), t));
    }
    let widths: Vec<usize> = points.iter().map(|p| p.1).collect();
    ensure!(
        widths.iter().all(|&w| w == widths[0]),
        "strip widths vary: {widths:?}"
    );
    let (n0, _, t0) = points[0];
    for &(n, _, t) in &points[1..] {
        let ratio = t.as_secs_f64() / t0.as_secs_f64();
        let linear = n as f64 / n0 as f64;
        if ratio > 1.5 * linear {
            return Err(format!(
                "time ratio {ratio:.2} exceeds 1.5 x size ratio {linear:.2}"
            ));
        }
    }
    report.push(format!(
        "strip time ratio {:.2} for size ratio {:.2} at width {}",
        points[3].2.as_secs_f64() / t0.as_secs_f64(),
        points[3].0 as f64 / n0 as f64,
        widths[0]
    ));

    let mut joins = 0;
    let mut cases: Vec<(Chain, mbc_core::Gf2Matrix)> = Vec::new();
    for g in [
        gen::triangle_strip(30).unwrap(),
        gen::grid(3, 5).unwrap(),
        gen::cylinder(4, 3).unwrap(),
    ] {
        cases.push((g.boundary, g.slice.boundary_matrix()));
    }
    for seed in 0..40 {
        let g = gen::random_slice(&RandomSliceParams {
            top: 12,
            vertices: 7,
            dim: 2,
            seed: 500 + seed,
            max_weight: 5,
            boundary_density: 0.4,
        })
        .unwrap();
        cases.push((g.boundary, g.slice.boundary_matrix()));
    }
    for (u, a) in &cases {
        for h in [Heuristic::MinFill, Heuristic::MinDegree] {
            let ntd = decompose_matrix(a, h).unwrap();
            let out = solve_gmld(a, u, &ntd, GmldOptions::default()).unwrap();
            for (node, cost) in ntd.nodes.iter().zip(&out.tables.costs) {
                let bound = (1u64 << cost.cols) * (1u64 << (2 * cost.rows));
                ensure!(
                    cost.join_pairs <= bound,
                    "join pairs {} over bound {bound}",
                    cost.join_pairs
                );
                if node.kind == NodeKind::Join {
                    joins += 1;
                } else {
                    ensure!(cost.join_pairs == 0, "non-join node counted join pairs");
                }
            }
        }
    }
    report.push(format!("{joins} join bags within 2^|C|*4^|R|"));

    let mut searches = 0;
    let bound = |c: u64, k: u64| (0..=k).map(|i| c.pow(i as u32)).sum::<u64>();
    for seed in 0..60 {
        let g = gen::random_slice(&RandomSliceParams {
            top: 10,
            vertices: 7,
            dim: 2,
            seed: 900 + seed,
            max_weight: if seed % 2 == 0 { 1 } else { 6 },
            boundary_density: 0.25,
        })
        .unwrap();
        let a = g.slice.boundary_matrix();
        let c = a.max_row_degree() as u64;
        if seed % 2 == 0 {
            let r = search(&a, &g.boundary, DijkstraOptions::default()).unwrap();
            let k = r.witness.unwrap().len() as u64;
            let exp = r.stats.states_expanded.unwrap();
            ensure!(
                exp <= bound(c, k),
                "unit seed {seed}: {exp} states > bound for c={c} k={k}"
            );
        } else {
            let k = bounded_enumeration(&a, &g.boundary, a.cols(), 1 << 20)
                .unwrap()
                .unwrap()
                .len()
                + 1;
            let r = search(
                &a,
                &g.boundary,
                DijkstraOptions {
                    k_bound: Some(k),
                    ..Default::default()
                },
            )
            .unwrap();
            let exp = r.stats.states_expanded.unwrap();
            ensure!(
                exp <= bound(c, k as u64),
                "weighted seed {seed}: {exp} states > bound for c={c} k={k}"
            );
        }
        searches += 1;
    }
    for len in [20, 40, 80] {
        let g = gen::triangle_strip(len).unwrap();
        let window = g.slice.boundary(&Chain::from_indices(2, 5..9)).unwrap();
        let a = g.slice.boundary_matrix();
        let r = search(&a, &window, DijkstraOptions::default()).unwrap();
        let exp = r.stats.states_expanded.unwrap();
        ensure!(exp <= bound(2, 4), "strip {len}: {exp} states");
        searches += 1;
    }
    report.push(format!("{searches} searches within sum c^i"));
    Ok(report.join("; "))
}

fn pipeline_outputs() -> Vec<u8> {
    let mut out = Vec::new();
    let mut suite = Vec::new();
    for seed in [3u64, 4] {
        let g = gen::random_slice(&RandomSliceParams {
            top: 12,
            vertices: 7,
            dim: 2,
            seed,
            max_weight: 7,
            boundary_density: 0.5,
        })
        .unwrap();
        let complex = io::write_complex(&g.slice, 1, &g.comments).unwrap();
        let boundary = io::write_boundary(&g.slice, &g.boundary, &g.comments);
        out.extend(complex.as_bytes());
        out.extend(boundary.as_bytes());
        let slice = io::parse_complex(&complex).unwrap().slice;
        let u = io::parse_boundary(&boundary, &slice).unwrap();
        let inst = Instance::Complex { slice, boundary: u };
        for alg in [Algorithm::Dijkstra, Algorithm::Treewidth, Algorithm::Brute] {
            let r = solve(&inst, alg, &opts()).unwrap();
            out.extend(ResultDocument::new(&r, &inst, 1).to_json().as_bytes());
        }
        suite.push(SuiteEntry {
            name: format!("r{seed}"),
            instance: inst,
        });
    }
    let rows = bench::run_suite(&suite, &Algorithm::ALL, 2, &opts(), false);
    out.extend(bench::to_csv(&rows).unwrap().as_bytes());
    out
}

/// Identical inputs and seeds give identical bytes.
fn determinism() -> Outcome {
    let first = pipeline_outputs();
    let second = pipeline_outputs();
    ensure!(first == second, "outputs differ between runs");
    Ok(format!("{} bytes identical", first.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 oracle agreement sweep", oracle_sweep),
        ("2 mbc1 correctness", mbc1_correctness),
        ("3 octahedron family", octahedron_family),
        ("4 negative-weight dp", negative_weights),
        ("5 k-bound semantics", k_bound_semantics),
        ("6 decomposition validity", decomposition_validity),
        ("7 scaling smoke tests", scaling),
        ("8 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
