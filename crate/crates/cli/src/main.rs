use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use mbc_core::bench;
use mbc_core::dijkstra::PivotStrategy;
use mbc_core::gen::{self, Generated, RandomSliceParams};
use mbc_core::io;
use mbc_core::matching::MatchingBackend;
use mbc_core::oracle::{brute_force_mld, BruteMode};
use mbc_core::report::ResultDocument;
use mbc_core::td::{self, Heuristic};
use mbc_core::{solve, Algorithm, Chain, Instance, SolveOptions, Status, Weight};

/// Exact minimum bounded chain and GF(2) decoding solvers.
#[derive(Parser)]
#[command(name = "mbc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance to `<out>.complex` and `<out>.boundary`
    /// (or `<out>.mld` for matrices).
    Gen {
        #[command(subcommand)]
        shape: Shape,
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Solve one instance and print the result as JSON.
    Solve(SolveArgs),
    /// Compute a tree decomposition of a graph or of an instance's Hasse graph.
    Decompose {
        #[command(flatten)]
        input: DecomposeInput,
        #[arg(long, default_value = "min-fill")]
        heuristic: Heuristic,
        /// Write a nice decomposition.
        #[arg(long)]
        nice: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a result document against a reference solver.
    Verify {
        result: PathBuf,
        #[arg(long, default_value = "brute")]
        against: String,
        #[command(flatten)]
        input: InstanceInput,
    },
    /// Run every algorithm on every instance of a directory and write CSV.
    Bench {
        #[arg(long)]
        suite: PathBuf,
        /// Comma-separated algorithm names.
        #[arg(long, default_value = "dijkstra,treewidth,brute")]
        algos: String,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Leave the timing column empty so output is reproducible.
        #[arg(long)]
        no_timing: bool,
        #[arg(long)]
        k: Option<usize>,
    },
}

#[derive(Subcommand)]
enum Shape {
    Octahedron,
    /// Octahedron with one face removed; U is that face's boundary.
    OctahedronMinusFace,
    Sphere {
        #[arg(long, default_value_t = 1)]
        levels: usize,
    },
    Strip {
        #[arg(long)]
        length: usize,
    },
    Cylinder {
        #[arg(long)]
        around: usize,
        #[arg(long)]
        along: usize,
        /// Use only the end circle at ring 0 as U (bounds nothing).
        #[arg(long)]
        one_end: bool,
    },
    Grid {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
    },
    Random {
        #[arg(long)]
        top: usize,
        #[arg(long)]
        vertices: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        max_weight: Weight,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
    },
    RandomMatrix {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long, default_value_t = 0.3)]
        density: f64,
        #[arg(long, default_value_t = 1)]
        max_weight: Weight,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct InstanceInput {
    #[arg(long, conflicts_with = "matrix")]
    complex: Option<PathBuf>,
    /// Boundary file; an empty boundary when omitted.
    #[arg(long, requires = "complex")]
    boundary: Option<PathBuf>,
    #[arg(long)]
    matrix: Option<PathBuf>,
}

#[derive(Args)]
struct DecomposeInput {
    #[arg(long, conflicts_with_all = ["complex", "matrix"])]
    graph: Option<PathBuf>,
    #[arg(long, conflicts_with = "matrix")]
    complex: Option<PathBuf>,
    #[arg(long)]
    matrix: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InstanceInput,
    #[arg(long, default_value = "dijkstra")]
    algorithm: Algorithm,
    /// Dijkstra: largest number of simplices in a solution.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value = "min-coface")]
    pivot: PivotStrategy,
    /// Treewidth: read a decomposition instead of computing one.
    #[arg(long)]
    td: Option<PathBuf>,
    #[arg(long, default_value = "min-fill")]
    td_heuristic: Heuristic,
    #[arg(long)]
    no_feasibility_check: bool,
    /// Brute: `kernel` or `exhaustive`.
    #[arg(long, default_value = "kernel")]
    brute_mode: String,
    /// Mbc1: `blossom` or `subset-dp`.
    #[arg(long, default_value = "blossom")]
    matching: String,
    /// Include wall time in the stats.
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn with_extension(stem: &Path, ext: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn env_cap(name: &str) -> Result<Option<usize>> {
    match std::env::var(name) {
        Ok(v) => Ok(Some(
            v.trim().parse().with_context(|| format!("{name}={v:?}"))?,
        )),
        Err(_) => Ok(None),
    }
}

/// Loads an instance and its weight scale.
fn load_instance(input: &InstanceInput) -> Result<(Instance, Weight)> {
    match (&input.complex, &input.matrix) {
        (Some(c), None) => {
            let f = io::parse_complex(&read(c)?)?;
            let boundary = match &input.boundary {
                Some(b) => io::parse_boundary(&read(b)?, &f.slice)?,
                None => Chain::empty(f.slice.dim() - 1),
            };
            Ok((
                Instance::Complex {
                    slice: f.slice,
                    boundary,
                },
                f.scale,
            ))
        }
        (None, Some(m)) => {
            let f = io::parse_matrix(&read(m)?)?;
            Ok((
                Instance::Matrix {
                    matrix: f.matrix,
                    target: f.target,
                },
                f.scale,
            ))
        }
        _ => bail!("give either --complex (with optional --boundary) or --matrix"),
    }
}

fn base_options() -> Result<SolveOptions> {
    let mut opts = SolveOptions {
        max_states: env_cap("MBC_MAX_STATES")?,
        ..Default::default()
    };
    if let Some(bits) = env_cap("MBC_MAX_TABLE_BITS")? {
        opts.max_bag_bits = bits;
    }
    Ok(opts)
}

fn run_gen(shape: Shape, out: Option<PathBuf>) -> Result<()> {
    let out = out.ok_or_else(|| anyhow!("--out <stem> is required"))?;
    let complex = |g: Generated| -> Result<()> {
        std::fs::write(
            with_extension(&out, "complex"),
            io::write_complex(&g.slice, 1, &g.comments)?,
        )?;
        std::fs::write(
            with_extension(&out, "boundary"),
            io::write_boundary(&g.slice, &g.boundary, &g.comments),
        )?;
        Ok(())
    };
    match shape {
        Shape::Octahedron => complex(gen::octahedron()),
        Shape::OctahedronMinusFace => {
            let (slice, boundary) = gen::octahedron_minus_face();
            complex(Generated {
                slice,
                boundary,
                comments: vec!["octahedron-minus-face".into()],
            })
        }
        Shape::Sphere { levels } => complex(gen::sphere_subdivision(levels)?),
        Shape::Strip { length } => complex(gen::triangle_strip(length)?),
        Shape::Cylinder {
            around,
            along,
            one_end,
        } => {
            let mut g = gen::cylinder(around, along)?;
            if one_end {
                g.boundary = gen::cylinder_end(&g, around)?;
                g.comments.push("boundary: one end circle".into());
            }
            complex(g)
        }
        Shape::Grid { rows, cols } => complex(gen::grid(rows, cols)?),
        Shape::Random {
            top,
            vertices,
            dim,
            seed,
            max_weight,
            density,
        } => complex(gen::random_slice(&RandomSliceParams {
            top,
            vertices,
            dim,
            seed,
            max_weight,
            boundary_density: density,
        })?),
        Shape::RandomMatrix {
            rows,
            cols,
            density,
            max_weight,
            seed,
        } => {
            let (a, u) = gen::random_matrix(rows, cols, density, max_weight, seed)?;
            let header = vec![format!(
                "random-matrix rows={rows} cols={cols} density={density} max-weight={max_weight} seed={seed}"
            )];
            std::fs::write(
                with_extension(&out, "mld"),
                io::write_matrix(&a, &u, 1, &header)?,
            )?;
            Ok(())
        }
    }
}

fn run_solve(args: SolveArgs) -> Result<Status> {
    let (instance, scale) = load_instance(&args.input)?;
    let mut opts = base_options()?;
    opts.k_bound = args.k;
    opts.pivot = args.pivot;
    opts.check_feasibility = !args.no_feasibility_check;
    opts.heuristic = args.td_heuristic;
    opts.timing = args.timing;
    opts.brute_mode = match args.brute_mode.as_str() {
        "kernel" => BruteMode::Kernel,
        "exhaustive" => BruteMode::Exhaustive,
        other => bail!("unknown brute mode {other:?}"),
    };
    opts.matching = match args.matching.as_str() {
        "blossom" => MatchingBackend::Blossom,
        "subset-dp" => MatchingBackend::SubsetDp,
        other => bail!("unknown matching backend {other:?}"),
    };
    if let Some(path) = &args.td {
        opts.decomposition = Some(td::parse_decomposition(&read(path)?)?.into_nice()?);
    }
    let result = solve(&instance, args.algorithm, &opts)?;
    let doc = ResultDocument::new(&result, &instance, scale);
    write_or_print(args.out.as_deref(), &doc.to_json())?;
    Ok(result.status)
}

fn run_decompose(
    input: DecomposeInput,
    heuristic: Heuristic,
    nice: bool,
    out: Option<PathBuf>,
) -> Result<()> {
    let graph = match (&input.graph, &input.complex, &input.matrix) {
        (Some(g), None, None) => io::parse_graph(&read(g)?)?,
        (None, Some(c), None) => {
            let slice = io::parse_complex(&read(c)?)?.slice;
            mbc_core::gf2::hasse_graph(&slice.boundary_matrix()).to_graph()
        }
        (None, None, Some(m)) => {
            let f = io::parse_matrix(&read(m)?)?;
            mbc_core::gf2::hasse_graph(&f.matrix).to_graph()
        }
        _ => bail!("give exactly one of --graph, --complex or --matrix"),
    };
    let decomposition = td::greedy_decomposition(&graph, heuristic);
    td::validate_decomposition(&decomposition, &graph)
        .map_err(|v| anyhow!("internal error: invalid decomposition: {v}"))?;
    let text = if nice {
        let ntd = td::make_nice(&decomposition)?;
        td::validate_nice(&ntd, &graph)
            .map_err(|v| anyhow!("internal error: invalid nice decomposition: {v}"))?;
        td::write_nice(&ntd)
    } else {
        td::write_decomposition(&decomposition)
    };
    write_or_print(out.as_deref(), &text)
}

fn run_verify(result: PathBuf, against: &str, input: InstanceInput) -> Result<bool> {
    if against != "brute" {
        bail!("only `--against brute` is supported");
    }
    let (instance, _) = load_instance(&input)?;
    let doc = ResultDocument::from_json(&read(&result)?)?;
    let (a, u) = instance.to_mld()?;
    let reference = brute_force_mld(&a, &u, BruteMode::Kernel)?;
    let mut problems = Vec::new();
    match doc.status.as_str() {
        "Optimal" => {
            let w = doc
                .witness(&instance)?
                .ok_or_else(|| anyhow!("optimal result without a solution"))?;
            if a.apply(&w)?.members() != u.members() {
                problems.push("solution boundary differs from the target".to_string());
            }
            let weight = w.weight(a.weights());
            if Some(weight) != doc.weight {
                problems.push(format!(
                    "solution weighs {weight}, document says {:?}",
                    doc.weight
                ));
            }
            if reference.status != Status::Optimal || Some(reference.weight) != doc.weight {
                problems.push(format!(
                    "reference optimum is {} {}",
                    reference.status, reference.weight
                ));
            }
        }
        "Infeasible" => {
            if reference.status != Status::Infeasible {
                problems.push(format!(
                    "reference finds a solution of weight {}",
                    reference.weight
                ));
            }
        }
        "NotFoundWithinBound" | "ResourceLimit" => {}
        other => bail!("unknown status {other:?}"),
    }
    if problems.is_empty() {
        println!("ok: {} agrees with brute", doc.status);
        Ok(true)
    } else {
        for p in &problems {
            println!("mismatch: {p}");
        }
        Ok(false)
    }
}

fn run_bench(
    suite: PathBuf,
    algos: &str,
    reps: usize,
    out: Option<PathBuf>,
    no_timing: bool,
    k: Option<usize>,
) -> Result<()> {
    let algorithms = algos
        .split(',')
        .map(|s| s.trim().parse::<Algorithm>())
        .collect::<mbc_core::Result<Vec<_>>>()?;
    let entries = bench::load_suite(&suite)?;
    let mut opts = base_options()?;
    opts.k_bound = k;
    let rows = bench::run_suite(&entries, &algorithms, reps, &opts, !no_timing);
    write_or_print(out.as_deref(), &bench::to_csv(&rows)?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Gen { shape, out } => run_gen(shape, out).map(|_| 0),
        Command::Solve(args) => run_solve(args).map(|s| s.exit_code()),
        Command::Decompose {
            input,
            heuristic,
            nice,
            out,
        } => run_decompose(input, heuristic, nice, out).map(|_| 0),
        Command::Verify {
            result,
            against,
            input,
        } => run_verify(result, &against, input).map(|ok| if ok { 0 } else { 1 }),
        Command::Bench {
            suite,
            algos,
            reps,
            out,
            no_timing,
            k,
        } => run_bench(suite, &algos, reps, out, no_timing, k).map(|_| 0),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
