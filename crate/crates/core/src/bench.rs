//! Benchmark harness: every (instance, algorithm) cell is solved `reps`
//! times and reported as one CSV row with the median wall time.

use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::chain::{Chain, Weight};
use crate::error::{Error, Result};
use crate::io;
use crate::result::Status;
use crate::solve::{solve, Algorithm, Instance, SolveOptions};

/// One named instance of a suite.
#[derive(Debug, Clone)]
pub struct SuiteEntry {
    pub name: String,
    pub instance: Instance,
}

/// Loads every `<name>.complex` (with `<name>.boundary` if present, else
/// an empty boundary) and every `<name>.mld` in `dir`, sorted by name.
pub fn load_suite(dir: &Path) -> Result<Vec<SuiteEntry>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    paths.sort();
    let mut out = Vec::new();
    for path in paths {
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or_default()
            .to_string();
        let read = |p: &Path| {
            std::fs::read_to_string(p).map_err(|e| Error::input(format!("{}: {e}", p.display())))
        };
        let instance = match path.extension().and_then(|s| s.to_str()) {
            Some("complex") => {
                let slice = io::parse_complex(&read(&path)?)?.slice;
                let bpath = path.with_extension("boundary");
                let boundary = if bpath.exists() {
                    io::parse_boundary(&read(&bpath)?, &slice)?
                } else {
                    Chain::empty(slice.dim() - 1)
                };
                Instance::Complex { slice, boundary }
            }
            Some("mld") => {
                let f = io::parse_matrix(&read(&path)?)?;
                Instance::Matrix {
                    matrix: f.matrix,
                    target: f.target,
                }
            }
            _ => continue,
        };
        out.push(SuiteEntry { name, instance });
    }
    if out.is_empty() {
        return Err(Error::input(format!("no instances in {}", dir.display())));
    }
    Ok(out)
}

/// One CSV row. Empty cells mean "not applicable" or "not measured".
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchRow {
    pub instance: String,
    pub algorithm: String,
    pub status: String,
    pub weight: Option<Weight>,
    pub reps: usize,
    pub median_us: Option<u64>,
    pub width: Option<u64>,
    pub states_expanded: Option<u64>,
    pub table_entries: Option<u64>,
    pub join_pairs: Option<u64>,
    pub error: String,
}

fn median(mut xs: Vec<u64>) -> Option<u64> {
    xs.sort_unstable();
    xs.get(xs.len() / 2).copied()
}

/// Runs one cell. Failures are recorded in the row instead of aborting.
pub fn run_cell(
    entry: &SuiteEntry,
    algorithm: Algorithm,
    reps: usize,
    opts: &SolveOptions,
    timing: bool,
) -> BenchRow {
    let mut row = BenchRow {
        instance: entry.name.clone(),
        algorithm: algorithm.to_string(),
        status: String::new(),
        weight: None,
        reps,
        median_us: None,
        width: None,
        states_expanded: None,
        table_entries: None,
        join_pairs: None,
        error: String::new(),
    };
    if !algorithm.applies_to(&entry.instance) {
        row.status = "Skipped".into();
        return row;
    }
    let mut times = Vec::with_capacity(reps);
    for _ in 0..reps.max(1) {
        let started = Instant::now();
        match solve(&entry.instance, algorithm, opts) {
            Ok(r) => {
                times.push(started.elapsed().as_micros() as u64);
                row.status = r.status.to_string();
                row.weight = (r.status == Status::Optimal).then_some(r.weight);
                row.width = r.stats.width;
                row.states_expanded = r.stats.states_expanded;
                row.table_entries = r.stats.table_entries;
                row.join_pairs = r.stats.join_pairs;
            }
            Err(e) => {
                row.status = "Error".into();
                row.error = e.to_string();
                return row;
            }
        }
    }
    if timing {
        row.median_us = median(times);
    }
    row
}

pub fn run_suite(
    suite: &[SuiteEntry],
    algorithms: &[Algorithm],
    reps: usize,
    opts: &SolveOptions,
    timing: bool,
) -> Vec<BenchRow> {
    suite
        .iter()
        .flat_map(|e| {
            algorithms
                .iter()
                .map(move |&a| run_cell(e, a, reps, opts, timing))
        })
        .collect()
}

pub fn to_csv(rows: &[BenchRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)
            .map_err(|e| Error::Internal(format!("csv: {e}")))?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Internal(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}
