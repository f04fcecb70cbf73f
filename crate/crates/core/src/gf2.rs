//! Sparse matrices over ℤ₂, their bipartite Hasse graphs and Gaussian
//! elimination.

use crate::chain::{BoundaryOperator, Chain, WeightVector};
use crate::error::{Error, Result};
use crate::td::Graph;

/// A sparse `rows × cols` matrix over ℤ₂ with one weight per column.
///
/// Entries are stored twice, by column and by row, each list sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    source_dim: usize,
    col_entries: Vec<Vec<usize>>,
    row_entries: Vec<Vec<usize>>,
    weights: WeightVector,
}

impl Gf2Matrix {
    /// Builds a matrix from `(row, col)` positions of its ones.
    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize)>,
        weights: WeightVector,
    ) -> Result<Self> {
        let mut columns = vec![Vec::new(); cols];
        for (r, c) in entries {
            if r >= rows || c >= cols {
                return Err(Error::input(format!(
                    "entry ({r}, {c}) outside a {rows}x{cols} matrix"
                )));
            }
            columns[c].push(r);
        }
        for (c, col) in columns.iter_mut().enumerate() {
            col.sort_unstable();
            if let Some(w) = col.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::input(format!("duplicate entry ({}, {c})", w[0])));
            }
        }
        Self::from_columns(rows, columns, weights)
    }

    /// Builds a matrix from per-column sorted row lists.
    pub fn from_columns(
        rows: usize,
        columns: Vec<Vec<usize>>,
        weights: WeightVector,
    ) -> Result<Self> {
        if weights.len() != columns.len() {
            return Err(Error::input(format!(
                "{} weights for {} columns",
                weights.len(),
                columns.len()
            )));
        }
        let mut row_entries = vec![Vec::new(); rows];
        for (c, col) in columns.iter().enumerate() {
            if col.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::input(format!("column {c} is not strictly sorted")));
            }
            for &r in col {
                if r >= rows {
                    return Err(Error::input(format!("row {r} out of range in column {c}")));
                }
                row_entries[r].push(c);
            }
        }
        Ok(Gf2Matrix {
            rows,
            source_dim: 1,
            col_entries: columns,
            row_entries,
            weights,
        })
    }

    /// Tags the column space with a chain dimension (defaults to 1).
    pub fn with_source_dim(mut self, dim: usize) -> Self {
        self.source_dim = dim.max(1);
        self
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.col_entries.len()
    }

    pub fn nnz(&self) -> usize {
        self.col_entries.iter().map(Vec::len).sum()
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn column(&self, c: usize) -> &[usize] {
        &self.col_entries[c]
    }

    pub fn row(&self, r: usize) -> &[usize] {
        &self.row_entries[r]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.col_entries
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&r| (r, c)))
    }

    /// Largest number of ones in any row (the coface degree for boundary
    /// matrices).
    pub fn max_row_degree(&self) -> usize {
        self.row_entries.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Row-space chain dimension.
    pub fn target_dim(&self) -> usize {
        self.source_dim - 1
    }

    /// `Ax` for a chain of columns.
    pub fn apply(&self, x: &Chain) -> Result<Chain> {
        crate::chain::boundary_chain(x, self)
    }

    /// Builds a row chain, rejecting out-of-range or repeated rows.
    pub fn row_chain(&self, rows: impl IntoIterator<Item = usize>) -> Result<Chain> {
        let mut v: Vec<usize> = rows.into_iter().collect();
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::input("target lists a row twice"));
        }
        if let Some(&r) = v.last() {
            if r >= self.rows {
                return Err(Error::input(format!("target row {r} out of range")));
            }
        }
        Ok(Chain::from_sorted(self.target_dim(), v))
    }

    pub fn column_chain(&self, cols: impl IntoIterator<Item = usize>) -> Chain {
        Chain::from_indices(self.source_dim, cols)
    }

    pub fn with_weights(&self, weights: WeightVector) -> Result<Self> {
        if weights.len() != self.cols() {
            return Err(Error::input(
                "weight vector length differs from column count",
            ));
        }
        Ok(Gf2Matrix {
            weights,
            ..self.clone()
        })
    }
}

impl BoundaryOperator for Gf2Matrix {
    fn source_dim(&self) -> usize {
        self.source_dim
    }

    fn source_len(&self) -> usize {
        self.cols()
    }

    fn target_len(&self) -> usize {
        self.rows
    }

    fn column_boundary(&self, column: usize) -> &[usize] {
        &self.col_entries[column]
    }
}

/// The bipartite graph with a matrix as its biadjacency matrix.
///
/// Vertex ids are rows `0..m` followed by columns `m..m+n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HasseGraph {
    pub rows: usize,
    pub cols: usize,
    /// `(row, column)` pairs, one per nonzero entry.
    pub edges: Vec<(usize, usize)>,
}

impl HasseGraph {
    pub fn row_vertex(&self, r: usize) -> usize {
        r
    }

    pub fn col_vertex(&self, c: usize) -> usize {
        self.rows + c
    }

    pub fn num_vertices(&self) -> usize {
        self.rows + self.cols
    }

    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::new(self.num_vertices());
        for &(r, c) in &self.edges {
            g.add_edge(self.row_vertex(r), self.col_vertex(c));
        }
        g
    }
}

pub fn hasse_graph(a: &Gf2Matrix) -> HasseGraph {
    HasseGraph {
        rows: a.rows(),
        cols: a.cols(),
        edges: a.entries().collect(),
    }
}

#[derive(Clone)]
struct BitRow(Vec<u64>);

impl BitRow {
    fn zeros(bits: usize) -> Self {
        BitRow(vec![0; bits.div_ceil(64)])
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }
}

/// Outcome of Gaussian elimination on `[A | u]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSolution {
    pub rank: usize,
    /// A solution of `Ax = u` with every free variable zero, if one exists.
    pub particular: Option<Chain>,
    /// Kernel basis from the reduced echelon form, one vector per free column
    /// in increasing column order.
    pub kernel: Vec<Chain>,
}

/// Reduces `[A | u]` to reduced row echelon form over ℤ₂, pivoting on
/// columns in index order.
pub fn solve_linear(a: &Gf2Matrix, u: &Chain) -> Result<LinearSolution> {
    let n = a.cols();
    if u.span() > a.rows() {
        return Err(Error::usage("target row out of range"));
    }
    let mut rows: Vec<BitRow> = (0..a.rows()).map(|_| BitRow::zeros(n + 1)).collect();
    for (r, c) in a.entries() {
        rows[r].set(c);
    }
    for r in u.iter() {
        rows[r].set(n);
    }

    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.get(col) {
                row.xor_assign(&pivot);
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }

    let consistent = rows[rank..].iter().all(|row| !row.get(n));
    let dim = a.source_dim();
    let particular = consistent.then(|| {
        Chain::from_indices(
            dim,
            (0..rank).filter(|&r| rows[r].get(n)).map(|r| pivot_cols[r]),
        )
    });

    let mut is_pivot = vec![false; n];
    for &c in &pivot_cols {
        is_pivot[c] = true;
    }
    let kernel = (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            Chain::from_indices(
                dim,
                std::iter::once(f)
                    .chain((0..rank).filter(|&r| rows[r].get(f)).map(|r| pivot_cols[r])),
            )
        })
        .collect();

    Ok(LinearSolution {
        rank,
        particular,
        kernel,
    })
}

/// Decides whether `u` lies in the column span of `A`; returns one witness
/// `x` with `Ax = u` if so. The witness carries no optimality claim.
pub fn feasibility_check(a: &Gf2Matrix, u: &Chain) -> Result<Option<Chain>> {
    Ok(solve_linear(a, u)?.particular)
}
