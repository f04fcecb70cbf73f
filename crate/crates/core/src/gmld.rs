//! Dynamic program over a nice tree decomposition of the Hasse graph.
//!
//! For every node `t` and every pair `(Q, P)` with `Q` a set of bag columns
//! and `P` a set of bag rows, the table stores the cheapest choice of
//! already-forgotten columns such that
//!
//! * every forgotten row `ρ` satisfies `ρ ∈ ∂W ⇔ ρ ∈ U`,
//! * the bag columns in `W` are exactly `Q`,
//! * the bag rows where `∂W △ U` is odd (counting only columns seen so far)
//!   are exactly `P`.
//!
//! Only forgotten columns are charged; a column's weight is added once, at
//! its forget node. At the empty root bag the single entry is the optimum.
//! Negative weights are allowed.
//!
//! Table entries are indexed by `q | p << |bag columns|` with bits following
//! the sorted order of the bag's columns and rows.

use crate::chain::{Chain, Weight};
use crate::error::{Error, Result};
use crate::gf2::{hasse_graph, Gf2Matrix};
use crate::result::{SolveResult, SolveStats, Status};
use crate::td::{validate_nice, NiceTreeDecomposition, NodeKind};

/// Table value: a finite weight or the dedicated infeasible marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cost {
    Finite(Weight),
    Infinite,
}

impl Cost {
    pub fn is_finite(self) -> bool {
        matches!(self, Cost::Finite(_))
    }

    pub fn finite(self) -> Option<Weight> {
        match self {
            Cost::Finite(w) => Some(w),
            Cost::Infinite => None,
        }
    }

    fn plus(self, other: Cost) -> Cost {
        match (self, other) {
            (Cost::Finite(a), Cost::Finite(b)) => Cost::Finite(a + b),
            _ => Cost::Infinite,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct GmldOptions {
    /// Largest bag (rows plus columns) whose table may be allocated.
    pub max_bag_bits: usize,
}

impl Default for GmldOptions {
    fn default() -> Self {
        GmldOptions { max_bag_bits: 26 }
    }
}

/// Work done at one bag, for checking against the `2^|X|` and
/// `2^|X∩C| · 4^|X∩R|` bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BagCost {
    pub cols: usize,
    pub rows: usize,
    pub entries: u64,
    pub join_pairs: u64,
}

/// The table of one node together with the bag layout it was built for.
#[derive(Debug, Clone)]
pub struct BagTable {
    /// Matrix column indices in the bag, sorted.
    pub cols: Vec<usize>,
    /// Matrix row indices in the bag, sorted.
    pub rows: Vec<usize>,
    pub values: Vec<Cost>,
    /// Forget-column nodes: 1 when the column was taken. Join nodes: the
    /// left child's `P`. Empty otherwise.
    choice: Vec<u32>,
    /// Per bag column, the bag rows it touches as a `P`-mask.
    col_row_mask: Vec<u32>,
    u_mask: u32,
}

impl BagTable {
    fn index(&self, q: usize, p: usize) -> usize {
        q | (p << self.cols.len())
    }

    fn split(&self, idx: usize) -> (usize, usize) {
        let nc = self.cols.len();
        (idx & ((1 << nc) - 1), idx >> nc)
    }

    /// `∂Q ∩ X_t` as a row mask.
    fn boundary_mask(&self, q: usize) -> u32 {
        let mut mask = 0;
        let mut bits = q;
        while bits != 0 {
            mask ^= self.col_row_mask[bits.trailing_zeros() as usize];
            bits &= bits - 1;
        }
        mask
    }

    pub fn get(&self, q: usize, p: usize) -> Cost {
        self.values[self.index(q, p)]
    }
}

/// All tables of a run, indexed by decomposition node.
#[derive(Debug, Clone)]
pub struct DpTables {
    pub tables: Vec<BagTable>,
    pub costs: Vec<BagCost>,
}

#[derive(Debug, Clone)]
pub struct GmldOutcome {
    pub result: SolveResult,
    pub tables: DpTables,
}

fn remove_bit(x: usize, i: usize) -> usize {
    ((x >> (i + 1)) << i) | (x & ((1 << i) - 1))
}

fn insert_bit(x: usize, i: usize, bit: usize) -> usize {
    ((x >> i) << (i + 1)) | (bit << i) | (x & ((1 << i) - 1))
}

struct Layout<'a> {
    a: &'a Gf2Matrix,
    u: &'a Chain,
}

impl Layout<'_> {
    fn is_col(&self, v: usize) -> bool {
        v >= self.a.rows()
    }

    fn col(&self, v: usize) -> usize {
        v - self.a.rows()
    }

    fn empty_table(&self, bag: &[usize], max_bits: usize) -> Result<BagTable> {
        if bag.len() > max_bits {
            return Err(Error::Resource(format!(
                "bag of {} vertices exceeds the {max_bits}-bit table limit",
                bag.len()
            )));
        }
        let rows: Vec<usize> = bag.iter().copied().filter(|&v| !self.is_col(v)).collect();
        let cols: Vec<usize> = bag
            .iter()
            .copied()
            .filter(|&v| self.is_col(v))
            .map(|v| self.col(v))
            .collect();
        let col_row_mask = cols
            .iter()
            .map(|&c| {
                self.a
                    .column(c)
                    .iter()
                    .fold(0u32, |m, r| match rows.binary_search(r) {
                        Ok(j) => m | 1 << j,
                        Err(_) => m,
                    })
            })
            .collect();
        let u_mask = rows
            .iter()
            .enumerate()
            .filter(|(_, &r)| self.u.contains(r))
            .fold(0u32, |m, (j, _)| m | 1 << j);
        Ok(BagTable {
            values: vec![Cost::Infinite; 1 << bag.len()],
            cols,
            rows,
            choice: Vec::new(),
            col_row_mask,
            u_mask,
        })
    }
}

/// Computes the table of one node from its children's tables.
pub fn process_bag(
    kind: NodeKind,
    bag: &[usize],
    children: &[&BagTable],
    a: &Gf2Matrix,
    u: &Chain,
    max_bag_bits: usize,
) -> Result<(BagTable, BagCost)> {
    let layout = Layout { a, u };
    let mut t = layout.empty_table(bag, max_bag_bits)?;
    let nc = t.cols.len();
    let size = t.values.len();
    let mut join_pairs = 0u64;
    let child = |k: usize| -> Result<&BagTable> {
        children
            .get(k)
            .copied()
            .ok_or_else(|| Error::usage(format!("{kind:?} node is missing child {k}")))
    };
    match kind {
        NodeKind::Leaf => {
            if !bag.is_empty() {
                return Err(Error::usage("leaf bags must be empty"));
            }
            t.values[0] = Cost::Finite(0);
        }
        NodeKind::Introduce(v) if layout.is_col(v) => {
            let s = child(0)?;
            let i = t
                .cols
                .binary_search(&layout.col(v))
                .expect("introduced column in bag");
            let sigma_rows = t.col_row_mask[i] as usize;
            for idx in 0..size {
                let (q, p) = t.split(idx);
                let qs = remove_bit(q, i);
                let ps = if q >> i & 1 == 1 { p ^ sigma_rows } else { p };
                t.values[idx] = s.get(qs, ps);
            }
        }
        NodeKind::Introduce(v) => {
            let s = child(0)?;
            let j = t.rows.binary_search(&v).expect("introduced row in bag");
            for idx in 0..size {
                let (q, p) = t.split(idx);
                let parity = (p as u32 ^ t.boundary_mask(q) ^ t.u_mask) >> j & 1;
                t.values[idx] = if parity == 1 {
                    Cost::Infinite
                } else {
                    s.get(q, remove_bit(p, j))
                };
            }
        }
        NodeKind::Forget(v) if layout.is_col(v) => {
            let s = child(0)?;
            let sigma = layout.col(v);
            let i = s
                .cols
                .binary_search(&sigma)
                .expect("forgotten column in child bag");
            let w = Cost::Finite(a.weights().get(sigma));
            t.choice = vec![0; size];
            for idx in 0..size {
                let (q, p) = t.split(idx);
                let skip = s.get(insert_bit(q, i, 0), p);
                let take = s.get(insert_bit(q, i, 1), p).plus(w);
                if take < skip {
                    t.values[idx] = take;
                    t.choice[idx] = 1;
                } else {
                    t.values[idx] = skip;
                }
            }
        }
        NodeKind::Forget(v) => {
            let s = child(0)?;
            let j = s
                .rows
                .binary_search(&v)
                .expect("forgotten row in child bag");
            for idx in 0..size {
                let (q, p) = t.split(idx);
                t.values[idx] = s.get(q, insert_bit(p, j, 0));
            }
        }
        NodeKind::Join => {
            let (s1, s2) = (child(0)?, child(1)?);
            let nr = t.rows.len();
            t.choice = vec![0; size];
            for q in 0..1usize << nc {
                let fixed = (t.boundary_mask(q) ^ t.u_mask) as usize;
                for ps in 0..1usize << nr {
                    let left = s1.get(q, ps);
                    if !left.is_finite() {
                        continue;
                    }
                    for pt in 0..1usize << nr {
                        join_pairs += 1;
                        let total = left.plus(s2.get(q, pt ^ ps ^ fixed));
                        let idx = t.index(q, pt);
                        if total < t.values[idx] {
                            t.values[idx] = total;
                            t.choice[idx] = ps as u32;
                        }
                    }
                }
            }
        }
    }
    let cost = BagCost {
        cols: nc,
        rows: t.rows.len(),
        entries: size as u64,
        join_pairs,
    };
    Ok((t, cost))
}

/// Replays the recurrences top-down from the root entry and collects the
/// columns taken at forget nodes.
pub fn backtrack(tables: &DpTables, ntd: &NiceTreeDecomposition, a: &Gf2Matrix) -> Result<Chain> {
    let root = &tables.tables[ntd.root];
    if root.values.len() != 1 || !root.values[0].is_finite() {
        return Err(Error::usage("root entry is infeasible"));
    }
    let mut taken = Vec::new();
    let mut stack = vec![(ntd.root, 0usize)];
    while let Some((node, idx)) = stack.pop() {
        let t = &tables.tables[node];
        let (q, p) = t.split(idx);
        let kids = &ntd.nodes[node].children;
        match ntd.nodes[node].kind {
            NodeKind::Leaf => {}
            NodeKind::Introduce(v) if v >= a.rows() => {
                let s = &tables.tables[kids[0]];
                let i = t
                    .cols
                    .binary_search(&(v - a.rows()))
                    .expect("column in bag");
                let ps = if q >> i & 1 == 1 {
                    p ^ t.col_row_mask[i] as usize
                } else {
                    p
                };
                stack.push((kids[0], s.index(remove_bit(q, i), ps)));
            }
            NodeKind::Introduce(v) => {
                let s = &tables.tables[kids[0]];
                let j = t.rows.binary_search(&v).expect("row in bag");
                stack.push((kids[0], s.index(q, remove_bit(p, j))));
            }
            NodeKind::Forget(v) if v >= a.rows() => {
                let s = &tables.tables[kids[0]];
                let sigma = v - a.rows();
                let i = s.cols.binary_search(&sigma).expect("column in child bag");
                let bit = t.choice[idx] as usize;
                if bit == 1 {
                    taken.push(sigma);
                }
                stack.push((kids[0], s.index(insert_bit(q, i, bit), p)));
            }
            NodeKind::Forget(v) => {
                let s = &tables.tables[kids[0]];
                let j = s.rows.binary_search(&v).expect("row in child bag");
                stack.push((kids[0], s.index(q, insert_bit(p, j, 0))));
            }
            NodeKind::Join => {
                let ps = t.choice[idx] as usize;
                let ps2 = p ^ ps ^ (t.boundary_mask(q) ^ t.u_mask) as usize;
                stack.push((kids[0], tables.tables[kids[0]].index(q, ps)));
                stack.push((kids[1], tables.tables[kids[1]].index(q, ps2)));
            }
        }
    }
    Ok(Chain::from_indices(a.source_dim(), taken))
}

/// Solves `min w(W)` over `W ⊆ C` with `∂W = U` on the Hasse graph of `a`,
/// using a nice tree decomposition whose vertices are rows `0..m` and columns
/// `m..m+n`.
pub fn solve_gmld(
    a: &Gf2Matrix,
    u: &Chain,
    ntd: &NiceTreeDecomposition,
    opts: GmldOptions,
) -> Result<GmldOutcome> {
    if u.span() > a.rows() {
        return Err(Error::usage("target refers to a row outside the matrix"));
    }
    let graph = hasse_graph(a).to_graph();
    validate_nice(ntd, &graph)
        .map_err(|v| Error::usage(format!("decomposition does not fit the Hasse graph: {v}")))?;
    let order = ntd.postorder()?;

    let mut slots: Vec<Option<BagTable>> = vec![None; ntd.len()];
    let mut costs = vec![
        BagCost {
            cols: 0,
            rows: 0,
            entries: 0,
            join_pairs: 0
        };
        ntd.len()
    ];
    for &node in &order {
        let n = &ntd.nodes[node];
        let kids: Vec<&BagTable> = n
            .children
            .iter()
            .map(|&c| slots[c].as_ref().expect("children come first in postorder"))
            .collect();
        let (table, cost) = process_bag(n.kind, &n.bag, &kids, a, u, opts.max_bag_bits)?;
        slots[node] = Some(table);
        costs[node] = cost;
    }
    let tables = DpTables {
        tables: slots
            .into_iter()
            .map(|t| t.expect("every node visited"))
            .collect(),
        costs,
    };

    let stats = SolveStats {
        width: Some(ntd.width() as u64),
        nodes: Some(ntd.len() as u64),
        table_entries: Some(tables.costs.iter().map(|c| c.entries).sum()),
        join_pairs: Some(tables.costs.iter().map(|c| c.join_pairs).sum()),
        ..Default::default()
    };
    let root = &tables.tables[ntd.root];
    debug_assert_eq!(root.values.len(), 1);
    let result = match root.values[0] {
        Cost::Infinite => SolveResult::without_solution(Status::Infeasible, stats),
        Cost::Finite(value) => {
            let w = backtrack(&tables, ntd, a)?;
            if a.apply(&w)? != Chain::from_indices(w.dim() - 1, u.iter()) {
                return Err(Error::Internal(
                    "backtracked chain misses the target".into(),
                ));
            }
            if w.weight(a.weights()) != value {
                return Err(Error::Internal(format!(
                    "backtracked chain weighs {} but the table says {value}",
                    w.weight(a.weights())
                )));
            }
            SolveResult::optimal(value, w, stats)
        }
    };
    Ok(GmldOutcome { result, tables })
}
