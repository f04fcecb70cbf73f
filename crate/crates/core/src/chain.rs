//! ℤ₂ chain arithmetic: simplices, chains as index sets, boundaries and weights.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fixed-point weight. Real-valued inputs are scaled by a declared denominator.
pub type Weight = i64;

/// A simplex given by its strictly increasing vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Simplex(Vec<u32>);

impl Simplex {
    /// Builds a simplex from vertex ids in any order. Repeated ids are rejected.
    pub fn new(mut vertices: Vec<u32>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::input("a simplex needs at least one vertex"));
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::input(format!(
                "simplex has a repeated vertex: {vertices:?}"
            )));
        }
        Ok(Simplex(vertices))
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn vertices(&self) -> &[u32] {
        &self.0
    }

    /// The codimension-one faces, obtained by dropping each vertex in turn.
    pub fn faces(&self) -> Result<Vec<Simplex>> {
        boundary_simplex(self)
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// The `d + 1` faces of a `d`-simplex; face `i` omits vertex `i`.
pub fn boundary_simplex(s: &Simplex) -> Result<Vec<Simplex>> {
    if s.dim() == 0 {
        return Err(Error::usage("a vertex has no codimension-one faces"));
    }
    Ok((0..s.0.len())
        .map(|skip| {
            Simplex(
                s.0.iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &v)| v)
                    .collect(),
            )
        })
        .collect())
}

/// A ℤ₂ chain: a set of indices into the simplex table of one dimension.
///
/// Members are kept sorted and distinct; this canonical form is what equality
/// and hashing see.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Chain {
    dim: usize,
    members: Vec<usize>,
}

impl Chain {
    pub fn empty(dim: usize) -> Self {
        Chain {
            dim,
            members: Vec::new(),
        }
    }

    /// Sums the given indices over ℤ₂: an index listed twice cancels.
    pub fn from_indices(dim: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut members: Vec<usize> = indices.into_iter().collect();
        members.sort_unstable();
        let mut out = Vec::with_capacity(members.len());
        let mut i = 0;
        while i < members.len() {
            let mut j = i;
            while j < members.len() && members[j] == members[i] {
                j += 1;
            }
            if (j - i) % 2 == 1 {
                out.push(members[i]);
            }
            i = j;
        }
        Chain { dim, members: out }
    }

    /// Wraps an index list already known to be strictly increasing.
    pub(crate) fn from_sorted(dim: usize, members: Vec<usize>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Chain { dim, members }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn into_members(self) -> Vec<usize> {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.binary_search(&index).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    /// Largest index plus one, or zero for the empty chain.
    pub fn span(&self) -> usize {
        self.members.last().map_or(0, |&m| m + 1)
    }

    /// Symmetric difference `self △ other`.
    pub fn add(&self, other: &Chain) -> Result<Chain> {
        if self.dim != other.dim {
            return Err(Error::usage(format!(
                "cannot add a {}-chain to a {}-chain",
                self.dim, other.dim
            )));
        }
        Ok(Chain {
            dim: self.dim,
            members: symmetric_difference(&self.members, &other.members),
        })
    }

    pub fn weight(&self, weights: &WeightVector) -> Weight {
        weights.weight_of(self)
    }
}

/// `a △ b` on ℤ₂ chains of equal dimension.
pub fn chain_add(a: &Chain, b: &Chain) -> Result<Chain> {
    a.add(b)
}

/// Merge of two strictly increasing sequences, dropping common elements.
pub fn symmetric_difference<T: Ord + Copy>(a: &[T], b: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// One weight per top simplex or matrix column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightVector(Vec<Weight>);

impl WeightVector {
    pub fn new(weights: Vec<Weight>) -> Self {
        WeightVector(weights)
    }

    /// All weights equal to one, the unweighted convention.
    pub fn unit(len: usize) -> Self {
        WeightVector(vec![1; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, index: usize) -> Weight {
        self.0[index]
    }

    pub fn as_slice(&self) -> &[Weight] {
        &self.0
    }

    pub fn is_non_negative(&self) -> bool {
        self.0.iter().all(|&w| w >= 0)
    }

    /// True when every weight is the same value.
    pub fn is_uniform(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    pub fn weight_of(&self, chain: &Chain) -> Weight {
        chain.iter().map(|i| self.0[i]).sum()
    }
}

/// Anything that maps a chain of columns (top simplices) to a chain of rows
/// (codimension-one faces).
pub trait BoundaryOperator {
    /// Dimension of the source chains.
    fn source_dim(&self) -> usize;

    fn source_len(&self) -> usize;

    fn target_len(&self) -> usize;

    /// Sorted row indices in the boundary of one column.
    fn column_boundary(&self, column: usize) -> &[usize];
}

/// `∂W`: the rows hit by an odd number of columns of `w`.
pub fn boundary_chain<B: BoundaryOperator + ?Sized>(w: &Chain, op: &B) -> Result<Chain> {
    if w.dim() != op.source_dim() {
        return Err(Error::usage(format!(
            "boundary operator acts on {}-chains, got a {}-chain",
            op.source_dim(),
            w.dim()
        )));
    }
    if w.span() > op.source_len() {
        return Err(Error::usage(format!(
            "chain index {} out of range for {} simplices",
            w.span() - 1,
            op.source_len()
        )));
    }
    let target_dim = op.source_dim().saturating_sub(1);
    Ok(Chain::from_indices(
        target_dim,
        w.iter()
            .flat_map(|col| op.column_boundary(col).iter().copied()),
    ))
}
