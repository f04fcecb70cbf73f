//! The `(d, d-1)` slice of a weighted simplicial complex and its incidence.

use std::collections::BTreeSet;

use crate::chain::{BoundaryOperator, Chain, Simplex, Weight, WeightVector};
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;

/// The `d`-simplices of a complex, their weights, all `(d-1)`-simplices and
/// the face/coface incidence between the two levels.
///
/// Both simplex tables are sorted lexicographically by vertex sequence, which
/// fixes every index used downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexSlice {
    dim: usize,
    top: Vec<Simplex>,
    weights: WeightVector,
    faces: Vec<Simplex>,
    top_faces: Vec<Vec<usize>>,
    cofaces: Vec<Vec<usize>>,
}

impl ComplexSlice {
    /// Builds the slice from weighted `d`-simplices plus any extra
    /// `(d-1)`-simplices that should exist even if they bound nothing.
    pub fn build(
        dim: usize,
        top: Vec<(Simplex, Weight)>,
        extra_faces: Vec<Simplex>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::usage("slice dimension must be at least 1"));
        }
        let mut top = top;
        for (s, _) in &top {
            if s.dim() != dim {
                return Err(Error::input(format!(
                    "top simplex {s} has dimension {}, expected {dim}",
                    s.dim()
                )));
            }
        }
        top.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = top.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::input(format!("duplicate top simplex {}", w[0].0)));
        }

        let mut face_set = BTreeSet::new();
        for f in extra_faces {
            if f.dim() + 1 != dim {
                return Err(Error::input(format!(
                    "extra face {f} has dimension {}, expected {}",
                    f.dim(),
                    dim - 1
                )));
            }
            face_set.insert(f);
        }
        for (s, _) in &top {
            face_set.extend(s.faces()?);
        }
        let faces: Vec<Simplex> = face_set.into_iter().collect();

        let mut cofaces = vec![Vec::new(); faces.len()];
        let mut top_faces = Vec::with_capacity(top.len());
        for (j, (s, _)) in top.iter().enumerate() {
            let mut idx: Vec<usize> = s
                .faces()?
                .iter()
                .map(|f| faces.binary_search(f).expect("face table holds every face"))
                .collect();
            idx.sort_unstable();
            for &i in &idx {
                cofaces[i].push(j);
            }
            top_faces.push(idx);
        }

        let (top, weights): (Vec<Simplex>, Vec<Weight>) = top.into_iter().unzip();
        Ok(ComplexSlice {
            dim,
            top,
            weights: WeightVector::new(weights),
            faces,
            top_faces,
            cofaces,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn top(&self) -> &[Simplex] {
        &self.top
    }

    pub fn faces(&self) -> &[Simplex] {
        &self.faces
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    /// `m`, the number of `d`-simplices.
    pub fn num_top(&self) -> usize {
        self.top.len()
    }

    /// `n`, the number of `(d-1)`-simplices.
    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn top_index(&self, s: &Simplex) -> Option<usize> {
        self.top.binary_search(s).ok()
    }

    pub fn face_index(&self, s: &Simplex) -> Option<usize> {
        self.faces.binary_search(s).ok()
    }

    /// Sorted face indices of top simplex `j`.
    pub fn faces_of(&self, j: usize) -> &[usize] {
        &self.top_faces[j]
    }

    /// Sorted indices of the top simplices containing face `i`.
    pub fn cofaces_of(&self, i: usize) -> &[usize] {
        &self.cofaces[i]
    }

    pub fn coface_degree(&self, i: usize) -> usize {
        self.cofaces[i].len()
    }

    /// `c`, the largest coface degree of any face.
    pub fn max_coface_degree(&self) -> usize {
        self.cofaces.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Looks up a set of `(d-1)`-simplices, rejecting unknown or repeated ones.
    pub fn face_chain(&self, simplices: &[Simplex]) -> Result<Chain> {
        let mut idx = Vec::with_capacity(simplices.len());
        for s in simplices {
            match self.face_index(s) {
                Some(i) => idx.push(i),
                None => {
                    return Err(Error::input(format!(
                        "{s} is not a {}-simplex of the complex",
                        self.dim - 1
                    )))
                }
            }
        }
        idx.sort_unstable();
        if idx.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::input("boundary lists a face twice"));
        }
        Ok(Chain::from_sorted(self.dim - 1, idx))
    }

    /// Looks up a set of `d`-simplices.
    pub fn top_chain(&self, simplices: &[Simplex]) -> Result<Chain> {
        let mut idx = Vec::with_capacity(simplices.len());
        for s in simplices {
            idx.push(
                self.top_index(s)
                    .ok_or_else(|| Error::input(format!("{s} is not a top simplex")))?,
            );
        }
        Ok(Chain::from_indices(self.dim, idx))
    }

    pub fn boundary(&self, w: &Chain) -> Result<Chain> {
        crate::chain::boundary_chain(w, self)
    }

    /// Rows are faces, columns are top simplices, weights are copied over.
    pub fn boundary_matrix(&self) -> Gf2Matrix {
        Gf2Matrix::from_columns(
            self.faces.len(),
            self.top_faces.clone(),
            self.weights.clone(),
        )
        .expect("slice incidence is a valid matrix")
        .with_source_dim(self.dim)
    }

    /// Same complex with different top weights (in table order).
    pub fn with_weights(&self, weights: WeightVector) -> Result<Self> {
        if weights.len() != self.top.len() {
            return Err(Error::input(format!(
                "{} weights for {} simplices",
                weights.len(),
                self.top.len()
            )));
        }
        Ok(ComplexSlice {
            weights,
            ..self.clone()
        })
    }
}

impl BoundaryOperator for ComplexSlice {
    fn source_dim(&self) -> usize {
        self.dim
    }

    fn source_len(&self) -> usize {
        self.top.len()
    }

    fn target_len(&self) -> usize {
        self.faces.len()
    }

    fn column_boundary(&self, column: usize) -> &[usize] {
        &self.top_faces[column]
    }
}

/// Free-function form of [`ComplexSlice::build`].
pub fn build_slice(
    dim: usize,
    top: Vec<(Simplex, Weight)>,
    extra_faces: Vec<Simplex>,
) -> Result<ComplexSlice> {
    ComplexSlice::build(dim, top, extra_faces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.to_vec()).unwrap()
    }

    fn unit(tops: &[&[u32]]) -> Vec<(Simplex, Weight)> {
        tops.iter().map(|t| (s(t), 1)).collect()
    }

    #[test]
    fn one_triangle() {
        let k = build_slice(2, unit(&[&[1, 2, 3]]), vec![]).unwrap();
        assert_eq!(k.faces(), &[s(&[1, 2]), s(&[1, 3]), s(&[2, 3])]);
        assert!((0..3).all(|i| k.coface_degree(i) == 1));
        let a = k.boundary_matrix();
        assert_eq!((a.rows(), a.cols()), (3, 1));
        assert_eq!(a.column(0), &[0, 1, 2]);
    }

    #[test]
    fn two_triangles_share_an_edge() {
        let k = build_slice(2, unit(&[&[2, 3, 4], &[1, 2, 3]]), vec![]).unwrap();
        assert_eq!(k.num_faces(), 5);
        let shared = k.face_index(&s(&[2, 3])).unwrap();
        assert_eq!(k.coface_degree(shared), 2);
        // table order is lexicographic regardless of input order
        assert_eq!(k.top()[0], s(&[1, 2, 3]));
        let a = k.boundary_matrix();
        assert_eq!(a.row(shared).len(), 2);
        assert_eq!(a.nnz(), 6);

        let w = Chain::from_indices(2, [0, 1]);
        let b = k.boundary(&w).unwrap();
        let expect = k
            .face_chain(&[s(&[1, 2]), s(&[1, 3]), s(&[2, 4]), s(&[3, 4])])
            .unwrap();
        assert_eq!(b, expect);
    }

    #[test]
    fn octahedron_slice() {
        let k = gen::octahedron().slice;
        assert_eq!(k.num_top(), 8);
        assert_eq!(k.num_faces(), 12);
        assert!((0..12).all(|i| k.coface_degree(i) == 2));
        let all = Chain::from_indices(2, 0..8);
        assert!(k.boundary(&all).unwrap().is_empty());
        let a = k.boundary_matrix();
        assert!((0..12).all(|i| a.row(i).len() == 2));
    }

    #[test]
    fn extra_faces_are_kept() {
        let k = build_slice(2, unit(&[&[1, 2, 3]]), vec![s(&[7, 8])]).unwrap();
        assert_eq!(k.num_faces(), 4);
        let lonely = k.face_index(&s(&[7, 8])).unwrap();
        assert_eq!(k.coface_degree(lonely), 0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            build_slice(2, unit(&[&[1, 2, 3], &[3, 2, 1]]), vec![]),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            build_slice(2, unit(&[&[1, 2]]), vec![]),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            build_slice(2, unit(&[&[1, 2, 3]]), vec![s(&[1])]),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn face_chain_rejects_unknown_faces() {
        let k = build_slice(2, unit(&[&[1, 2, 3]]), vec![]).unwrap();
        assert!(k.face_chain(&[s(&[1, 4])]).is_err());
        assert!(k.face_chain(&[s(&[1, 2]), s(&[1, 2])]).is_err());
    }
}
