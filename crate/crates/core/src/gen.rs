//! Instance generators: closed surfaces, strips, cylinders, grids and seeded
//! random slices and matrices.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chain::{Chain, Simplex, Weight, WeightVector};
use crate::complex::ComplexSlice;
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;

/// A generated complex, a boundary on it and header lines describing how it
/// was made.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    pub slice: ComplexSlice,
    pub boundary: Chain,
    pub comments: Vec<String>,
}

fn tri(a: u32, b: u32, c: u32) -> Simplex {
    Simplex::new(vec![a, b, c]).expect("distinct vertices")
}

fn unit(tops: Vec<Simplex>) -> Vec<(Simplex, Weight)> {
    tops.into_iter().map(|s| (s, 1)).collect()
}

fn octahedron_faces() -> Vec<Simplex> {
    // vertices 0/1, 2/3, 4/5 are the antipodal pairs
    let mut out = Vec::new();
    for a in [0, 1] {
        for b in [2, 3] {
            for c in [4, 5] {
                out.push(tri(a, b, c));
            }
        }
    }
    out
}

/// The boundary of the octahedron: 8 triangles, 12 edges, 6 vertices, with
/// unit weights and an empty boundary.
pub fn octahedron() -> Generated {
    let slice = ComplexSlice::build(2, unit(octahedron_faces()), vec![]).expect("valid complex");
    Generated {
        slice,
        boundary: Chain::empty(1),
        comments: vec!["octahedron".into()],
    }
}

/// The octahedron with face `{1,3,5}` removed, and the boundary of that face.
pub fn octahedron_minus_face() -> (ComplexSlice, Chain) {
    let missing = tri(1, 3, 5);
    let tops: Vec<Simplex> = octahedron_faces()
        .into_iter()
        .filter(|s| *s != missing)
        .collect();
    let slice = ComplexSlice::build(2, unit(tops), vec![]).expect("valid complex");
    let u = slice
        .face_chain(&missing.faces().expect("triangle has faces"))
        .expect("edges of the missing face remain");
    (slice, u)
}

/// Triangles `{i, i+1, i+2}` for `i < length`, with `U` the boundary of the
/// whole strip.
pub fn triangle_strip(length: usize) -> Result<Generated> {
    if length == 0 {
        return Err(Error::usage("strip length must be at least 1"));
    }
    let tops: Vec<Simplex> = (0..length as u32).map(|i| tri(i, i + 1, i + 2)).collect();
    let slice = ComplexSlice::build(2, unit(tops), vec![])?;
    let boundary = slice.boundary(&Chain::from_indices(2, 0..slice.num_top()))?;
    Ok(Generated {
        slice,
        boundary,
        comments: vec![format!("triangle-strip length={length}")],
    })
}

/// A cylinder `a` vertices around and `b` bands along, `2ab` triangles, with
/// `U` both end circles. A single end circle bounds nothing over ℤ₂; see
/// [`cylinder_end`].
pub fn cylinder(around: usize, along: usize) -> Result<Generated> {
    if around < 3 || along < 1 {
        return Err(Error::usage("cylinder needs around >= 3 and along >= 1"));
    }
    let a = around as u32;
    let v = |ring: u32, i: u32| ring * a + i % a;
    let mut tops = Vec::new();
    for r in 0..along as u32 {
        for i in 0..a {
            tops.push(tri(v(r, i), v(r, i + 1), v(r + 1, i)));
            tops.push(tri(v(r, i + 1), v(r + 1, i), v(r + 1, i + 1)));
        }
    }
    let slice = ComplexSlice::build(2, unit(tops), vec![])?;
    let boundary = slice.boundary(&Chain::from_indices(2, 0..slice.num_top()))?;
    Ok(Generated {
        slice,
        boundary,
        comments: vec![format!("cylinder around={around} along={along}")],
    })
}

/// The circle at the `ring = 0` end of [`cylinder`].
pub fn cylinder_end(g: &Generated, around: usize) -> Result<Chain> {
    let a = around as u32;
    let end: Vec<Simplex> = (0..a)
        .map(|i| Simplex::new(vec![i, (i + 1) % a]).expect("distinct"))
        .collect();
    g.slice.face_chain(&end)
}

/// A triangulated `rows x cols` square grid (two triangles per square), with
/// `U` the outer boundary. The Hasse graph width grows with `rows`.
pub fn grid(rows: usize, cols: usize) -> Result<Generated> {
    if rows == 0 || cols == 0 {
        return Err(Error::usage("grid needs at least one row and one column"));
    }
    let w = cols as u32 + 1;
    let v = |r: u32, c: u32| r * w + c;
    let mut tops = Vec::new();
    // column-major so consecutive triangles stay close along the long side
    for c in 0..cols as u32 {
        for r in 0..rows as u32 {
            tops.push(tri(v(r, c), v(r, c + 1), v(r + 1, c)));
            tops.push(tri(v(r, c + 1), v(r + 1, c), v(r + 1, c + 1)));
        }
    }
    let slice = ComplexSlice::build(2, unit(tops), vec![])?;
    let boundary = slice.boundary(&Chain::from_indices(2, 0..slice.num_top()))?;
    Ok(Generated {
        slice,
        boundary,
        comments: vec![format!("grid rows={rows} cols={cols}")],
    })
}

/// The octahedron with every triangle split into four, `levels` times.
pub fn sphere_subdivision(levels: usize) -> Result<Generated> {
    if levels > 8 {
        return Err(Error::usage("at most 8 subdivision levels"));
    }
    let mut faces: Vec<[u32; 3]> = octahedron_faces()
        .iter()
        .map(|s| [s.vertices()[0], s.vertices()[1], s.vertices()[2]])
        .collect();
    let mut next = 6u32;
    for _ in 0..levels {
        let mut mid: BTreeMap<(u32, u32), u32> = BTreeMap::new();
        let mut split = Vec::with_capacity(faces.len() * 4);
        for [a, b, c] in faces {
            let mut m = |x: u32, y: u32| {
                *mid.entry((x.min(y), x.max(y))).or_insert_with(|| {
                    next += 1;
                    next - 1
                })
            };
            let (ab, bc, ca) = (m(a, b), m(b, c), m(c, a));
            split.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        faces = split;
    }
    let tops = faces.into_iter().map(|[a, b, c]| tri(a, b, c)).collect();
    let slice = ComplexSlice::build(2, unit(tops), vec![])?;
    Ok(Generated {
        slice,
        boundary: Chain::empty(1),
        comments: vec![format!("sphere-subdivision levels={levels}")],
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomSliceParams {
    /// Number of top simplices.
    pub top: usize,
    pub vertices: usize,
    pub dim: usize,
    pub seed: u64,
    /// Weights are drawn uniformly from `1..=max_weight`.
    pub max_weight: Weight,
    /// Probability that a top simplex belongs to the chain whose boundary
    /// becomes `U`.
    pub boundary_density: f64,
}

fn binomial(n: usize, k: usize) -> Option<usize> {
    if k > n {
        return Some(0);
    }
    let mut acc: usize = 1;
    for i in 0..k.min(n - k) {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// The `rank`-th `k`-subset of `0..n` in lexicographic order.
fn unrank_subset(mut rank: usize, n: usize, k: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for left in (1..=k).rev() {
        loop {
            let c = binomial(n - next - 1, left - 1).expect("checked by caller");
            if rank < c {
                break;
            }
            rank -= c;
            next += 1;
        }
        out.push(next as u32);
        next += 1;
    }
    out
}

/// `top` distinct random `dim`-simplices on `vertices` vertices with random
/// weights, and `U = ∂W` for a random chain `W` so the instance is feasible.
pub fn random_slice(p: &RandomSliceParams) -> Result<Generated> {
    if p.dim == 0 || p.top == 0 {
        return Err(Error::usage(
            "random slices need dim >= 1 and at least one simplex",
        ));
    }
    if p.max_weight < 1 {
        return Err(Error::usage("max weight must be at least 1"));
    }
    if !(0.0..=1.0).contains(&p.boundary_density) {
        return Err(Error::usage("boundary density must lie in [0, 1]"));
    }
    let k = p.dim + 1;
    let total = binomial(p.vertices, k);
    if total.is_some_and(|t| p.top > t) {
        return Err(Error::input(format!(
            "{} distinct {}-simplices do not fit on {} vertices",
            p.top, p.dim, p.vertices
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let tops: Vec<Simplex> = match total {
        Some(t) if t <= 1 << 20 => index::sample(&mut rng, t, p.top)
            .into_iter()
            .map(|r| Simplex::new(unrank_subset(r, p.vertices, k)).expect("distinct"))
            .collect(),
        _ => {
            let mut seen = BTreeSet::new();
            while seen.len() < p.top {
                let mut vs: Vec<u32> = index::sample(&mut rng, p.vertices, k)
                    .into_iter()
                    .map(|v| v as u32)
                    .collect();
                vs.sort_unstable();
                seen.insert(vs);
            }
            seen.into_iter()
                .map(|vs| Simplex::new(vs).expect("distinct"))
                .collect()
        }
    };
    let mut tops = tops;
    tops.sort();
    let weighted = tops
        .into_iter()
        .map(|s| (s, rng.gen_range(1..=p.max_weight)))
        .collect();
    let slice = ComplexSlice::build(p.dim, weighted, vec![])?;
    let chosen: Vec<usize> = (0..slice.num_top())
        .filter(|_| rng.gen_bool(p.boundary_density))
        .collect();
    let boundary = slice.boundary(&Chain::from_indices(p.dim, chosen))?;
    Ok(Generated {
        slice,
        boundary,
        comments: vec![format!(
            "random-slice top={} vertices={} dim={} max-weight={} density={} seed={}",
            p.top, p.vertices, p.dim, p.max_weight, p.boundary_density, p.seed
        )],
    })
}

/// A random `rows x cols` matrix with entries set with probability
/// `density`, weights in `1..=max_weight`, and a target `u = Ax` for a random
/// `x` (so always feasible).
pub fn random_matrix(
    rows: usize,
    cols: usize,
    density: f64,
    max_weight: Weight,
    seed: u64,
) -> Result<(Gf2Matrix, Chain)> {
    if !(0.0..=1.0).contains(&density) || max_weight < 1 {
        return Err(Error::usage(
            "density must lie in [0, 1] and max weight be positive",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if rng.gen_bool(density) {
                entries.push((r, c));
            }
        }
    }
    let weights = (0..cols).map(|_| rng.gen_range(1..=max_weight)).collect();
    let a = Gf2Matrix::from_entries(rows, cols, entries, WeightVector::new(weights))?;
    let x = a.column_chain((0..cols).filter(|_| rng.gen_bool(0.5)));
    let u = a.apply(&x)?;
    Ok((a, u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io;

    #[test]
    fn octahedron_counts() {
        let g = octahedron();
        assert_eq!(g.slice.num_top(), 8);
        assert_eq!(g.slice.num_faces(), 12);
        assert!((0..12).all(|i| g.slice.coface_degree(i) == 2));
        let (k, u) = octahedron_minus_face();
        assert_eq!(k.num_top(), 7);
        assert_eq!(u.len(), 3);
        assert_eq!(k.boundary(&Chain::from_indices(2, 0..7)).unwrap(), u);
    }

    #[test]
    fn strip_and_cylinder_counts() {
        let s = triangle_strip(1).unwrap();
        assert_eq!(s.slice.num_top(), 1);
        assert_eq!(s.boundary.len(), 3);
        let s = triangle_strip(10).unwrap();
        assert_eq!(s.slice.max_coface_degree(), 2);
        let c = cylinder(3, 1).unwrap();
        assert_eq!(c.slice.num_top(), 6);
        assert_eq!(c.boundary.len(), 6);
        assert_eq!(cylinder_end(&c, 3).unwrap().len(), 3);
        let c = cylinder(4, 3).unwrap();
        assert_eq!(c.slice.num_top(), 24);
        assert_eq!(c.boundary.len(), 8);
        assert!(cylinder(2, 1).is_err());
        assert!(triangle_strip(0).is_err());
    }

    #[test]
    fn subdivided_spheres_are_closed() {
        for levels in 0..3 {
            let g = sphere_subdivision(levels).unwrap();
            assert_eq!(g.slice.num_top(), 8 << (2 * levels));
            assert!((0..g.slice.num_faces()).all(|i| g.slice.coface_degree(i) == 2));
        }
    }

    #[test]
    fn grid_outer_boundary() {
        let g = grid(2, 3).unwrap();
        assert_eq!(g.slice.num_top(), 12);
        assert_eq!(g.boundary.len(), 10);
    }

    #[test]
    fn unranking_is_lexicographic() {
        let all: Vec<Vec<u32>> = (0..10).map(|r| unrank_subset(r, 5, 3)).collect();
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(all, sorted);
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[9], vec![2, 3, 4]);
    }

    #[test]
    fn random_slices_are_seeded() {
        let p = RandomSliceParams {
            top: 12,
            vertices: 7,
            dim: 2,
            seed: 11,
            max_weight: 5,
            boundary_density: 0.5,
        };
        let a = random_slice(&p).unwrap();
        let b = random_slice(&p).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.slice.num_top(), 12);
        let text = io::write_complex(&a.slice, 1, &a.comments).unwrap();
        assert!(text.contains("seed=11"));
        assert_eq!(io::parse_complex(&text).unwrap().slice, a.slice);
        let other = random_slice(&RandomSliceParams {
            seed: 12,
            ..p.clone()
        })
        .unwrap();
        assert_ne!(a.slice, other.slice);
        assert!(random_slice(&RandomSliceParams { top: 36, ..p }).is_err());
    }

    #[test]
    fn generated_boundaries_are_feasible() {
        for seed in 0..20 {
            let g = random_slice(&RandomSliceParams {
                top: 10,
                vertices: 8,
                dim: 2,
                seed,
                max_weight: 3,
                boundary_density: 0.3,
            })
            .unwrap();
            let a = g.slice.boundary_matrix();
            assert!(crate::gf2::feasibility_check(&a, &g.boundary)
                .unwrap()
                .is_some());
            let (a, u) = random_matrix(6, 9, 0.3, 4, seed).unwrap();
            assert!(crate::gf2::feasibility_check(&a, &u).unwrap().is_some());
        }
    }
}
