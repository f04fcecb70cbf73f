//! Exact solvers for the minimum bounded chain problem over ℤ₂ and its
//! matrix form, GF(2) maximum likelihood decoding.
//!
//! Three solvers share one result type:
//!
//! * [`mbc1`] solves the one-dimensional case in polynomial time with
//!   shortest paths and a minimum-weight perfect matching.
//! * [`dijkstra`] runs a shortest-path search over boundary chains, optionally
//!   bounded by the number of simplices in the solution.
//! * [`gmld`] is a dynamic program over a nice tree decomposition of the
//!   bipartite Hasse graph of the boundary matrix.
//!
//! [`solve`] is the facade that dispatches between them and verifies every
//! witness before returning it; [`oracle`] holds brute-force reference solvers.

pub mod bench;
pub mod chain;
pub mod complex;
pub mod dijkstra;
pub mod error;
pub mod gen;
pub mod gf2;
pub mod gmld;
pub mod io;
pub mod matching;
pub mod mbc1;
pub mod oracle;
pub mod report;
pub mod result;
pub mod solve;
pub mod td;

pub use chain::{Chain, Simplex, Weight, WeightVector};
pub use complex::ComplexSlice;
pub use error::{Error, Result};
pub use gf2::{Gf2Matrix, HasseGraph};
pub use result::{SolveResult, SolveStats, Status};
pub use solve::{solve, Algorithm, Instance, SolveOptions};
