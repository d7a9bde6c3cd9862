//! Fixtures shared by the benchmarks.

use tnn_core::cells::build_nc;
use tnn_core::combinat::{enumerate_diagrams, CauchonDiagram};
use tnn_core::{Matrix, Rational};

/// The 4x4 matrix whose restoration is the worked example in the tests.
pub fn worked_example() -> Matrix<Rational> {
    Matrix::from_i64_rows(&[&[1, 0, 1, 1], &[0, 0, 1, 1], &[1, 1, 1, 1], &[1, 1, 1, 1]])
}

/// A seeded `N_C` for the all-white diagram, with dense random entries.
pub fn dense_nc(m: usize, p: usize, seed: u64) -> Matrix<Rational> {
    build_nc(&CauchonDiagram::all_white(m, p).expect("grid in range"), seed)
}

/// Every diagram of the grid.
pub fn diagrams(m: usize, p: usize) -> Vec<CauchonDiagram> {
    enumerate_diagrams(m, p).expect("grid in range")
}
