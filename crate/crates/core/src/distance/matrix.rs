use std::fmt::Write as _;

use crate::error::Result;
use crate::scalar::Scalar;
use crate::series::TimeSeries;

use super::kernel::Kernel;
use super::DistanceSpec;

/// Cumulative cost matrix with the border row and column at index 0.
#[derive(Clone, Debug, PartialEq)]
pub struct CostMatrix<T> {
    rows: usize,
    cols: usize,
    cells: Vec<T>,
}

impl<T: Scalar> CostMatrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        assert!(
            i < self.rows && j < self.cols,
            "cell ({i},{j}) out of bounds"
        );
        self.cells[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.cells[i * self.cols..(i + 1) * self.cols]
    }

    /// Bottom-right cell: the distance.
    pub fn distance(&self) -> T {
        self.cells[self.cells.len() - 1]
    }

    /// One CSV line per matrix row, `inf` for unreachable cells.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.rows {
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                write!(out, "{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Full-matrix evaluation of `spec` on `(s, t)`.
pub fn cost_matrix<T: Scalar>(
    spec: &DistanceSpec<T>,
    s: &TimeSeries<T>,
    t: &TimeSeries<T>,
) -> Result<CostMatrix<T>> {
    let kernel = Kernel::new(spec, s.len(), t.len())?;
    Ok(CostMatrix {
        rows: s.len() + 1,
        cols: t.len() + 1,
        cells: kernel.full_matrix(s, t),
    })
}

/// Reference distance read off the full matrix. Quadratic space; used as the
/// oracle for the two-row kernels.
pub fn naive_distance<T: Scalar>(
    spec: &DistanceSpec<T>,
    s: &TimeSeries<T>,
    t: &TimeSeries<T>,
) -> Result<T> {
    cost_matrix(spec, s, t).map(|m| m.distance())
}
