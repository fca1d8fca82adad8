use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{validate_path, TimeSeries, WarpingPath};

use super::kernel::Kernel;
use super::matrix::cost_matrix;
use super::DistanceSpec;

/// Optimal warping path and its cost.
///
/// Backtracks through the full cost matrix preferring the diagonal
/// predecessor, then the left one, then the top one.
pub fn warping_path<T: Scalar>(
    spec: &DistanceSpec<T>,
    s: &TimeSeries<T>,
    t: &TimeSeries<T>,
) -> Result<(WarpingPath, T)> {
    let matrix = cost_matrix(spec, s, t)?;
    let distance = matrix.distance();
    let penalty = match *spec {
        DistanceSpec::Adtw { penalty } => penalty,
        _ => T::zero(),
    };
    let (mut i, mut j) = (s.len(), t.len());
    let mut steps = vec![(i, j)];
    while (i, j) != (1, 1) {
        let diag = matrix.get(i - 1, j - 1);
        let top = matrix.get(i - 1, j);
        let left = matrix.get(i, j - 1);
        if i == 1 {
            j -= 1;
        } else if j == 1 {
            i -= 1;
        } else if diag <= top.min(left) + penalty {
            i -= 1;
            j -= 1;
        } else if left <= top {
            j -= 1;
        } else {
            i -= 1;
        }
        steps.push((i, j));
    }
    steps.reverse();
    Ok((WarpingPath::new(steps), distance))
}

/// Cost of a given path under `spec`, accumulated in path order exactly as
/// the recurrence does. Returns `+inf` for a path leaving the CDTW band.
pub fn path_cost<T: Scalar>(
    spec: &DistanceSpec<T>,
    s: &TimeSeries<T>,
    t: &TimeSeries<T>,
    path: &WarpingPath,
) -> Result<T> {
    let kernel = Kernel::new(spec, s.len(), t.len())?;
    if !validate_path(path, s.len(), t.len()) {
        return Err(Error::InvalidParameter(
            "not a warping path for these series".into(),
        ));
    }
    if path.steps.iter().any(|&(i, j)| !kernel.in_band(i, j)) {
        return Ok(T::infinity());
    }
    let mut acc = T::zero();
    let mut prev = (0, 0);
    for &(i, j) in &path.steps {
        let c = kernel.cost(s, t, i, j);
        acc = if i == prev.0 + 1 && j == prev.1 + 1 {
            c + acc
        } else {
            c + (acc + kernel.penalty())
        };
        prev = (i, j);
    }
    Ok(acc)
}

/// Path as CSV with a `i,j` header and 1-based rows.
pub fn path_to_csv(path: &WarpingPath) -> String {
    let mut out = String::from("i,j\n");
    for (i, j) in &path.steps {
        writeln!(out, "{i},{j}").unwrap();
    }
    out
}
