//! Shared dynamic-programming machinery.
//!
//! Every measure is one recurrence over the `(len_s + 1) x (len_t + 1)` matrix:
//!
//! ```text
//! M(0,0) = 0,  M(i,0) = M(0,j) = +inf
//! M(i,j) = c(i,j) + min(M(i-1,j-1), min(M(i-1,j), M(i,j-1)) + penalty)
//! ```
//!
//! with `c(i,j)` the squared difference (times the WDTW weight of `|i-j|`),
//! `penalty` the ADTW amercing penalty (zero otherwise) and cells outside the
//! CDTW band fixed at `+inf`. SQED is the band of width zero.
//!
//! The full-matrix and two-row forms evaluate each cell with [`step`] on the
//! same operands, so they produce bit-identical values.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::point_cost;

use super::DistanceSpec;

#[inline(always)]
pub(crate) fn step<T: Scalar>(cost: T, diag: T, top: T, left: T, penalty: T) -> T {
    cost + diag.min(top.min(left) + penalty)
}

/// A measure specialised to a pair of lengths.
pub(crate) struct Kernel<T> {
    band: Option<usize>,
    penalty: T,
    weights: Option<Arc<[T]>>,
}

impl<T: Scalar> Kernel<T> {
    pub(crate) fn new(spec: &DistanceSpec<T>, len_s: usize, len_t: usize) -> Result<Self> {
        spec.validate()?;
        if len_s == 0 || len_t == 0 {
            return Err(Error::EmptySeries);
        }
        let diff = len_s.abs_diff(len_t);
        let mut kernel = Kernel {
            band: None,
            penalty: T::zero(),
            weights: None,
        };
        match *spec {
            DistanceSpec::Sqed => {
                if diff != 0 {
                    return Err(Error::LengthMismatch {
                        left: len_s,
                        right: len_t,
                    });
                }
                kernel.band = Some(0);
            }
            DistanceSpec::Dtw => {}
            DistanceSpec::Cdtw { window } => {
                if window < diff {
                    return Err(Error::UndefinedWindow { window, diff });
                }
                kernel.band = Some(window);
            }
            DistanceSpec::Wdtw { g } => {
                kernel.weights = Some(T::weight_cache().get(g, len_s.max(len_t)));
            }
            DistanceSpec::Adtw { penalty } => kernel.penalty = penalty,
        }
        Ok(kernel)
    }

    pub(crate) fn penalty(&self) -> T {
        self.penalty
    }

    #[inline(always)]
    pub(crate) fn cost(&self, s: &[T], t: &[T], i: usize, j: usize) -> T {
        let c = point_cost(s[i - 1], t[j - 1]);
        match &self.weights {
            Some(w) => c * w[i.abs_diff(j)],
            None => c,
        }
    }

    pub(crate) fn in_band(&self, i: usize, j: usize) -> bool {
        self.band.is_none_or(|w| i.abs_diff(j) <= w)
    }

    /// Inclusive column range of row `i` (1-based) that lies inside the band.
    #[inline]
    pub(crate) fn columns(&self, i: usize, len_t: usize) -> (usize, usize) {
        match self.band {
            Some(w) => (i.saturating_sub(w).max(1), (i + w).min(len_t)),
            None => (1, len_t),
        }
    }

    /// Full `(len_s+1) x (len_t+1)` matrix in row-major order.
    pub(crate) fn full_matrix(&self, s: &[T], t: &[T]) -> Vec<T> {
        let (n, m) = (s.len(), t.len());
        let cols = m + 1;
        let mut cells = vec![T::infinity(); (n + 1) * cols];
        cells[0] = T::zero();
        for i in 1..=n {
            let (lo, hi) = self.columns(i, m);
            for j in lo..=hi {
                let diag = cells[(i - 1) * cols + j - 1];
                let top = cells[(i - 1) * cols + j];
                let left = cells[i * cols + j - 1];
                cells[i * cols + j] = step(self.cost(s, t, i, j), diag, top, left, self.penalty);
            }
        }
        cells
    }

    /// Two-row evaluation. Cells whose value exceeds `cutoff` are replaced by
    /// `+inf` and the live column range of each row shrinks accordingly.
    /// Returns `+inf` as soon as a row has no live cell.
    pub(crate) fn rolling(&self, s: &[T], t: &[T], cutoff: T) -> T {
        let (n, m) = (s.len(), t.len());
        let inf = T::infinity();
        let mut prev = vec![inf; m + 1];
        let mut curr = vec![inf; m + 1];
        prev[0] = T::zero();
        // live range [lo, hi] of the previous row; every column in it was written
        let (mut prev_lo, mut prev_hi) = (0usize, 0usize);

        for i in 1..=n {
            let (band_lo, band_hi) = self.columns(i, m);
            let start = band_lo.max(prev_lo).max(1);
            let read = |row: &[T], j: usize| {
                if j >= prev_lo && j <= prev_hi {
                    row[j]
                } else {
                    inf
                }
            };
            let mut left = inf;
            let mut live: Option<(usize, usize)> = None;
            let mut j = start;
            while j <= band_hi {
                if j > prev_hi + 1 && left == inf {
                    break;
                }
                let diag = read(&prev, j - 1);
                let top = read(&prev, j);
                let mut v = step(self.cost(s, t, i, j), diag, top, left, self.penalty);
                if v > cutoff {
                    v = inf;
                } else {
                    live = Some(live.map_or((j, j), |(lo, _)| (lo, j)));
                }
                curr[j] = v;
                left = v;
                j += 1;
            }
            let Some((lo, hi)) = live else {
                return inf;
            };
            std::mem::swap(&mut prev, &mut curr);
            prev_lo = lo;
            prev_hi = hi;
        }
        if prev_hi == m {
            prev[m]
        } else {
            inf
        }
    }
}

/// Early-abandoned squared Euclidean distance over equal-length slices.
pub(crate) fn sqed_ea<T: Scalar>(s: &[T], t: &[T], cutoff: T) -> T {
    let mut acc = T::zero();
    for (&a, &b) in s.iter().zip(t) {
        acc = point_cost(a, b) + acc;
        if acc > cutoff {
            return T::infinity();
        }
    }
    acc
}
