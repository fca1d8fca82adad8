//! Classifier comparison statistics over an accuracy matrix.

use std::fmt::Write as _;

use serde::Serialize;
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

/// Largest number of nonzero differences handled by the exact null distribution.
pub const EXACT_MAX_N: usize = 25;

/// Test accuracy per dataset (rows) and classifier (columns).
///
/// A `None` cell marks a failed run; statistics use complete rows only.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AccuracyMatrix {
    pub datasets: Vec<String>,
    pub classifiers: Vec<String>,
    pub cells: Vec<Vec<Option<f64>>>,
}

impl AccuracyMatrix {
    pub fn new(classifiers: Vec<String>) -> Self {
        AccuracyMatrix {
            datasets: Vec::new(),
            classifiers,
            cells: Vec::new(),
        }
    }

    /// Builds a complete matrix from dense rows.
    pub fn from_rows(datasets: Vec<String>, classifiers: Vec<String>, rows: Vec<Vec<f64>>) -> Self {
        assert_eq!(datasets.len(), rows.len());
        assert!(rows.iter().all(|r| r.len() == classifiers.len()));
        AccuracyMatrix {
            datasets,
            classifiers,
            cells: rows
                .into_iter()
                .map(|r| r.into_iter().map(Some).collect())
                .collect(),
        }
    }

    pub fn push_row(&mut self, dataset: String, row: Vec<Option<f64>>) {
        assert_eq!(row.len(), self.classifiers.len());
        self.datasets.push(dataset);
        self.cells.push(row);
    }

    pub fn column_index(&self, classifier: &str) -> Option<usize> {
        self.classifiers.iter().position(|c| c == classifier)
    }

    /// Rows with no missing cell.
    pub fn complete_rows(&self) -> Vec<(usize, Vec<f64>)> {
        self.cells
            .iter()
            .enumerate()
            .filter_map(|(i, row)| {
                row.iter()
                    .copied()
                    .collect::<Option<Vec<f64>>>()
                    .map(|r| (i, r))
            })
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        self.cells.iter().all(|r| r.iter().all(Option::is_some))
    }

    /// Column over complete rows.
    pub fn column(&self, index: usize) -> Vec<f64> {
        self.complete_rows()
            .into_iter()
            .map(|(_, r)| r[index])
            .collect()
    }

    /// Datasets as rows, classifiers as columns; missing cells are empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("dataset");
        for c in &self.classifiers {
            write!(out, ",{c}").unwrap();
        }
        out.push('\n');
        for (name, row) in self.datasets.iter().zip(&self.cells) {
            out.push_str(name);
            for cell in row {
                match cell {
                    Some(v) => write!(out, ",{v}").unwrap(),
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WilcoxonResult {
    /// `min(W+, W-)`.
    pub statistic: f64,
    pub w_plus: f64,
    pub w_minus: f64,
    /// Number of nonzero differences.
    pub n: usize,
    pub p_value: f64,
    pub exact: bool,
    /// No nonzero difference: `p = 1`.
    pub degenerate: bool,
}

/// Average ranks (1-based) of `values` in ascending order; ties share the mean rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut k = 0;
    while k < order.len() {
        let mut end = k + 1;
        while end < order.len() && values[order[end]] == values[order[k]] {
            end += 1;
        }
        // positions k..end hold ranks k+1..=end
        let rank = (k + 1 + end) as f64 / 2.0;
        for &idx in &order[k..end] {
            ranks[idx] = rank;
        }
        k = end;
    }
    ranks
}

/// Two-sided Wilcoxon signed-rank test on paired samples.
///
/// Zero differences are dropped and tied magnitudes share average ranks. For
/// at most [`EXACT_MAX_N`] nonzero differences the p-value comes from the
/// exact permutation distribution of the (tied) ranks; above that a normal
/// approximation with continuity and tie correction is used.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<WilcoxonResult> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::InvalidParameter(format!(
            "paired samples must have equal nonzero lengths, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let diffs: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x - y)
        .filter(|d| *d != 0.0)
        .collect();
    let n = diffs.len();
    if n == 0 {
        return Ok(WilcoxonResult {
            statistic: 0.0,
            w_plus: 0.0,
            w_minus: 0.0,
            n: 0,
            p_value: 1.0,
            exact: true,
            degenerate: true,
        });
    }
    let magnitudes: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let ranks = average_ranks(&magnitudes);
    // fold from +0.0: an empty `sum` would give -0.0
    let rank_sum = |positive: bool| {
        diffs
            .iter()
            .zip(&ranks)
            .filter(|(d, _)| (**d > 0.0) == positive)
            .fold(0.0, |acc, (_, r)| acc + r)
    };
    let w_plus = rank_sum(true);
    let w_minus = rank_sum(false);
    let statistic = w_plus.min(w_minus);

    let (p_value, exact) = if n <= EXACT_MAX_N {
        (exact_p_value(&ranks, statistic), true)
    } else {
        let mean = ranks.iter().sum::<f64>() / 2.0;
        let sd = (ranks.iter().map(|r| r * r).sum::<f64>() / 4.0).sqrt();
        let z = (((w_plus - mean).abs() - 0.5) / sd).max(0.0);
        (erfc(z / std::f64::consts::SQRT_2).min(1.0), false)
    };
    Ok(WilcoxonResult {
        statistic,
        w_plus,
        w_minus,
        n,
        p_value,
        exact,
        degenerate: false,
    })
}

/// `min(1, 2 P(W+ <= statistic))` under random signs, by subset-sum counting
/// on doubled (hence integral) ranks.
fn exact_p_value(ranks: &[f64], statistic: f64) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (r * 2.0).round() as usize).collect();
    let total: usize = doubled.iter().sum();
    let mut counts = vec![0u64; total + 1];
    counts[0] = 1;
    for &r in &doubled {
        for s in (r..=total).rev() {
            counts[s] += counts[s - r];
        }
    }
    let threshold = (statistic * 2.0).round() as usize;
    let tail: u64 = counts[..=threshold].iter().sum();
    let p = 2.0 * tail as f64 / (1u64 << ranks.len()) as f64;
    p.min(1.0)
}

/// Holm step-down adjustment; output in input order.
pub fn holm_adjust(pvals: &[f64]) -> Vec<f64> {
    let m = pvals.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| pvals[a].total_cmp(&pvals[b]));
    let mut adjusted = vec![0.0; m];
    let mut running = 0.0_f64;
    for (k, &idx) in order.iter().enumerate() {
        let scaled = ((m - k) as f64 * pvals[idx]).min(1.0);
        running = running.max(scaled);
        adjusted[idx] = running;
    }
    adjusted
}

/// Mean rank per classifier over complete rows; rank 1 is the most accurate.
pub fn mean_ranks(matrix: &AccuracyMatrix) -> Vec<(String, f64)> {
    let rows = matrix.complete_rows();
    let c = matrix.classifiers.len();
    let mut sums = vec![0.0; c];
    for (_, row) in &rows {
        let negated: Vec<f64> = row.iter().map(|v| -v).collect();
        for (s, r) in sums.iter_mut().zip(average_ranks(&negated)) {
            *s += r;
        }
    }
    let n = rows.len().max(1) as f64;
    matrix
        .classifiers
        .iter()
        .cloned()
        .zip(sums.into_iter().map(|s| s / n))
        .collect()
}

/// Per complete row, the best accuracy among all classifiers except `target`.
pub fn best_alternative(matrix: &AccuracyMatrix, target: &str) -> Result<Vec<f64>> {
    let t = matrix
        .column_index(target)
        .ok_or_else(|| Error::InvalidParameter(format!("no classifier `{target}`")))?;
    if matrix.classifiers.len() < 2 {
        return Err(Error::InvalidParameter(
            "best alternative needs at least one other classifier".into(),
        ));
    }
    Ok(matrix
        .complete_rows()
        .into_iter()
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(k, _)| *k != t)
                .map(|(_, v)| *v)
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect())
}

/// Wins, ties and losses of `a` against `b`.
pub fn win_tie_loss(a: &[f64], b: &[f64]) -> (usize, usize, usize) {
    a.iter().zip(b).fold((0, 0, 0), |(w, t, l), (x, y)| {
        if x > y {
            (w + 1, t, l)
        } else if x < y {
            (w, t, l + 1)
        } else {
            (w, t + 1, l)
        }
    })
}
