//! Time series, labeled datasets, and warping paths.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Squared difference, the point cost used by every measure.
#[inline(always)]
pub fn point_cost<T: Scalar>(a: T, b: T) -> T {
    let d = a - b;
    d * d
}

/// A non-empty sequence of finite values.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries<T> {
    values: Vec<T>,
}

impl<T: Scalar> TimeSeries<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(TimeSeries { values })
    }

    pub fn from_f64(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| T::from_f64_lossy(v)).collect())
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    /// Element-reversed copy.
    pub fn reverse(&self) -> Self {
        let mut values = self.values.clone();
        values.reverse();
        TimeSeries { values }
    }
}

impl<T> Deref for TimeSeries<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.values
    }
}

/// Free-function form of [`TimeSeries::reverse`].
pub fn reverse<T: Scalar>(series: &TimeSeries<T>) -> TimeSeries<T> {
    series.reverse()
}

/// Class label, compared as an opaque string.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Label(pub String);

impl Label {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label(s.to_owned())
    }
}

impl From<String> for Label {
    fn from(s: String) -> Self {
        Label(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Test => "test",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Labeled<T> {
    pub series: TimeSeries<T>,
    pub label: Label,
}

/// Labeled series belonging to one split of a named dataset.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledDataset<T> {
    name: String,
    split: Split,
    items: Vec<Labeled<T>>,
}

impl<T: Scalar> LabeledDataset<T> {
    pub fn new(name: impl Into<String>, split: Split, items: Vec<Labeled<T>>) -> Self {
        LabeledDataset {
            name: name.into(),
            split,
            items,
        }
    }

    /// Convenience constructor from raw values and labels.
    pub fn from_pairs<L: Into<Label>>(
        name: impl Into<String>,
        split: Split,
        pairs: impl IntoIterator<Item = (Vec<T>, L)>,
    ) -> Result<Self> {
        let items = pairs
            .into_iter()
            .map(|(values, label)| {
                Ok(Labeled {
                    series: TimeSeries::new(values)?,
                    label: label.into(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(name, split, items))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn split(&self) -> Split {
        self.split
    }

    pub fn items(&self) -> &[Labeled<T>] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn series(&self, index: usize) -> &TimeSeries<T> {
        &self.items[index].series
    }

    pub fn label(&self, index: usize) -> &Label {
        &self.items[index].label
    }

    /// Common series length, or `None` when lengths differ or the set is empty.
    pub fn series_len(&self) -> Option<usize> {
        let first = self.items.first()?.series.len();
        self.items
            .iter()
            .all(|it| it.series.len() == first)
            .then_some(first)
    }

    pub fn class_counts(&self) -> BTreeMap<Label, usize> {
        let mut counts = BTreeMap::new();
        for it in &self.items {
            *counts.entry(it.label.clone()).or_insert(0) += 1;
        }
        counts
    }

    /// Checks the invariants a training split must satisfy: equal lengths,
    /// at least two classes, at least two exemplars per class.
    pub fn check_trainable(&self) -> Result<()> {
        let invalid = |reason: &str| Error::InvalidDataset {
            name: self.name.clone(),
            reason: reason.to_owned(),
        };
        if self.items.len() < 2 {
            return Err(Error::DatasetTooSmall {
                name: self.name.clone(),
                reason: format!("{} series, need at least 2", self.items.len()),
            });
        }
        if self.series_len().is_none() {
            return Err(invalid("variable length"));
        }
        let counts = self.class_counts();
        if counts.len() < 2 {
            return Err(invalid("single class"));
        }
        if counts.values().any(|&c| c < 2) {
            return Err(invalid("single exemplar class"));
        }
        Ok(())
    }
}

/// Alignment between two series as 1-based index pairs.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WarpingPath {
    pub steps: Vec<(usize, usize)>,
}

impl WarpingPath {
    pub fn new(steps: Vec<(usize, usize)>) -> Self {
        WarpingPath { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Number of steps that are not a simultaneous increment of both indices.
    pub fn warping_steps(&self) -> usize {
        self.steps
            .windows(2)
            .filter(|w| !(w[1].0 == w[0].0 + 1 && w[1].1 == w[0].1 + 1))
            .count()
    }

    pub fn is_valid_for(&self, len_s: usize, len_t: usize) -> bool {
        validate_path(self, len_s, len_t)
    }
}

/// Boundary, continuity and monotonicity check for a warping path.
pub fn validate_path(path: &WarpingPath, len_s: usize, len_t: usize) -> bool {
    let steps = &path.steps;
    let (Some(&first), Some(&last)) = (steps.first(), steps.last()) else {
        return false;
    };
    if first != (1, 1) || last != (len_s, len_t) {
        return false;
    }
    steps.windows(2).all(|w| {
        let ((pi, pj), (ci, cj)) = (w[0], w[1]);
        let continuous = pi <= ci && ci <= pi + 1 && pj <= cj && cj <= pj + 1;
        continuous && w[0] != w[1]
    })
}
