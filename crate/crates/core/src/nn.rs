//! One-nearest-neighbour classification and leave-one-out cross validation.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::distance::{distance_ea, DistanceSpec};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{Label, LabeledDataset, TimeSeries};

#[derive(Clone, Debug, PartialEq)]
pub struct Neighbor<T> {
    pub label: Label,
    pub index: usize,
    pub distance: T,
}

/// Nearest training series to `query`, skipping index `exclude` if given.
///
/// The running best distance is the early-abandon cutoff; a later candidate
/// replaces the best only when strictly closer, so ties go to the lowest index.
fn nearest<T: Scalar>(
    train: &LabeledDataset<T>,
    query: &TimeSeries<T>,
    spec: &DistanceSpec<T>,
    exclude: Option<usize>,
) -> Result<Option<Neighbor<T>>> {
    let mut best: Option<(usize, T)> = None;
    for (index, item) in train.items().iter().enumerate() {
        if Some(index) == exclude {
            continue;
        }
        let cutoff = best.map_or(T::infinity(), |(_, d)| d);
        let d = distance_ea(spec, &item.series, query, cutoff)?;
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((index, d));
        }
    }
    Ok(best.map(|(index, distance)| Neighbor {
        label: train.label(index).clone(),
        index,
        distance,
    }))
}

/// Classifies `query` by its nearest neighbour in `train`.
pub fn nn1<T: Scalar>(
    train: &LabeledDataset<T>,
    query: &TimeSeries<T>,
    spec: &DistanceSpec<T>,
) -> Result<Neighbor<T>> {
    nearest(train, query, spec, None)?.ok_or_else(|| Error::DatasetTooSmall {
        name: train.name().to_owned(),
        reason: "empty training set".into(),
    })
}

/// Number of training items whose nearest other item shares their label.
pub fn loocv_correct<T: Scalar>(
    train: &LabeledDataset<T>,
    spec: &DistanceSpec<T>,
) -> Result<usize> {
    if train.len() < 2 {
        return Err(Error::DatasetTooSmall {
            name: train.name().to_owned(),
            reason: "leave-one-out needs at least 2 series".into(),
        });
    }
    let mut correct = 0;
    for (i, item) in train.items().iter().enumerate() {
        let nb = nearest(train, &item.series, spec, Some(i))?.expect("n >= 2");
        if nb.label == item.label {
            correct += 1;
        }
    }
    Ok(correct)
}

/// Fraction of training items correctly classified by leave-one-out NN1.
pub fn loocv_accuracy<T: Scalar>(train: &LabeledDataset<T>, spec: &DistanceSpec<T>) -> Result<f64> {
    Ok(loocv_correct(train, spec)? as f64 / train.len() as f64)
}

/// Per-query NN1 results over a test split.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationOutcome<T> {
    pub truth: Vec<Label>,
    pub predictions: Vec<Label>,
    pub nearest: Vec<usize>,
    pub distances: Vec<T>,
    pub correct: usize,
    pub accuracy: f64,
}

impl<T: Scalar> ClassificationOutcome<T> {
    /// One row per query: true label, predicted label, nearest index, distance.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("true_label,predicted_label,nearest_index,distance\n");
        for k in 0..self.truth.len() {
            writeln!(
                out,
                "{},{},{},{}",
                self.truth[k], self.predictions[k], self.nearest[k], self.distances[k]
            )
            .unwrap();
        }
        out
    }
}

/// Classifies every test item against the whole training split.
///
/// Queries run in parallel; each query's scan is sequential, so the outcome
/// does not depend on scheduling.
pub fn evaluate<T: Scalar>(
    train: &LabeledDataset<T>,
    test: &LabeledDataset<T>,
    spec: &DistanceSpec<T>,
) -> Result<ClassificationOutcome<T>> {
    let neighbors = test
        .items()
        .par_iter()
        .map(|item| nn1(train, &item.series, spec))
        .collect::<Result<Vec<_>>>()?;
    let truth: Vec<Label> = test.items().iter().map(|it| it.label.clone()).collect();
    let correct = neighbors
        .iter()
        .zip(&truth)
        .filter(|(nb, l)| nb.label == **l)
        .count();
    let accuracy = if truth.is_empty() {
        0.0
    } else {
        correct as f64 / truth.len() as f64
    };
    Ok(ClassificationOutcome {
        predictions: neighbors.iter().map(|nb| nb.label.clone()).collect(),
        nearest: neighbors.iter().map(|nb| nb.index).collect(),
        distances: neighbors.iter().map(|nb| nb.distance).collect(),
        truth,
        correct,
        accuracy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Split;

    fn toy() -> LabeledDataset<f64> {
        LabeledDataset::from_pairs(
            "toy",
            Split::Train,
            vec![
                (vec![0.0, 0.0, 1.0], "a"),
                (vec![0.0, 0.1, 1.0], "a"),
                (vec![5.0, 5.0, 4.0], "b"),
                (vec![5.0, 5.1, 4.0], "b"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn query_equal_to_a_training_series() {
        let ds = toy();
        let nb = nn1(&ds, ds.series(2), &DistanceSpec::Dtw).unwrap();
        assert_eq!(nb.index, 2);
        assert_eq!(nb.distance, 0.0);
        assert_eq!(nb.label.as_str(), "b");
    }

    #[test]
    fn single_item_train_set() {
        let ds =
            LabeledDataset::from_pairs("one", Split::Train, vec![(vec![1.0, 2.0], "z")]).unwrap();
        let q = TimeSeries::new(vec![100.0, -4.0]).unwrap();
        assert_eq!(
            nn1(&ds, &q, &DistanceSpec::Sqed).unwrap().label.as_str(),
            "z"
        );
    }

    #[test]
    fn ties_go_to_lowest_index() {
        let ds = LabeledDataset::from_pairs(
            "tie",
            Split::Train,
            vec![(vec![1.0], "x"), (vec![-1.0], "y"), (vec![1.0], "z")],
        )
        .unwrap();
        let q = TimeSeries::new(vec![0.0]).unwrap();
        let nb = nn1(&ds, &q, &DistanceSpec::Dtw).unwrap();
        assert_eq!((nb.index, nb.label.as_str()), (0, "x"));
    }

    #[test]
    fn loocv_two_items() {
        let same = LabeledDataset::from_pairs(
            "same",
            Split::Train,
            vec![(vec![1.0], "a"), (vec![2.0], "a")],
        )
        .unwrap();
        assert_eq!(loocv_accuracy(&same, &DistanceSpec::Dtw).unwrap(), 1.0);
        let diff = LabeledDataset::from_pairs(
            "diff",
            Split::Train,
            vec![(vec![1.0], "a"), (vec![2.0], "b")],
        )
        .unwrap();
        assert_eq!(loocv_accuracy(&diff, &DistanceSpec::Dtw).unwrap(), 0.0);
        let one = LabeledDataset::from_pairs("one", Split::Train, vec![(vec![1.0], "a")]).unwrap();
        assert!(loocv_accuracy(&one, &DistanceSpec::Dtw).is_err());
    }

    #[test]
    fn evaluate_on_training_set_is_perfect() {
        let ds = toy();
        let out = evaluate(&ds, &ds, &DistanceSpec::Adtw { penalty: 0.5 }).unwrap();
        assert_eq!(out.accuracy, 1.0);
        assert_eq!(out.nearest, vec![0, 1, 2, 3]);
        let csv = out.to_csv();
        assert_eq!(csv.lines().count(), 5);
        assert_eq!(csv.lines().nth(1), Some("a,a,0,0"));
    }

    #[test]
    fn distance_errors_propagate() {
        let ds = LabeledDataset::from_pairs(
            "ragged",
            Split::Train,
            vec![(vec![1.0, 2.0, 3.0], "a"), (vec![1.0], "b")],
        )
        .unwrap();
        let q = TimeSeries::new(vec![1.0]).unwrap();
        assert!(matches!(
            nn1(&ds, &q, &DistanceSpec::Cdtw { window: 0 }),
            Err(Error::UndefinedWindow { .. })
        ));
    }
}
