//! Elastic time series distances centred on Amerced Dynamic Time Warping
//! (ADTW), with the SQED, DTW, CDTW and WDTW baselines, parameter tuning by
//! leave-one-out NN1, UCR-format ingestion and benchmark statistics.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`, the precision used by the benchmark pipeline.
//!
//! ```
//! use elastic_dtw::{distance, Series, Spec};
//!
//! let s = Series::new(vec![1.0, 1.0, -1.0, 1.0, 1.0, 1.0])?;
//! let t = Series::new(vec![1.0, 1.0, 1.0, -1.0, 1.0, 1.0])?;
//! assert_eq!(distance(&Spec::Adtw { penalty: 3.0 }, &s, &t)?, 6.0);
//! assert_eq!(distance(&Spec::Sqed, &s, &t)?, 8.0);
//! # Ok::<(), elastic_dtw::Error>(())
//! ```

pub mod bench;
pub mod distance;
pub mod error;
pub mod nn;
pub mod scalar;
pub mod series;
pub mod stats;
pub mod synthetic;
pub mod tuning;
pub mod ucr;

pub use bench::{
    build_report, run_benchmark, run_benchmark_with, run_dataset, write_report, BenchmarkOutput,
    ComparisonReport, DatasetOutcome, DatasetStatus,
};
pub use distance::{
    adtw, cdtw, cost_matrix, distance, distance_ea, dtw, naive_distance, path_cost, sqed,
    warping_path, wdtw, weight_vector, CostMatrix, DistanceSpec, Family,
};
pub use error::{Error, Result};
pub use nn::{evaluate, loocv_accuracy, nn1, ClassificationOutcome, Neighbor};
pub use scalar::Scalar;
pub use series::{
    point_cost, reverse, validate_path, Label, Labeled, LabeledDataset, Split, TimeSeries,
    WarpingPath,
};

pub use stats::{
    best_alternative, holm_adjust, mean_ranks, wilcoxon_signed_rank, AccuracyMatrix, WilcoxonResult,
};
pub use tuning::{tune, TuningConfig, TuningResult};
pub use ucr::{admit, load_split, Admission, DatasetMeta, DatasetPair, RawSplit};

pub type Series = TimeSeries<f64>;
pub type Series32 = TimeSeries<f32>;
pub type Dataset = LabeledDataset<f64>;
pub type Dataset32 = LabeledDataset<f32>;
pub type Spec = DistanceSpec<f64>;
pub type Spec32 = DistanceSpec<f32>;
pub type Matrix = CostMatrix<f64>;
