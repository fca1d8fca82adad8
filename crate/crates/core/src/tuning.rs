//! Parameter grids and leave-one-out selection for CDTW, WDTW and ADTW.
//!
//! * CDTW: windows `floor(i * len / 100)` for `i = 0..=100`, deduplicated.
//! * WDTW: weight factors `i / 100` for `i = 1..=100`.
//! * ADTW: penalties `omega' * (i / 100)^e` for `i = 1..=100`, where `omega'`
//!   is the mean SQED over random training pairs and `e` defaults to 5.
//!
//! Each candidate is scored by leave-one-out NN1 accuracy on the training
//! split. Ties go to the smallest CDTW/WDTW parameter and to the (lower)
//! median tied ADTW candidate.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::distance::{sqed, DistanceSpec, Family};
use crate::error::{Error, Result};
use crate::nn::loocv_correct;
use crate::scalar::Scalar;
use crate::series::LabeledDataset;

/// Default number of random pairs averaged for `omega'`.
pub const DEFAULT_PAIR_SAMPLES: usize = 4000;

#[derive(Clone, Debug, PartialEq)]
pub struct TuningConfig {
    /// Exponent `e` of the ADTW ratio ladder.
    pub exponent: f64,
    /// Grid resolution: 100 gives 101 CDTW fractions and 100 WDTW/ADTW values.
    pub grid_steps: usize,
    /// Pairs drawn for `omega'`; all pairs are used when there are fewer.
    pub pair_samples: usize,
    pub seed: u64,
}

impl Default for TuningConfig {
    fn default() -> Self {
        TuningConfig {
            exponent: 5.0,
            grid_steps: 100,
            pair_samples: DEFAULT_PAIR_SAMPLES,
            seed: 0,
        }
    }
}

impl TuningConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.exponent > 0.0 && self.exponent.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "exponent must be positive, got {}",
                self.exponent
            )));
        }
        if self.grid_steps == 0 {
            return Err(Error::InvalidParameter(
                "grid_steps must be at least 1".into(),
            ));
        }
        if self.pair_samples == 0 {
            return Err(Error::InvalidParameter(
                "pair_samples must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Sakoe-Chiba windows for the fractions `0, 1/steps, ..., 1` of `len`.
pub fn cdtw_window_candidates(len: usize, steps: usize) -> Vec<usize> {
    let mut windows: Vec<usize> = (0..=steps).map(|i| i * len / steps).collect();
    windows.dedup();
    windows
}

/// WDTW weight factors `1/steps, 2/steps, ..., 1`.
pub fn wdtw_g_candidates<T: Scalar>(steps: usize) -> Vec<T> {
    let denom = T::from_usize(steps).unwrap();
    (1..=steps)
        .map(|i| T::from_usize(i).unwrap() / denom)
        .collect()
}

/// ADTW penalties `omega_prime * (i/steps)^exponent` for `i = 1..=steps`.
pub fn adtw_penalty_candidates<T: Scalar>(omega_prime: T, cfg: &TuningConfig) -> Vec<T> {
    let steps = cfg.grid_steps as f64;
    (1..=cfg.grid_steps)
        .map(|i| omega_prime * T::from_f64_lossy((i as f64 / steps).powf(cfg.exponent)))
        .collect()
}

/// Index pairs used for `omega'`.
///
/// When the dataset has at most `cfg.pair_samples` distinct pairs, every pair
/// `(i, j), i < j` is used in order. Otherwise `cfg.pair_samples` pairs of
/// distinct indices are drawn uniformly with replacement from a ChaCha8
/// stream seeded with `cfg.seed`: `i` from `0..n`, then `j` from `0..n-1`,
/// bumped by one when `j >= i`.
pub fn omega_prime_pairs(n: usize, cfg: &TuningConfig) -> Vec<(usize, usize)> {
    let total = n * n.saturating_sub(1) / 2;
    if total <= cfg.pair_samples {
        return (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    (0..cfg.pair_samples)
        .map(|_| {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            (i, j)
        })
        .collect()
}

/// Mean SQED over the pairs chosen by [`omega_prime_pairs`].
pub fn sample_omega_prime<T: Scalar>(train: &LabeledDataset<T>, cfg: &TuningConfig) -> Result<T> {
    cfg.validate()?;
    if train.len() < 2 {
        return Err(Error::DatasetTooSmall {
            name: train.name().to_owned(),
            reason: format!("{} series, need at least 2 to sample pairs", train.len()),
        });
    }
    let pairs = omega_prime_pairs(train.len(), cfg);
    let mut sum = T::zero();
    for &(i, j) in &pairs {
        sum += sqed(train.series(i), train.series(j))?;
    }
    Ok(sum / T::from_usize(pairs.len()).unwrap())
}

/// Lower median of a sorted list of tied candidate indices.
pub fn median_tied(tied: &[usize]) -> usize {
    assert!(!tied.is_empty());
    tied[(tied.len() - 1) / 2]
}

#[derive(Clone, Debug, PartialEq)]
pub struct CandidateScore {
    /// Parameter value; `None` for SQED and DTW.
    pub param: Option<f64>,
    pub correct: usize,
    pub accuracy: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TuningResult<T> {
    pub family: Family,
    pub chosen: DistanceSpec<T>,
    pub chosen_index: usize,
    pub candidates: Vec<CandidateScore>,
    /// Mean sampled SQED; only for ADTW.
    pub omega_prime: Option<T>,
    pub seed: u64,
    pub exponent: f64,
}

impl<T: Scalar> TuningResult<T> {
    pub fn best_accuracy(&self) -> f64 {
        self.candidates[self.chosen_index].accuracy
    }

    /// Candidate scores as CSV, preceded by a `#` line carrying the chosen
    /// value, `omega'`, the seed and the exponent.
    pub fn to_csv(&self) -> String {
        let fmt_opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        let mut out = String::new();
        writeln!(
            out,
            "# family={},chosen={},chosen_index={},omega_prime={},seed={},exponent={}",
            self.family.id(),
            fmt_opt(self.chosen.param()),
            self.chosen_index,
            fmt_opt(self.omega_prime.map(Scalar::as_f64)),
            self.seed,
            self.exponent
        )
        .unwrap();
        out.push_str("param,accuracy\n");
        for c in &self.candidates {
            writeln!(out, "{},{}", fmt_opt(c.param), c.accuracy).unwrap();
        }
        out
    }
}

/// Candidate specs for `family` on `train`, plus `omega'` for ADTW.
pub fn candidates<T: Scalar>(
    family: Family,
    train: &LabeledDataset<T>,
    cfg: &TuningConfig,
) -> Result<(Vec<DistanceSpec<T>>, Option<T>)> {
    cfg.validate()?;
    Ok(match family {
        Family::Sqed => (vec![DistanceSpec::Sqed], None),
        Family::Dtw => (vec![DistanceSpec::Dtw], None),
        Family::Cdtw => {
            let len = train.series_len().ok_or_else(|| Error::InvalidDataset {
                name: train.name().to_owned(),
                reason: "variable length".into(),
            })?;
            let specs = cdtw_window_candidates(len, cfg.grid_steps)
                .into_iter()
                .map(|window| DistanceSpec::Cdtw { window })
                .collect();
            (specs, None)
        }
        Family::Wdtw => (
            wdtw_g_candidates(cfg.grid_steps)
                .into_iter()
                .map(|g| DistanceSpec::Wdtw { g })
                .collect(),
            None,
        ),
        Family::Adtw => {
            let omega_prime = sample_omega_prime(train, cfg)?;
            let specs = adtw_penalty_candidates(omega_prime, cfg)
                .into_iter()
                .map(|penalty| DistanceSpec::Adtw { penalty })
                .collect();
            (specs, Some(omega_prime))
        }
    })
}

/// Index of the selected candidate given per-candidate correct counts.
pub fn select(family: Family, correct: &[usize]) -> usize {
    let best = *correct.iter().max().expect("at least one candidate");
    let tied: Vec<usize> = (0..correct.len()).filter(|&i| correct[i] == best).collect();
    match family {
        Family::Adtw => median_tied(&tied),
        _ => tied[0],
    }
}

/// Scores every candidate by LOOCV NN1 on `train` and picks the best.
///
/// Candidates are scored in parallel; selection runs on the completed score
/// table, so the result equals sequential evaluation.
pub fn tune<T: Scalar>(
    family: Family,
    train: &LabeledDataset<T>,
    cfg: &TuningConfig,
) -> Result<TuningResult<T>> {
    train.check_trainable()?;
    let (specs, omega_prime) = candidates(family, train, cfg)?;
    let correct = specs
        .par_iter()
        .map(|spec| loocv_correct(train, spec))
        .collect::<Result<Vec<_>>>()?;
    let n = train.len() as f64;
    let chosen_index = select(family, &correct);
    Ok(TuningResult {
        family,
        chosen: specs[chosen_index],
        chosen_index,
        candidates: specs
            .iter()
            .zip(&correct)
            .map(|(spec, &c)| CandidateScore {
                param: spec.param(),
                correct: c,
                accuracy: c as f64 / n,
            })
            .collect(),
        omega_prime,
        seed: cfg.seed,
        exponent: cfg.exponent,
    })
}
