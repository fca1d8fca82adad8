//! Seeded stand-in datasets in UCR format for desk-scale benchmarking.
//!
//! Five admissible two- or three-class problems plus two that the admission
//! rules reject. Every generator is a pure function of the seed.

use std::path::Path;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::Result;
use crate::series::Split;
use crate::ucr::{DatasetPair, RawRecord, RawSplit};

pub const DEFAULT_SEED: u64 = 7;
pub const TRAIN_SIZE: usize = 20;
pub const TEST_SIZE: usize = 30;
const LEN: usize = 32;

/// Name of the shifted-dip dataset, where a one-step shift never changes
/// the class.
pub const MOTIF_SHIFT: &str = "MotifShift";

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn noise(rng: &mut ChaCha8Rng, sd: f64) -> f64 {
    Normal::new(0.0, sd).unwrap().sample(rng)
}

/// Items are assigned classes round-robin, labelled `1..=classes`.
fn split<F>(
    name: &str,
    which: Split,
    n: usize,
    classes: usize,
    rng: &mut ChaCha8Rng,
    gen: &F,
) -> RawSplit
where
    F: Fn(usize, &mut ChaCha8Rng) -> Vec<f64>,
{
    let records = (0..n)
        .map(|k| {
            let class = k % classes;
            RawRecord {
                label: (class + 1).to_string(),
                values: gen(class, rng),
            }
        })
        .collect();
    RawSplit::new(name, which, records)
}

fn build<F>(name: &str, seed: u64, id: u64, classes: usize, gen: F) -> DatasetPair
where
    F: Fn(usize, &mut ChaCha8Rng) -> Vec<f64>,
{
    let mut rng = stream(seed, id);
    DatasetPair {
        name: name.to_owned(),
        train: split(name, Split::Train, TRAIN_SIZE, classes, &mut rng, &gen),
        test: split(name, Split::Test, TEST_SIZE, classes, &mut rng, &gen),
    }
}

/// Flat level 1 with a single -1 sample; class 1 places it in `6..=12`,
/// class 2 in `19..=25`.
pub fn motif_shift(seed: u64) -> DatasetPair {
    build(MOTIF_SHIFT, seed, 1, 2, |class, rng| {
        let at = if class == 0 {
            rng.gen_range(6..=12)
        } else {
            rng.gen_range(19..=25)
        };
        (0..LEN)
            .map(|t| if t == at { -1.0 } else { 1.0 } + noise(rng, 0.1))
            .collect()
    })
}

/// Cylinder, bell and funnel shapes over a random interval.
pub fn cylinder_bell_funnel(seed: u64) -> DatasetPair {
    build("CylinderBellFunnel", seed, 2, 3, |class, rng| {
        let a = rng.gen_range(4..=8);
        let b = a + rng.gen_range(8..=20);
        let height = 6.0 + noise(rng, 1.0);
        (0..LEN)
            .map(|t| {
                let inside = (a..=b).contains(&t);
                let frac = (t as f64 - a as f64) / (b - a) as f64;
                let shape = match (inside, class) {
                    (false, _) => 0.0,
                    (true, 0) => 1.0,
                    (true, 1) => frac,
                    (true, _) => 1.0 - frac,
                };
                height * shape + noise(rng, 1.0)
            })
            .collect()
    })
}

/// A level change at a random point, upward for class 1 and downward for class 2.
pub fn step_direction(seed: u64) -> DatasetPair {
    build("StepDirection", seed, 3, 2, |class, rng| {
        let at = rng.gen_range(8..=24);
        let sign = if class == 0 { 1.0 } else { -1.0 };
        (0..LEN)
            .map(|t| if t < at { -sign } else { sign } + noise(rng, 1.2))
            .collect()
    })
}

/// Sinusoids with two or four periods and random phase.
pub fn sine_frequency(seed: u64) -> DatasetPair {
    build("SineFrequency", seed, 4, 2, |class, rng| {
        let periods = if class == 0 { 2.0 } else { 4.0 };
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        (0..LEN)
            .map(|t| {
                let x = std::f64::consts::TAU * periods * t as f64 / LEN as f64;
                (x + phase).sin() + noise(rng, 0.9)
            })
            .collect()
    })
}

/// Linear trend of slope +-0.05 with a random offset.
pub fn trend_slope(seed: u64) -> DatasetPair {
    build("TrendSlope", seed, 5, 2, |class, rng| {
        let slope = if class == 0 { 0.05 } else { -0.05 };
        let offset = rng.gen_range(-0.5..0.5);
        (0..LEN)
            .map(|t| offset + slope * (t as f64 - LEN as f64 / 2.0) + noise(rng, 1.0))
            .collect()
    })
}

/// Rows of length 20 to 32; rejected as variable length.
pub fn ragged_lengths(seed: u64) -> DatasetPair {
    build("RaggedLengths", seed, 6, 2, |class, rng| {
        let len = rng.gen_range(20..=LEN);
        (0..len)
            .map(|t| class as f64 + (t as f64 / 4.0).sin() + noise(rng, 0.2))
            .collect()
    })
}

/// Three classes where class 3 has one training exemplar; rejected.
pub fn lonely_class(seed: u64) -> DatasetPair {
    let mut pair = build("LonelyClass", seed, 7, 2, |class, rng| {
        (0..LEN).map(|_| class as f64 + noise(rng, 0.5)).collect()
    });
    if let Some(last) = pair.train.records.last_mut() {
        last.label = "3".into();
    }
    pair.train = RawSplit::new(pair.name.clone(), Split::Train, pair.train.records);
    pair
}

/// All stand-ins, admissible ones first.
pub fn stand_ins(seed: u64) -> Vec<DatasetPair> {
    vec![
        motif_shift(seed),
        cylinder_bell_funnel(seed),
        step_direction(seed),
        sine_frequency(seed),
        trend_slope(seed),
        ragged_lengths(seed),
        lonely_class(seed),
    ]
}

/// Writes every stand-in under `root` and returns their names.
pub fn write_stand_ins(root: impl AsRef<Path>, seed: u64) -> Result<Vec<String>> {
    let root = root.as_ref();
    stand_ins(seed)
        .into_iter()
        .map(|pair| pair.write(root).map(|_| pair.name))
        .collect()
}
