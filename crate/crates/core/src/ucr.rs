//! UCR archive text format: one series per line, label first.
//!
//! Lines containing a tab are tab-separated; other lines are split on commas
//! or, failing that, on whitespace. Empty fields and `NaN` are missing values.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::series::{Label, Labeled, LabeledDataset, Split, TimeSeries};

#[derive(Clone, Debug, PartialEq)]
pub struct RawRecord {
    pub label: String,
    /// Missing values are stored as NaN.
    pub values: Vec<f64>,
}

/// A parsed split before validation. May hold ragged or incomplete rows.
#[derive(Clone, Debug, PartialEq)]
pub struct RawSplit {
    pub name: String,
    pub split: Split,
    pub records: Vec<RawRecord>,
    /// Rows differ in length, counting trailing NaN padding as absent.
    pub variable_length: bool,
    pub missing_data: bool,
}

fn trailing_missing(values: &[f64]) -> usize {
    values.iter().rev().take_while(|v| v.is_nan()).count()
}

impl RawSplit {
    pub fn new(name: impl Into<String>, split: Split, records: Vec<RawRecord>) -> Self {
        let effective: Vec<usize> = records
            .iter()
            .map(|r| r.values.len() - trailing_missing(&r.values))
            .collect();
        let variable_length = effective.windows(2).any(|w| w[0] != w[1]);
        let missing_data = records.iter().zip(&effective).any(|(r, &len)| {
            r.values[..len].iter().any(|v| v.is_nan()) || (!variable_length && len < r.values.len())
        });
        RawSplit {
            name: name.into(),
            split,
            records,
            variable_length,
            missing_data,
        }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Common row length when every row has the same raw length.
    pub fn series_len(&self) -> Option<usize> {
        let first = self.records.first()?.values.len();
        self.records
            .iter()
            .all(|r| r.values.len() == first)
            .then_some(first)
    }

    pub fn class_counts(&self) -> BTreeMap<String, usize> {
        let mut counts = BTreeMap::new();
        for r in &self.records {
            *counts.entry(r.label.clone()).or_insert(0) += 1;
        }
        counts
    }

    /// Validated dataset; fails on missing values.
    pub fn to_dataset<T: Scalar>(&self) -> Result<LabeledDataset<T>> {
        let items = self
            .records
            .iter()
            .map(|r| {
                Ok(Labeled {
                    series: TimeSeries::from_f64(&r.values)?,
                    label: Label(r.label.clone()),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LabeledDataset::new(self.name.clone(), self.split, items))
    }

    /// Serialises in tab-separated UCR format with round-trip precision.
    pub fn to_ucr(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&r.label);
            for v in &r.values {
                write!(out, "\t{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Serialises a validated dataset in tab-separated UCR format.
pub fn dataset_to_ucr<T: Scalar>(ds: &LabeledDataset<T>) -> String {
    let mut out = String::new();
    for it in ds.items() {
        out.push_str(it.label.as_str());
        for v in it.series.values() {
            write!(out, "\t{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

fn parse_value(token: &str) -> Option<f64> {
    let token = token.trim();
    if token.is_empty() || token.eq_ignore_ascii_case("nan") || token == "?" {
        return Some(f64::NAN);
    }
    token.parse::<f64>().ok()
}

/// Parses UCR text; `path` is only used in error messages.
pub fn parse_split(text: &str, name: &str, split: Split, path: &Path) -> Result<RawSplit> {
    let mut records = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = if line.contains('\t') {
            line.split('\t').collect()
        } else if line.contains(',') {
            line.split(',').collect()
        } else {
            line.split_whitespace().collect()
        };
        let parse_err = |message: String| Error::Parse {
            path: path.to_owned(),
            line: idx + 1,
            message,
        };
        let label = fields[0].trim();
        if label.is_empty() {
            return Err(parse_err("missing class label".into()));
        }
        if fields.len() < 2 {
            return Err(parse_err("record has no values".into()));
        }
        let values = fields[1..]
            .iter()
            .enumerate()
            .map(|(k, tok)| {
                parse_value(tok).ok_or_else(|| {
                    parse_err(format!("field {}: cannot parse `{}`", k + 2, tok.trim()))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        records.push(RawRecord {
            label: label.to_owned(),
            values,
        });
    }
    if records.is_empty() {
        return Err(Error::EmptyFile(path.to_owned()));
    }
    Ok(RawSplit::new(name, split, records))
}

/// Name and split inferred from a `<Name>_TRAIN.*` / `<Name>_TEST.*` file name.
fn name_and_split(path: &Path) -> (String, Split) {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    if let Some(name) = stem.strip_suffix("_TEST") {
        (name.to_owned(), Split::Test)
    } else if let Some(name) = stem.strip_suffix("_TRAIN") {
        (name.to_owned(), Split::Train)
    } else {
        (stem, Split::Train)
    }
}

pub fn load_split(path: impl AsRef<Path>) -> Result<RawSplit> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let (name, split) = name_and_split(path);
    parse_split(&text, &name, split, path)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DatasetPair {
    pub name: String,
    pub train: RawSplit,
    pub test: RawSplit,
}

/// `<root>/<name>/<name>_<SPLIT>.tsv`, falling back to `.txt`.
pub fn split_path(root: &Path, name: &str, split: Split) -> PathBuf {
    let suffix = match split {
        Split::Train => "TRAIN",
        Split::Test => "TEST",
    };
    let dir = root.join(name);
    let tsv = dir.join(format!("{name}_{suffix}.tsv"));
    if tsv.exists() {
        return tsv;
    }
    let txt = dir.join(format!("{name}_{suffix}.txt"));
    if txt.exists() {
        txt
    } else {
        tsv
    }
}

impl DatasetPair {
    pub fn load(root: impl AsRef<Path>, name: &str) -> Result<Self> {
        let root = root.as_ref();
        Self::load_from(
            name,
            split_path(root, name, Split::Train),
            split_path(root, name, Split::Test),
        )
    }

    pub fn load_from(name: &str, train: impl AsRef<Path>, test: impl AsRef<Path>) -> Result<Self> {
        let mut train = load_split(train)?;
        let mut test = load_split(test)?;
        train.name = name.to_owned();
        train.split = Split::Train;
        test.name = name.to_owned();
        test.split = Split::Test;
        Ok(DatasetPair {
            name: name.to_owned(),
            train,
            test,
        })
    }

    /// Writes `<root>/<name>/<name>_{TRAIN,TEST}.tsv` and returns both paths.
    pub fn write(&self, root: impl AsRef<Path>) -> Result<(PathBuf, PathBuf)> {
        let dir = root.as_ref().join(&self.name);
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        let train = dir.join(format!("{}_TRAIN.tsv", self.name));
        let test = dir.join(format!("{}_TEST.tsv", self.name));
        fs::write(&train, self.train.to_ucr()).map_err(|e| Error::io(&train, e))?;
        fs::write(&test, self.test.to_ucr()).map_err(|e| Error::io(&test, e))?;
        Ok((train, test))
    }

    pub fn to_datasets<T: Scalar>(&self) -> Result<(LabeledDataset<T>, LabeledDataset<T>)> {
        Ok((self.train.to_dataset()?, self.test.to_dataset()?))
    }

    pub fn metadata(&self) -> DatasetMeta {
        DatasetMeta {
            name: self.name.clone(),
            train_size: self.train.len(),
            test_size: self.test.len(),
            length: self
                .train
                .series_len()
                .filter(|&l| self.test.series_len() == Some(l)),
            classes: self.train.class_counts().len(),
            train_class_counts: self.train.class_counts(),
            variable_length: self.train.variable_length || self.test.variable_length,
            missing_data: self.train.missing_data || self.test.missing_data,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DatasetMeta {
    pub name: String,
    pub train_size: usize,
    pub test_size: usize,
    pub length: Option<usize>,
    pub classes: usize,
    pub train_class_counts: BTreeMap<String, usize>,
    pub variable_length: bool,
    pub missing_data: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Admission {
    pub admitted: bool,
    /// Empty when admitted.
    pub reason: String,
}

impl Admission {
    fn reject(reason: &str) -> Self {
        Admission {
            admitted: false,
            reason: reason.to_owned(),
        }
    }
}

/// Applies the exclusion rules: variable length, missing data, a training
/// class with a single exemplar (and, additionally, a single training class).
pub fn admit(pair: &DatasetPair) -> Admission {
    let (train, test) = (&pair.train, &pair.test);
    let lengths_agree = matches!(
        (train.series_len(), test.series_len()),
        (Some(a), Some(b)) if a == b
    );
    if train.variable_length || test.variable_length || !lengths_agree {
        return Admission::reject("variable length");
    }
    if train.missing_data || test.missing_data {
        return Admission::reject("missing data");
    }
    let counts = train.class_counts();
    if counts.values().any(|&c| c < 2) {
        return Admission::reject("single exemplar class");
    }
    if counts.len() < 2 {
        return Admission::reject("single class");
    }
    Admission {
        admitted: true,
        reason: String::new(),
    }
}
