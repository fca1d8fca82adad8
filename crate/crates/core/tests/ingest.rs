use std::fs;
use std::path::Path;

use elastic_dtw::ucr::{dataset_to_ucr, parse_split, RawRecord};
use elastic_dtw::{admit, load_split, DatasetPair, Error, RawSplit, Split};
use proptest::prelude::*;

fn record() -> impl Strategy<Value = (u8, Vec<f64>)> {
    (
        0u8..4,
        prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::ZERO, 5),
    )
}

proptest! {
    #[test]
    fn ucr_text_round_trips_bit_exactly(rows in prop::collection::vec(record(), 1..12)) {
        let records: Vec<RawRecord> = rows
            .iter()
            .map(|(l, v)| RawRecord { label: l.to_string(), values: v.clone() })
            .collect();
        let split = RawSplit::new("P", Split::Train, records);
        let text = split.to_ucr();
        let back = parse_split(&text, "P", Split::Train, Path::new("P_TRAIN.tsv")).unwrap();
        prop_assert_eq!(back.records.len(), split.records.len());
        for (a, b) in back.records.iter().zip(&split.records) {
            prop_assert_eq!(&a.label, &b.label);
            let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
            prop_assert_eq!(bits(&a.values), bits(&b.values));
        }
        let ds = back.to_dataset::<f64>().unwrap();
        prop_assert_eq!(dataset_to_ucr(&ds), text);
    }
}

fn write(dir: &Path, name: &str, train: &str, test: &str) {
    let d = dir.join(name);
    fs::create_dir_all(&d).unwrap();
    fs::write(d.join(format!("{name}_TRAIN.tsv")), train).unwrap();
    fs::write(d.join(format!("{name}_TEST.tsv")), test).unwrap();
}

#[test]
fn archive_layout_loads_and_admits() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "Good",
        "1\t0\t1\n1\t0\t2\n2\t5\t5\n2\t6\t5\n",
        "1\t0\t1\n2\t5\t6\n",
    );
    write(
        dir.path(),
        "Ragged",
        "1\t0\t1\t2\n1\t0\t1\n2\t5\t5\n2\t6\t5\n",
        "1\t0\t1\n2\t5\t6\n",
    );
    write(
        dir.path(),
        "Holes",
        "1\t0\tNaN\t1\n1\t0\t1\t1\n2\t5\t5\t5\n2\t6\t5\t5\n",
        "1\t0\t1\t1\n",
    );
    write(
        dir.path(),
        "Alone",
        "1\t0\t1\n1\t0\t2\n2\t5\t5\n",
        "1\t0\t1\n",
    );

    let verdict = |name: &str| admit(&DatasetPair::load(dir.path(), name).unwrap()).reason;
    assert_eq!(verdict("Good"), "");
    assert_eq!(verdict("Ragged"), "variable length");
    assert_eq!(verdict("Holes"), "missing data");
    assert_eq!(verdict("Alone"), "single exemplar class");

    let good = DatasetPair::load(dir.path(), "Good").unwrap();
    let (train, test) = good.to_datasets::<f64>().unwrap();
    assert_eq!(
        (train.len(), test.len(), train.series_len()),
        (4, 2, Some(2))
    );
    let meta = good.metadata();
    assert_eq!(meta.classes, 2);
    assert_eq!(meta.length, Some(2));
}

#[test]
fn comma_and_whitespace_files_parse() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("X_TRAIN.txt");
    fs::write(&csv, "1,0.5,1e-3\n2,-2,3\n").unwrap();
    let ws = dir.path().join("X_TEST.txt");
    fs::write(&ws, "  1   0.5   1e-3\n\n 2  -2  3 \n").unwrap();
    let a = load_split(&csv).unwrap();
    let b = load_split(&ws).unwrap();
    assert_eq!(a.records, b.records);
    assert_eq!(a.split, Split::Train);
    assert_eq!(b.split, Split::Test);
    assert_eq!(a.name, "X");
}

#[test]
fn malformed_input_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("B_TRAIN.tsv");
    fs::write(&bad, "1\t0\t1\n1\t0\tabc\n").unwrap();
    match load_split(&bad) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("unexpected {other:?}"),
    }
    let empty = dir.path().join("E_TRAIN.tsv");
    fs::write(&empty, "\n\n").unwrap();
    assert!(matches!(load_split(&empty), Err(Error::EmptyFile(_))));
    let missing = load_split(dir.path().join("none.tsv")).unwrap_err();
    assert!(!missing.is_data_error());
}
