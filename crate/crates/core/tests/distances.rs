mod support;

use elastic_dtw::{
    cost_matrix, distance, distance_ea, naive_distance, path_cost, warping_path, DistanceSpec,
    Series,
};
use proptest::prelude::*;
use support::oracle::{all_paths, brute_force, close, Measure};

fn series(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-2.0..2.0f64, 1..=max_len)
}

fn ts(v: &[f64]) -> Series {
    Series::new(v.to_vec()).unwrap()
}

/// A random measure valid for the given lengths, paired with its oracle twin.
fn spec_for(len_s: usize, len_t: usize) -> impl Strategy<Value = (DistanceSpec<f64>, Measure)> {
    let diff = len_s.abs_diff(len_t);
    let max = len_s.max(len_t);
    let mut options: Vec<BoxedStrategy<(DistanceSpec<f64>, Measure)>> = vec![
        Just((DistanceSpec::Dtw, Measure::Dtw)).boxed(),
        (diff..=max)
            .prop_map(|w| (DistanceSpec::Cdtw { window: w }, Measure::Cdtw(w)))
            .boxed(),
        (0.01..=1.0f64)
            .prop_map(|g| (DistanceSpec::Wdtw { g }, Measure::Wdtw(g)))
            .boxed(),
        (0.0..=10.0f64)
            .prop_map(|w| (DistanceSpec::Adtw { penalty: w }, Measure::Adtw(w)))
            .boxed(),
    ];
    if diff == 0 {
        options.push(Just((DistanceSpec::Sqed, Measure::Sqed)).boxed());
    }
    prop::strategy::Union::new(options)
}

fn pair_and_spec() -> impl Strategy<Value = (Vec<f64>, Vec<f64>, DistanceSpec<f64>, Measure)> {
    (series(7), series(7)).prop_flat_map(|(s, t)| {
        let (ls, lt) = (s.len(), t.len());
        (Just(s), Just(t), spec_for(ls, lt)).prop_map(|(s, t, (spec, m))| (s, t, spec, m))
    })
}

fn equal_pair(max_len: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1..=max_len).prop_flat_map(|n| {
        (
            prop::collection::vec(-2.0..2.0f64, n),
            prop::collection::vec(-2.0..2.0f64, n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn kernels_match_path_enumeration((s, t, spec, m) in pair_and_spec()) {
        let expect = brute_force(m, &s, &t);
        let got = distance(&spec, &ts(&s), &ts(&t)).unwrap();
        prop_assert!(close(got, expect, 1e-9), "{spec}: {got} vs {expect}");
    }

    #[test]
    fn backtracked_path_reproduces_distance((s, t, spec, m) in pair_and_spec()) {
        let (s, t) = (ts(&s), ts(&t));
        let (path, d) = warping_path(&spec, &s, &t).unwrap();
        prop_assert!(path.is_valid_for(s.len(), t.len()));
        prop_assert_eq!(path_cost(&spec, &s, &t, &path).unwrap(), d);
        prop_assert_eq!(d, distance(&spec, &s, &t).unwrap());
        let via_oracle = support::oracle::functional(m, &s, &t, &path.steps).unwrap();
        prop_assert!(close(via_oracle, brute_force(m, &s, &t), 1e-9));
    }

    #[test]
    fn two_row_kernel_is_bit_identical_to_full_matrix((s, t, spec, _m) in pair_and_spec()) {
        let (s, t) = (ts(&s), ts(&t));
        prop_assert_eq!(
            distance(&spec, &s, &t).unwrap().to_bits(),
            naive_distance(&spec, &s, &t).unwrap().to_bits()
        );
    }

    #[test]
    fn early_abandon_is_exact_below_cutoff(
        (s, t, spec, _m) in pair_and_spec(),
        frac in 0.0..1.5f64,
    ) {
        let (s, t) = (ts(&s), ts(&t));
        let naive = naive_distance(&spec, &s, &t).unwrap();
        for cutoff in [naive * frac, naive, frac, 0.0] {
            let got = distance_ea(&spec, &s, &t, cutoff).unwrap();
            if naive <= cutoff {
                prop_assert_eq!(got, naive);
            } else {
                prop_assert!(got > cutoff);
            }
        }
    }

    #[test]
    fn argument_symmetry((s, t, spec, _m) in pair_and_spec()) {
        let (s, t) = (ts(&s), ts(&t));
        prop_assert_eq!(distance(&spec, &s, &t).unwrap(), distance(&spec, &t, &s).unwrap());
    }

    #[test]
    fn adtw_reversal_symmetry(s in series(12), t in series(12), omega in 0.0..5.0f64) {
        let (s, t) = (ts(&s), ts(&t));
        for spec in [DistanceSpec::Adtw { penalty: omega }, DistanceSpec::Dtw] {
            let fwd = distance(&spec, &s, &t).unwrap();
            let bwd = distance(&spec, &s.reverse(), &t.reverse()).unwrap();
            prop_assert!(close(fwd, bwd, 1e-12), "{spec}: {fwd} vs {bwd}");
        }
    }

    #[test]
    fn adtw_is_monotone_and_bounded((s, t) in equal_pair(20), ladder in prop::collection::vec(0.0..20.0f64, 10)) {
        let (s, t) = (ts(&s), ts(&t));
        let mut ladder = ladder;
        ladder.sort_by(f64::total_cmp);
        let dtw = distance(&DistanceSpec::Dtw, &s, &t).unwrap();
        let sqed = distance(&DistanceSpec::Sqed, &s, &t).unwrap();
        let mut last = dtw;
        for omega in ladder {
            let d = distance(&DistanceSpec::Adtw { penalty: omega }, &s, &t).unwrap();
            prop_assert!(last <= d && d <= sqed);
            last = d;
        }
        prop_assert_eq!(distance(&DistanceSpec::Adtw { penalty: 0.0 }, &s, &t).unwrap(), dtw);
        prop_assert_eq!(distance(&DistanceSpec::Adtw { penalty: sqed + 1.0 }, &s, &t).unwrap(), sqed);
    }

    #[test]
    fn cdtw_windows_nest((s, t) in equal_pair(15)) {
        let (s, t) = (ts(&s), ts(&t));
        let n = s.len();
        let values: Vec<f64> = (0..n).map(|w| distance(&DistanceSpec::Cdtw { window: w }, &s, &t).unwrap()).collect();
        prop_assert!(values.windows(2).all(|p| p[0] >= p[1]));
        prop_assert_eq!(values[0], distance(&DistanceSpec::Sqed, &s, &t).unwrap());
        prop_assert_eq!(values[n - 1], distance(&DistanceSpec::Dtw, &s, &t).unwrap());
    }

    #[test]
    fn self_distance_is_zero(s in series(15), g in 0.01..1.0f64, omega in 0.0..10.0f64, w in 0usize..4) {
        let s = ts(&s);
        for spec in [
            DistanceSpec::Sqed,
            DistanceSpec::Dtw,
            DistanceSpec::Cdtw { window: w },
            DistanceSpec::Wdtw { g },
            DistanceSpec::Adtw { penalty: omega },
        ] {
            prop_assert_eq!(distance(&spec, &s, &s).unwrap(), 0.0);
        }
    }

    #[test]
    fn matrix_cells_are_nonnegative((s, t, spec, _m) in pair_and_spec()) {
        let m = cost_matrix(&spec, &ts(&s), &ts(&t)).unwrap();
        prop_assert_eq!(m.get(0, 0), 0.0);
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let v = m.get(i, j);
                prop_assert!(v >= 0.0);
                if (i == 0) != (j == 0) {
                    prop_assert_eq!(v, f64::INFINITY);
                }
            }
        }
    }
}

#[test]
fn single_precision_matches_oracle_on_small_integers() {
    // small integer values are exact in f32, so the f32 kernel must agree exactly
    let s = [1.0, 0.0, 2.0, 2.0, -1.0];
    let t = [0.0, 2.0, 1.0, -1.0];
    let s32 = elastic_dtw::Series32::from_f64(&s).unwrap();
    let t32 = elastic_dtw::Series32::from_f64(&t).unwrap();
    for (spec, m) in [
        (DistanceSpec::Dtw, Measure::Dtw),
        (DistanceSpec::Cdtw { window: 1 }, Measure::Cdtw(1)),
        (DistanceSpec::Adtw { penalty: 2.0 }, Measure::Adtw(2.0)),
    ] {
        let got = distance(&spec, &s32, &t32).unwrap();
        assert_eq!(got as f64, brute_force(m, &s, &t));
    }
}

#[test]
fn oracle_path_counts_are_delannoy_numbers() {
    assert_eq!(all_paths(1, 1).len(), 1);
    assert_eq!(all_paths(2, 2).len(), 3);
    assert_eq!(all_paths(3, 3).len(), 13);
    assert_eq!(all_paths(4, 4).len(), 63);
    assert_eq!(all_paths(3, 2).len(), 5);
}
