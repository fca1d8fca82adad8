//! Exhaustive warping-path enumeration, independent of the DP kernels.
//!
//! Shared by the core integration tests and the acceptance suite.

#![allow(dead_code)]

#[derive(Clone, Copy, Debug)]
pub enum Measure {
    Sqed,
    Dtw,
    Cdtw(usize),
    Wdtw(f64),
    Adtw(f64),
}

/// Every warping path between series of lengths `n` and `m`, 1-based.
pub fn all_paths(n: usize, m: usize) -> Vec<Vec<(usize, usize)>> {
    fn walk(
        n: usize,
        m: usize,
        path: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        let (i, j) = *path.last().unwrap();
        if (i, j) == (n, m) {
            out.push(path.clone());
            return;
        }
        for (di, dj) in [(1, 1), (1, 0), (0, 1)] {
            let (ni, nj) = (i + di, j + dj);
            if ni <= n && nj <= m {
                path.push((ni, nj));
                walk(n, m, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(n, m, &mut vec![(1, 1)], &mut out);
    out
}

fn sq(a: f64, b: f64) -> f64 {
    (a - b) * (a - b)
}

/// Path-cost functional of a measure; `None` if the path is not admissible.
pub fn functional(m: Measure, s: &[f64], t: &[f64], path: &[(usize, usize)]) -> Option<f64> {
    let len = s.len().max(t.len()) as f64;
    match m {
        Measure::Sqed | Measure::Dtw => {
            Some(path.iter().map(|&(i, j)| sq(s[i - 1], t[j - 1])).sum())
        }
        Measure::Cdtw(w) => {
            if path.iter().any(|&(i, j)| i.abs_diff(j) > w) {
                None
            } else {
                Some(path.iter().map(|&(i, j)| sq(s[i - 1], t[j - 1])).sum())
            }
        }
        Measure::Wdtw(g) => Some(
            path.iter()
                .map(|&(i, j)| {
                    let delta = i.abs_diff(j) as f64;
                    let weight = 1.0 / (1.0 + (-g * (delta - len / 2.0)).exp());
                    sq(s[i - 1], t[j - 1]) * weight
                })
                .sum(),
        ),
        Measure::Adtw(omega) => {
            let mut total = sq(s[path[0].0 - 1], t[path[0].1 - 1]);
            for k in 1..path.len() {
                let (pi, pj) = path[k - 1];
                let (i, j) = path[k];
                total += sq(s[i - 1], t[j - 1]);
                if !(i == pi + 1 && j == pj + 1) {
                    total += omega;
                }
            }
            Some(total)
        }
    }
}

/// Minimum of the functional over all enumerated paths (`+inf` if none is admissible).
pub fn brute_force(m: Measure, s: &[f64], t: &[f64]) -> f64 {
    if let Measure::Sqed = m {
        assert_eq!(s.len(), t.len());
        return s.iter().zip(t).map(|(&a, &b)| sq(a, b)).sum();
    }
    all_paths(s.len(), t.len())
        .iter()
        .filter_map(|p| functional(m, s, t, p))
        .fold(f64::INFINITY, f64::min)
}

/// `|a - b| <= rel * max(|a|, |b|)`, with exact equality for zero and infinity.
pub fn close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
}

/// Two-sided signed-rank p-value by enumerating all `2^n` sign assignments of
/// the nonzero differences, with tied magnitudes sharing their mean rank.
pub fn wilcoxon_enumerated(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a
        .iter()
        .zip(b)
        .map(|(x, y)| x - y)
        .filter(|v| *v != 0.0)
        .collect();
    let n = d.len();
    if n == 0 {
        return 1.0;
    }
    let mag: Vec<f64> = d.iter().map(|v| v.abs()).collect();
    let rank: Vec<f64> = mag
        .iter()
        .map(|m| {
            let below = mag.iter().filter(|o| *o < m).count() as f64;
            let equal = mag.iter().filter(|o| *o == m).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect();
    let plus: f64 = (0..n).filter(|&k| d[k] > 0.0).map(|k| rank[k]).sum();
    let minus: f64 = (0..n).filter(|&k| d[k] < 0.0).map(|k| rank[k]).sum();
    let observed = plus.min(minus);
    let hits = (0u64..1 << n)
        .filter(|mask| {
            let w: f64 = (0..n).filter(|k| mask >> k & 1 == 1).map(|k| rank[k]).sum();
            w <= observed
        })
        .count();
    (2.0 * hits as f64 / (1u64 << n) as f64).min(1.0)
}
