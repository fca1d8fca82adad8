//! Benchmark pipeline (admit, tune, evaluate) and report emission.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::distance::Family;
use crate::error::{Error, Result};
use crate::nn::evaluate;
use crate::stats::{
    best_alternative, holm_adjust, mean_ranks, wilcoxon_signed_rank, win_tie_loss, AccuracyMatrix,
};
use crate::tuning::{tune, TuningConfig, TuningResult};
use crate::ucr::{admit, DatasetMeta, DatasetPair};

/// Significance level used by the report.
pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "lowercase")]
pub enum DatasetStatus {
    Completed,
    Excluded(String),
    Failed(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyOutcome {
    pub family: Family,
    pub tuning: Option<TuningResult<f64>>,
    pub accuracy: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DatasetOutcome {
    pub name: String,
    pub meta: DatasetMeta,
    pub status: DatasetStatus,
    pub families: Vec<FamilyOutcome>,
}

impl DatasetOutcome {
    /// Outcome for a dataset whose files could not be read or parsed.
    pub fn unreadable(name: &str, error: &Error) -> Self {
        DatasetOutcome {
            name: name.to_owned(),
            meta: DatasetMeta {
                name: name.to_owned(),
                ..DatasetMeta::default()
            },
            status: DatasetStatus::Failed(error.to_string()),
            families: Vec::new(),
        }
    }

    /// `Name: SQED=0.8 DTW=0.9`, `Name: excluded: <reason>` or `Name: failed: <error>`.
    pub fn summary_line(&self) -> String {
        match &self.status {
            DatasetStatus::Excluded(reason) => format!("{}: excluded: {reason}", self.name),
            DatasetStatus::Failed(msg) => format!("{}: failed: {msg}", self.name),
            DatasetStatus::Completed => {
                let mut line = format!("{}:", self.name);
                for f in &self.families {
                    match (f.accuracy, &f.error) {
                        (Some(acc), _) => write!(line, " {}={acc}", f.family).unwrap(),
                        (None, Some(e)) => write!(line, " {}=error({e})", f.family).unwrap(),
                        (None, None) => write!(line, " {}=?", f.family).unwrap(),
                    }
                }
                line
            }
        }
    }
}

fn run_family(pair: &DatasetPair, family: Family, cfg: &TuningConfig) -> FamilyOutcome {
    let attempt = || -> Result<(TuningResult<f64>, f64)> {
        let (train, test) = pair.to_datasets::<f64>()?;
        let tuned = tune(family, &train, cfg)?;
        let outcome = evaluate(&train, &test, &tuned.chosen)?;
        Ok((tuned, outcome.accuracy))
    };
    match attempt() {
        Ok((tuning, accuracy)) => FamilyOutcome {
            family,
            tuning: Some(tuning),
            accuracy: Some(accuracy),
            error: None,
        },
        Err(e) => FamilyOutcome {
            family,
            tuning: None,
            accuracy: None,
            error: Some(e.to_string()),
        },
    }
}

/// Admits, tunes and evaluates one dataset for every family.
pub fn run_dataset(pair: &DatasetPair, families: &[Family], cfg: &TuningConfig) -> DatasetOutcome {
    let meta = pair.metadata();
    let admission = admit(pair);
    if !admission.admitted {
        return DatasetOutcome {
            name: pair.name.clone(),
            meta,
            status: DatasetStatus::Excluded(admission.reason),
            families: Vec::new(),
        };
    }
    let outcomes: Vec<FamilyOutcome> = families
        .par_iter()
        .map(|&family| run_family(pair, family, cfg))
        .collect();
    let status = if outcomes.iter().all(|f| f.accuracy.is_none()) {
        DatasetStatus::Failed(
            outcomes
                .iter()
                .find_map(|f| f.error.clone())
                .unwrap_or_else(|| "no family completed".into()),
        )
    } else {
        DatasetStatus::Completed
    };
    DatasetOutcome {
        name: pair.name.clone(),
        meta,
        status,
        families: outcomes,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairwiseTest {
    pub a: String,
    pub b: String,
    pub statistic: f64,
    pub w_plus: f64,
    pub w_minus: f64,
    pub n: usize,
    pub p_value: f64,
    pub p_holm: f64,
    pub wins: usize,
    pub ties: usize,
    pub losses: usize,
    pub degenerate: bool,
}

impl PairwiseTest {
    pub fn significant(&self, alpha: f64) -> bool {
        self.p_holm < alpha
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScatterSeries {
    pub a: String,
    pub b: String,
    /// `(dataset, accuracy of a, accuracy of b)`.
    pub points: Vec<(String, f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub alpha: f64,
    pub datasets_compared: usize,
    pub mean_ranks: Vec<(String, f64)>,
    /// All classifier pairs, Holm-adjusted as one family.
    pub pairwise: Vec<PairwiseTest>,
    /// ADTW against the per-dataset best of the other classifiers.
    pub versus_best: Option<PairwiseTest>,
    pub scatter: Vec<ScatterSeries>,
}

fn pair_test(a: &str, b: &str, xa: &[f64], xb: &[f64]) -> Result<PairwiseTest> {
    let w = wilcoxon_signed_rank(xa, xb)?;
    let (wins, ties, losses) = win_tie_loss(xa, xb);
    Ok(PairwiseTest {
        a: a.to_owned(),
        b: b.to_owned(),
        statistic: w.statistic,
        w_plus: w.w_plus,
        w_minus: w.w_minus,
        n: w.n,
        p_value: w.p_value,
        p_holm: w.p_value,
        wins,
        ties,
        losses,
        degenerate: w.degenerate,
    })
}

/// Pairwise Wilcoxon tests, Holm correction, mean ranks and scatter data.
pub fn build_report(matrix: &AccuracyMatrix, alpha: f64) -> Result<ComparisonReport> {
    let rows = matrix.complete_rows();
    let names = &matrix.classifiers;
    let columns: Vec<Vec<f64>> = (0..names.len()).map(|k| matrix.column(k)).collect();
    let mut pairwise = Vec::new();
    let mut scatter = Vec::new();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            if !rows.is_empty() {
                pairwise.push(pair_test(&names[i], &names[j], &columns[i], &columns[j])?);
            }
            scatter.push(ScatterSeries {
                a: names[i].clone(),
                b: names[j].clone(),
                points: rows
                    .iter()
                    .map(|(r, row)| (matrix.datasets[*r].clone(), row[i], row[j]))
                    .collect(),
            });
        }
    }
    let raw: Vec<f64> = pairwise.iter().map(|t| t.p_value).collect();
    for (t, p) in pairwise.iter_mut().zip(holm_adjust(&raw)) {
        t.p_holm = p;
    }
    let adtw = Family::Adtw.to_string();
    let versus_best = match matrix.column_index(&adtw) {
        Some(k) if names.len() >= 2 && !rows.is_empty() => {
            let best = best_alternative(matrix, &adtw)?;
            Some(pair_test(&adtw, "BEST", &columns[k], &best)?)
        }
        _ => None,
    };
    Ok(ComparisonReport {
        alpha,
        datasets_compared: rows.len(),
        mean_ranks: mean_ranks(matrix),
        pairwise,
        versus_best,
        scatter,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchmarkOutput {
    pub datasets: Vec<DatasetOutcome>,
    pub matrix: AccuracyMatrix,
    pub report: ComparisonReport,
}

impl BenchmarkOutput {
    pub fn completed(&self) -> usize {
        self.datasets
            .iter()
            .filter(|d| d.status == DatasetStatus::Completed)
            .count()
    }
}

/// Runs the full pipeline over `pairs`, calling `progress` after each dataset.
///
/// Datasets are processed in order; families within a dataset run in
/// parallel and are assembled in the order given, so the output depends only
/// on the inputs and `cfg`.
pub fn run_benchmark_with(
    pairs: &[DatasetPair],
    families: &[Family],
    cfg: &TuningConfig,
    mut progress: impl FnMut(&DatasetOutcome),
) -> Result<BenchmarkOutput> {
    cfg.validate()?;
    if families.is_empty() {
        return Err(Error::InvalidParameter("no families selected".into()));
    }
    let mut matrix = AccuracyMatrix::new(families.iter().map(|f| f.to_string()).collect());
    let mut datasets = Vec::with_capacity(pairs.len());
    for pair in pairs {
        let outcome = run_dataset(pair, families, cfg);
        progress(&outcome);
        if outcome.status == DatasetStatus::Completed {
            matrix.push_row(
                outcome.name.clone(),
                outcome.families.iter().map(|f| f.accuracy).collect(),
            );
        }
        datasets.push(outcome);
    }
    let report = build_report(&matrix, DEFAULT_ALPHA)?;
    Ok(BenchmarkOutput {
        datasets,
        matrix,
        report,
    })
}

pub fn run_benchmark(
    pairs: &[DatasetPair],
    families: &[Family],
    cfg: &TuningConfig,
) -> Result<BenchmarkOutput> {
    run_benchmark_with(pairs, families, cfg, |_| {})
}

// ---------------------------------------------------------------------------
// report files
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct DatasetRecord<'a> {
    #[serde(flatten)]
    meta: &'a DatasetMeta,
    #[serde(flatten)]
    status: &'a DatasetStatus,
    results: Vec<FamilyRecord>,
}

#[derive(Serialize)]
struct FamilyRecord {
    family: Family,
    accuracy: Option<f64>,
    chosen_param: Option<f64>,
    loocv_accuracy: Option<f64>,
    omega_prime: Option<f64>,
    error: Option<String>,
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn pairwise_csv(tests: &[PairwiseTest], alpha: f64) -> String {
    let mut out = format!("# alpha={alpha}\n");
    out.push_str(
        "a,b,statistic,w_plus,w_minus,n,p_value,p_holm,wins,ties,losses,significant,degenerate\n",
    );
    for t in tests {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            t.a,
            t.b,
            t.statistic,
            t.w_plus,
            t.w_minus,
            t.n,
            t.p_value,
            t.p_holm,
            t.wins,
            t.ties,
            t.losses,
            t.significant(alpha),
            t.degenerate
        )
        .unwrap();
    }
    out
}

pub fn mean_ranks_csv(ranks: &[(String, f64)]) -> String {
    let mut out = String::from("classifier,mean_rank\n");
    for (c, r) in ranks {
        writeln!(out, "{c},{r}").unwrap();
    }
    out
}

pub fn scatter_csv(series: &ScatterSeries) -> String {
    let mut out = format!("dataset,{},{}\n", series.a, series.b);
    for (d, x, y) in &series.points {
        writeln!(out, "{d},{x},{y}").unwrap();
    }
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Accuracy scatter: `b` on the x axis, `a` on the y axis, with the diagonal.
pub fn scatter_svg(series: &ScatterSeries) -> String {
    const SIZE: f64 = 400.0;
    const PAD: f64 = 40.0;
    let span = SIZE - 2.0 * PAD;
    let x = |v: f64| PAD + v * span;
    let y = |v: f64| SIZE - PAD - v * span;
    let a: Vec<f64> = series.points.iter().map(|p| p.1).collect();
    let b: Vec<f64> = series.points.iter().map(|p| p.2).collect();
    let (wins, ties, losses) = win_tie_loss(&a, &b);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<rect x="{PAD}" y="{PAD}" width="{span}" height="{span}" fill="none" stroke="black"/>"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="gray" stroke-dasharray="4,4"/>"#,
        x(0.0),
        y(0.0),
        x(1.0),
        y(1.0)
    )
    .unwrap();
    for (name, va, vb) in &series.points {
        writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"><title>{}</title></circle>"#,
            x(*vb),
            y(*va),
            xml_escape(name)
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{}</text>"#,
        SIZE / 2.0,
        SIZE - 10.0,
        xml_escape(&series.b)
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="12" y="{}" text-anchor="middle" font-size="12" transform="rotate(-90 12 {})">{}</text>"#,
        SIZE / 2.0,
        SIZE / 2.0,
        xml_escape(&series.a)
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="11">{} wins: {wins}  ties: {ties}  {} wins: {losses}</text>"#,
        PAD,
        PAD - 10.0,
        xml_escape(&series.a),
        xml_escape(&series.b)
    )
    .unwrap();
    out.push_str("</svg>\n");
    out
}

/// Mean-rank diagram; classifiers joined by a bar are not significantly
/// different after Holm correction.
pub fn mean_rank_svg(report: &ComparisonReport) -> String {
    let mut ranked = report.mean_ranks.clone();
    ranked.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    let c = ranked.len().max(2) as f64;
    let (width, left, right) = (600.0, 60.0, 540.0);
    let x = |r: f64| left + (r - 1.0) / (c - 1.0) * (right - left);
    let height = 120.0 + 20.0 * ranked.len() as f64;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<line x1="{left}" y1="40" x2="{right}" y2="40" stroke="black"/>"#
    )
    .unwrap();
    for k in 1..=(c as usize) {
        let xk = x(k as f64);
        writeln!(
            out,
            r#"<line x1="{xk}" y1="35" x2="{xk}" y2="45" stroke="black"/>"#
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{xk}" y="28" text-anchor="middle" font-size="12">{k}</text>"#
        )
        .unwrap();
    }
    for (idx, (name, rank)) in ranked.iter().enumerate() {
        let xr = x(*rank);
        let ylab = 80.0 + 20.0 * idx as f64;
        writeln!(
            out,
            r#"<line x1="{xr:.2}" y1="40" x2="{xr:.2}" y2="{ylab}" stroke="black"/>"#
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{:.2}" y="{ylab}" font-size="12">{} ({rank:.3})</text>"#,
            xr + 4.0,
            xml_escape(name)
        )
        .unwrap();
    }
    // bars over maximal runs of mutually non-significant classifiers
    let not_significant = |a: &str, b: &str| {
        report
            .pairwise
            .iter()
            .find(|t| (t.a == a && t.b == b) || (t.a == b && t.b == a))
            .is_some_and(|t| !t.significant(report.alpha))
    };
    let mut bar_y = 52.0;
    let mut last_end = 0;
    for i in 0..ranked.len() {
        let mut end = i;
        while end + 1 < ranked.len()
            && (i..=end).all(|k| not_significant(&ranked[k].0, &ranked[end + 1].0))
        {
            end += 1;
        }
        if end > i && end > last_end {
            writeln!(
                out,
                r#"<line x1="{:.2}" y1="{bar_y}" x2="{:.2}" y2="{bar_y}" stroke="black" stroke-width="4"/>"#,
                x(ranked[i].1) - 3.0,
                x(ranked[end].1) + 3.0
            )
            .unwrap();
            bar_y += 6.0;
            last_end = end;
        }
    }
    out.push_str("</svg>\n");
    out
}

/// Writes the report bundle into `dir` and returns the files written.
///
/// Layout: `accuracy_matrix.csv`, `pairwise_tests.csv`, `versus_best.csv`,
/// `mean_ranks.csv`, `mean_ranks.svg`, `datasets.json`, `summary.txt`,
/// `scatter/<A>_vs_<B>.{csv,svg}` and `tuning/<dataset>_<family>.csv`.
pub fn write_report(dir: &Path, output: &BenchmarkOutput) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    let mut put = |path: PathBuf, contents: String| -> Result<()> {
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        write_file(&path, &contents)?;
        written.push(path);
        Ok(())
    };
    let report = &output.report;

    put(dir.join("accuracy_matrix.csv"), output.matrix.to_csv())?;
    put(
        dir.join("pairwise_tests.csv"),
        pairwise_csv(&report.pairwise, report.alpha),
    )?;
    put(
        dir.join("versus_best.csv"),
        pairwise_csv(report.versus_best.as_slice(), report.alpha),
    )?;
    put(
        dir.join("mean_ranks.csv"),
        mean_ranks_csv(&report.mean_ranks),
    )?;
    put(dir.join("mean_ranks.svg"), mean_rank_svg(report))?;
    for s in &report.scatter {
        let stem = format!("{}_vs_{}", s.a, s.b);
        put(
            dir.join("scatter").join(format!("{stem}.csv")),
            scatter_csv(s),
        )?;
        put(
            dir.join("scatter").join(format!("{stem}.svg")),
            scatter_svg(s),
        )?;
    }
    for d in &output.datasets {
        for f in &d.families {
            if let Some(t) = &f.tuning {
                put(
                    dir.join("tuning")
                        .join(format!("{}_{}.csv", d.name, f.family.id())),
                    t.to_csv(),
                )?;
            }
        }
    }
    let records: Vec<DatasetRecord> = output
        .datasets
        .iter()
        .map(|d| DatasetRecord {
            meta: &d.meta,
            status: &d.status,
            results: d
                .families
                .iter()
                .map(|f| FamilyRecord {
                    family: f.family,
                    accuracy: f.accuracy,
                    chosen_param: f.tuning.as_ref().and_then(|t| t.chosen.param()),
                    loocv_accuracy: f.tuning.as_ref().map(TuningResult::best_accuracy),
                    omega_prime: f.tuning.as_ref().and_then(|t| t.omega_prime),
                    error: f.error.clone(),
                })
                .collect(),
        })
        .collect();
    put(
        dir.join("datasets.json"),
        serde_json::to_string_pretty(&records)? + "\n",
    )?;
    let mut summary = String::new();
    for d in &output.datasets {
        summary.push_str(&d.summary_line());
        summary.push('\n');
    }
    put(dir.join("summary.txt"), summary)?;
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix() -> AccuracyMatrix {
        AccuracyMatrix::from_rows(
            (0..6).map(|i| format!("d{i}")).collect(),
            vec!["SQED".into(), "DTW".into(), "ADTW".into()],
            vec![
                vec![0.5, 0.6, 0.7],
                vec![0.4, 0.45, 0.5],
                vec![0.8, 0.7, 0.9],
                vec![0.6, 0.6, 0.65],
                vec![0.3, 0.5, 0.55],
                vec![0.9, 0.95, 0.95],
            ],
        )
    }

    #[test]
    fn report_covers_all_pairs() {
        let r = build_report(&matrix(), DEFAULT_ALPHA).unwrap();
        assert_eq!(r.pairwise.len(), 3);
        assert_eq!(r.scatter.len(), 3);
        assert!(r
            .pairwise
            .iter()
            .all(|t| t.p_holm >= t.p_value && t.p_holm <= 1.0));
        let best = r.versus_best.unwrap();
        assert_eq!((best.a.as_str(), best.b.as_str()), ("ADTW", "BEST"));
        assert_eq!((best.wins, best.ties, best.losses), (5, 1, 0));
        let sum: f64 = r.mean_ranks.iter().map(|(_, v)| v).sum();
        assert!((sum - 6.0).abs() < 1e-12);
    }

    #[test]
    fn svg_outputs_are_well_formed() {
        let r = build_report(&matrix(), DEFAULT_ALPHA).unwrap();
        let svg = mean_rank_svg(&r);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        let sc = scatter_svg(&r.scatter[0]);
        assert_eq!(sc.matches("<circle").count(), 6);
    }

    #[test]
    fn empty_matrix_gives_empty_tests() {
        let m = AccuracyMatrix::new(vec!["SQED".into(), "DTW".into()]);
        let r = build_report(&m, DEFAULT_ALPHA).unwrap();
        assert!(r.pairwise.is_empty());
        assert!(r.versus_best.is_none());
        assert_eq!(r.datasets_compared, 0);
    }
}
