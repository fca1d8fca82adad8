//! `elastic-dtw`: distances, alignment inspection, tuning, classification and
//! benchmark reports from the command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 runtime failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use elastic_dtw::bench::DEFAULT_ALPHA;
use elastic_dtw::distance::path_to_csv;
use elastic_dtw::synthetic;
use elastic_dtw::ucr::split_path;
use elastic_dtw::{
    cost_matrix, distance_ea, evaluate, path_cost, run_benchmark_with, tune, warping_path,
    write_report, Dataset, DatasetOutcome, DatasetPair, DistanceSpec, Family, Series, Split,
    TuningConfig,
};

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error(transparent)]
    Lib(#[from] elastic_dtw::Error),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Lib(e) if e.is_data_error() => 2,
            CliError::Lib(_) | CliError::Runtime(_) => 3,
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "elastic-dtw",
    version,
    about = "Elastic time series distances and NN1 benchmarking"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Distance between two series.
    Dist(DistArgs),
    /// Cost matrix and optimal warping path between two series.
    Path(PathArgs),
    /// Select a family's parameter by leave-one-out NN1 on a training split.
    Tune(TuneArgs),
    /// NN1 classification of a test split.
    Classify(ClassifyArgs),
    /// Full benchmark over a UCR-format archive.
    Bench(BenchArgs),
    /// Write the synthetic stand-in datasets in UCR format.
    Synth(SynthArgs),
}

#[derive(Args, Debug)]
struct MeasureArgs {
    /// sqed, dtw, cdtw, wdtw or adtw.
    #[arg(long)]
    measure: Family,
    /// Window, weight factor or penalty; `auto` tunes it on `--train`.
    #[arg(long, allow_hyphen_values = true)]
    param: Option<String>,
    /// Training split used by `--param auto`.
    #[arg(long)]
    train: Option<PathBuf>,
    #[command(flatten)]
    tuning: TuningArgs,
}

#[derive(Args, Debug)]
struct TuningArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exponent of the ADTW penalty ladder.
    #[arg(long, default_value_t = 5.0)]
    exponent: f64,
    /// Pairs sampled to estimate the ADTW penalty scale.
    #[arg(long, default_value_t = elastic_dtw::tuning::DEFAULT_PAIR_SAMPLES)]
    pairs: usize,
    /// Grid resolution of every parameter search.
    #[arg(long, default_value_t = 100)]
    grid_steps: usize,
}

impl TuningArgs {
    fn config(&self) -> CliResult<TuningConfig> {
        let cfg = TuningConfig {
            exponent: self.exponent,
            grid_steps: self.grid_steps,
            pair_samples: self.pairs,
            seed: self.seed,
        };
        cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Args, Debug)]
struct PairArgs {
    /// First series: comma-separated values or `@file`.
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    /// Second series: comma-separated values or `@file`.
    #[arg(long, allow_hyphen_values = true)]
    b: String,
}

#[derive(Args, Debug)]
struct DistArgs {
    #[command(flatten)]
    measure: MeasureArgs,
    #[command(flatten)]
    pair: PairArgs,
    /// Abandon once the distance provably exceeds this value.
    #[arg(long)]
    cutoff: Option<f64>,
}

#[derive(Args, Debug)]
struct PathArgs {
    #[command(flatten)]
    measure: MeasureArgs,
    #[command(flatten)]
    pair: PairArgs,
    /// Cost matrix CSV destination.
    #[arg(long)]
    matrix_out: Option<PathBuf>,
    /// Warping path CSV destination.
    #[arg(long)]
    path_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TuneArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    train: PathBuf,
    #[command(flatten)]
    tuning: TuningArgs,
    /// Candidate-score CSV destination; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    #[command(flatten)]
    measure: MeasureArgs,
    #[arg(long)]
    test: PathBuf,
    /// Prediction CSV destination; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Archive root holding `<Name>/<Name>_TRAIN.tsv` and `_TEST.tsv`.
    #[arg(long, env = "ELASTIC_DTW_DATA")]
    data_root: PathBuf,
    /// Comma-separated dataset names, or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    datasets: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "sqed,dtw,cdtw,wdtw,adtw")]
    families: Vec<Family>,
    #[arg(long)]
    out_dir: PathBuf,
    #[command(flatten)]
    tuning: TuningArgs,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Args, Debug)]
struct SynthArgs {
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value_t = synthetic::DEFAULT_SEED)]
    seed: u64,
}

fn parse_values(text: &str, origin: &str) -> CliResult<Series> {
    let values = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|tok| !tok.is_empty())
        .map(|tok| {
            tok.parse::<f64>()
                .map_err(|_| CliError::Data(format!("{origin}: cannot parse `{tok}` as a number")))
        })
        .collect::<CliResult<Vec<f64>>>()?;
    Series::new(values).map_err(|e| CliError::Data(format!("{origin}: {e}")))
}

fn read_series(arg: &str) -> CliResult<Series> {
    match arg.strip_prefix('@') {
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| CliError::Runtime(format!("{path}: {e}")))?;
            parse_values(&text, path)
        }
        None => parse_values(arg, "inline series"),
    }
}

fn load_train(path: &Path) -> CliResult<Dataset> {
    Ok(elastic_dtw::load_split(path)?.to_dataset()?)
}

fn write_output(path: &Path, contents: &str) -> CliResult {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)
            .map_err(|e| CliError::Runtime(format!("{}: {e}", parent.display())))?;
    }
    fs::write(path, contents).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

enum ParamChoice {
    Fixed(Option<f64>),
    Auto,
}

impl MeasureArgs {
    /// Checks flag combinations without touching any input.
    fn choice(&self) -> CliResult<ParamChoice> {
        let family = self.measure;
        match self.param.as_deref() {
            None if family.is_parameterized() => Err(CliError::Usage(format!(
                "--measure {} requires --param",
                family.id()
            ))),
            None => Ok(ParamChoice::Fixed(None)),
            Some(_) if !family.is_parameterized() => Err(CliError::Usage(format!(
                "--measure {} takes no --param",
                family.id()
            ))),
            Some("auto") if self.train.is_none() => {
                Err(CliError::Usage("--param auto requires --train".into()))
            }
            Some("auto") => Ok(ParamChoice::Auto),
            Some(text) => {
                let value = text
                    .parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("invalid --param `{text}`")))?;
                DistanceSpec::<f64>::from_family(family, Some(value))
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                Ok(ParamChoice::Fixed(Some(value)))
            }
        }
    }

    fn resolve(&self, choice: ParamChoice) -> CliResult<DistanceSpec<f64>> {
        match choice {
            ParamChoice::Fixed(value) => Ok(DistanceSpec::from_family(self.measure, value)?),
            ParamChoice::Auto => {
                let cfg = self.tuning.config()?;
                let train = load_train(self.train.as_deref().expect("checked"))?;
                let tuned = tune(self.measure, &train, &cfg)?;
                eprintln!("tuned {}", tuned.chosen);
                Ok(tuned.chosen)
            }
        }
    }
}

fn cmd_dist(args: DistArgs) -> CliResult {
    let choice = args.measure.choice()?;
    if let Some(c) = args.cutoff {
        if c.is_nan() || c < 0.0 {
            return Err(CliError::Usage(format!(
                "--cutoff must be nonnegative, got {c}"
            )));
        }
    }
    args.measure.tuning.config()?;
    let (s, t) = (read_series(&args.pair.a)?, read_series(&args.pair.b)?);
    let spec = args.measure.resolve(choice)?;
    let cutoff = args.cutoff.unwrap_or(f64::INFINITY);
    let d = distance_ea(&spec, &s, &t, cutoff)?;
    if d > cutoff {
        println!("pruned");
    } else {
        println!("{d}");
    }
    Ok(())
}

fn cmd_path(args: PathArgs) -> CliResult {
    let choice = args.measure.choice()?;
    args.measure.tuning.config()?;
    let (s, t) = (read_series(&args.pair.a)?, read_series(&args.pair.b)?);
    let spec = args.measure.resolve(choice)?;
    let matrix = cost_matrix(&spec, &s, &t)?;
    let (path, d) = warping_path(&spec, &s, &t)?;
    let recomputed = path_cost(&spec, &s, &t, &path)?;
    if recomputed != d {
        return Err(CliError::Runtime(format!(
            "path cost {recomputed} disagrees with distance {d}"
        )));
    }
    if let Some(out) = &args.matrix_out {
        write_output(out, &matrix.to_csv())?;
    }
    if let Some(out) = &args.path_out {
        write_output(out, &path_to_csv(&path))?;
    }
    println!("{d}");
    eprintln!("{} steps, {} warping", path.len(), path.warping_steps());
    Ok(())
}

fn cmd_tune(args: TuneArgs) -> CliResult {
    let cfg = args.tuning.config()?;
    let train = load_train(&args.train)?;
    let result = tune(args.family, &train, &cfg)?;
    let csv = result.to_csv();
    let chosen = result
        .chosen
        .param()
        .map_or_else(|| result.chosen.to_string(), |p| p.to_string());
    match &args.out {
        Some(out) => {
            write_output(out, &csv)?;
            println!("{chosen}");
        }
        None => {
            print!("{csv}");
            eprintln!("chosen {chosen}");
        }
    }
    Ok(())
}

fn cmd_classify(args: ClassifyArgs) -> CliResult {
    let choice = args.measure.choice()?;
    args.measure.tuning.config()?;
    let test = elastic_dtw::load_split(&args.test)?.to_dataset::<f64>()?;
    let train_path = args
        .measure
        .train
        .as_deref()
        .ok_or_else(|| CliError::Usage("classify requires --train".into()))?;
    let train = load_train(train_path)?;
    let spec = args.measure.resolve(choice)?;
    let outcome = evaluate(&train, &test, &spec)?;
    match &args.out {
        Some(out) => {
            write_output(out, &outcome.to_csv())?;
            println!("{}", outcome.accuracy);
        }
        None => {
            print!("{}", outcome.to_csv());
            eprintln!("accuracy {}", outcome.accuracy);
        }
    }
    Ok(())
}

/// Every subdirectory of `root` that holds a training split, sorted by name.
fn discover(root: &Path) -> CliResult<Vec<String>> {
    let entries =
        fs::read_dir(root).map_err(|e| CliError::Data(format!("{}: {e}", root.display())))?;
    let mut names: Vec<String> = entries
        .filter_map(|e| e.ok())
        .filter(|e| e.path().is_dir())
        .filter_map(|e| e.file_name().to_str().map(str::to_owned))
        .filter(|name| split_path(root, name, Split::Train).exists())
        .collect();
    names.sort();
    Ok(names)
}

fn cmd_bench(args: BenchArgs) -> CliResult {
    let cfg = args.tuning.config()?;
    if args.families.is_empty() {
        return Err(CliError::Usage("--families is empty".into()));
    }
    if args.jobs == Some(0) {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    let names = if args.datasets.iter().any(|d| d == "all") {
        discover(&args.data_root)?
    } else {
        args.datasets.clone()
    };
    if names.is_empty() {
        return Err(CliError::Data(format!(
            "no datasets under {}",
            args.data_root.display()
        )));
    }
    let mut families = args.families.clone();
    families.dedup();

    let mut pairs = Vec::new();
    let mut unreadable = Vec::new();
    for (k, name) in names.iter().enumerate() {
        match DatasetPair::load(&args.data_root, name) {
            Ok(pair) => pairs.push((k, pair)),
            Err(e) => {
                let outcome = DatasetOutcome::unreadable(name, &e);
                eprintln!("{}", outcome.summary_line());
                unreadable.push((k, outcome));
            }
        }
    }
    let order: Vec<usize> = pairs.iter().map(|(k, _)| *k).collect();
    let pairs: Vec<DatasetPair> = pairs.into_iter().map(|(_, p)| p).collect();

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = args.jobs {
        builder = builder.num_threads(jobs);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let mut output = pool.install(|| {
        run_benchmark_with(&pairs, &families, &cfg, |d| {
            eprintln!("{}", d.summary_line())
        })
    })?;

    let mut merged: Vec<(usize, DatasetOutcome)> = order.into_iter().zip(output.datasets).collect();
    merged.extend(unreadable);
    merged.sort_by_key(|(k, _)| *k);
    output.datasets = merged.into_iter().map(|(_, d)| d).collect();

    let written = write_report(&args.out_dir, &output)?;
    eprintln!(
        "{} of {} datasets completed; {} files in {} (alpha {DEFAULT_ALPHA})",
        output.completed(),
        output.datasets.len(),
        written.len(),
        args.out_dir.display()
    );
    print!("{}", output.matrix.to_csv());
    if output.completed() == 0 {
        return Err(CliError::Data("no dataset completed".into()));
    }
    Ok(())
}

fn cmd_synth(args: SynthArgs) -> CliResult {
    for name in synthetic::write_stand_ins(&args.out_dir, args.seed)? {
        println!("{name}");
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Dist(a) => cmd_dist(a),
        Command::Path(a) => cmd_path(a),
        Command::Tune(a) => cmd_tune(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Synth(a) => cmd_synth(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
