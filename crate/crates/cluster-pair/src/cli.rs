//! Command-line front end.

use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context};
use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};

use cluster_pair::bench::{
    paper_suite, run_experiment, time_op, BenchMethod, BenchReport, ExperimentSpec, Mode,
    Proposer, SuiteScale, TimingScope, DEFAULT_SEED,
};
use cluster_pair::io::{
    read_labels, write_contingency, write_labels, write_report, ColumnSpec, LabelFormat,
    ReportFormat, ReportRecord, REPORT_SCHEMA_VERSION,
};
use cluster_pair_core::{
    build_contingency, cluster_size_stats, metrics, mmm_pair, mwm_pair, smbp_pair, Clustering,
    GenConfig, Pairing,
};

#[derive(Parser)]
#[command(
    name = "cluster-pair",
    version,
    about = "Compare two clusterings by pairing their clusters",
    long_about = "Compare two clusterings of the same points by pairing their clusters and \
                  summing shared-point counts. Randomized commands default to the fixed seed 42 \
                  so every invocation is reproducible; pass --seed-from-entropy for a fresh seed \
                  (the chosen value is printed)."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Generate a synthetic label file
    Gen(GenArgs),
    /// Pair the clusters of two label files and score the pairing
    Pair(PairArgs),
    /// Run experiment suites and write a consolidated report
    Bench(BenchArgs),
    /// Write the contingency matrix of two label files as CSV
    Contingency(ContingencyArgs),
}

#[derive(Args)]
pub struct GenArgs {
    /// Distribution of points over clusters
    #[arg(long, value_enum)]
    mode: Mode,
    /// Number of clusters
    #[arg(long)]
    communities: usize,
    /// Number of points
    #[arg(long)]
    rows: usize,
    /// PRNG seed (fixed default keeps runs reproducible)
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Draw the seed from system time instead and print it
    #[arg(long)]
    seed_from_entropy: bool,
    /// Output label file, one label per line
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PairMethod {
    Smbp,
    Mwm,
    Mmm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum LabelFormatArg {
    #[default]
    Lines,
    Csv,
}

#[derive(Args)]
pub struct LabelFormatFlags {
    /// Label file format
    #[arg(long, value_enum, default_value_t = LabelFormatArg::Lines)]
    label_format: LabelFormatArg,
    /// CSV column holding the labels: a header name or a 0-based index
    #[arg(long)]
    csv_column: Option<String>,
    /// Whether the CSV starts with a header row
    #[arg(long, default_value_t = true, action = ArgAction::Set, num_args = 1)]
    csv_header: bool,
}

impl LabelFormatFlags {
    fn resolve(&self) -> anyhow::Result<LabelFormat> {
        match self.label_format {
            LabelFormatArg::Lines => Ok(LabelFormat::Lines),
            LabelFormatArg::Csv => {
                let column = self
                    .csv_column
                    .as_deref()
                    .context("--label-format csv needs --csv-column")?;
                let column = match column.parse::<usize>() {
                    Ok(i) => ColumnSpec::Index(i),
                    Err(_) => ColumnSpec::Name(column.to_string()),
                };
                Ok(LabelFormat::CsvColumn { column, has_header: self.csv_header })
            }
        }
    }
}

#[derive(Args)]
pub struct PairArgs {
    /// First label file
    #[arg(long)]
    a: PathBuf,
    /// Second label file
    #[arg(long)]
    b: PathBuf,
    #[arg(long, value_enum)]
    method: PairMethod,
    /// Which side proposes during stable matching
    #[arg(long, value_enum, default_value_t = Proposer::Row)]
    proposer: Proposer,
    /// Also run the exact solver and report accuracy against it
    #[arg(long)]
    with_mwm: bool,
    /// Append a report record to this path
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    report_format: ReportFormat,
    /// Declare at least this many clusters on both sides
    #[arg(long)]
    force_k: Option<usize>,
    #[command(flatten)]
    format: LabelFormatFlags,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Canned experiment grid
    #[arg(long, value_enum, required_unless_present = "spec", conflicts_with = "spec")]
    suite: Option<SuiteScale>,
    /// JSON file holding one experiment spec or an array of them
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Report path; records append across invocations
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    report_format: ReportFormat,
    /// Per-method wall-clock limit in seconds, overriding the specs
    #[arg(long)]
    time_limit: Option<f64>,
    /// Worker threads for contingency construction
    /// (falls back to CLUSTER_PAIR_THREADS)
    #[arg(long)]
    threads: Option<usize>,
    /// Override the timing boundary recorded in the specs
    #[arg(long, value_enum)]
    timing_scope: Option<TimingScope>,
    /// Leading iterations excluded from the reported mean run time
    #[arg(long)]
    warmup: Option<u64>,
    /// Base seed for all suite specs
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Draw the base seed from system time instead and print it
    #[arg(long)]
    seed_from_entropy: bool,
}

#[derive(Args)]
pub struct ContingencyArgs {
    /// First label file
    #[arg(long)]
    a: PathBuf,
    /// Second label file
    #[arg(long)]
    b: PathBuf,
    /// Output CSV path
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    format: LabelFormatFlags,
}

pub fn run(cli: Cli) -> anyhow::Result<i32> {
    match cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Pair(args) => cmd_pair(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Contingency(args) => cmd_contingency(args),
    }
}

fn entropy_seed() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_nanos() as u64)
        .unwrap_or(DEFAULT_SEED)
}

fn resolve_seed(seed: u64, from_entropy: bool) -> u64 {
    if from_entropy {
        let seed = entropy_seed();
        println!("seed: {seed}");
        seed
    } else {
        seed
    }
}

fn cmd_gen(args: GenArgs) -> anyhow::Result<i32> {
    let seed = resolve_seed(args.seed, args.seed_from_entropy);
    let cfg = GenConfig::new(args.mode.into(), args.communities, args.rows, seed)?;
    let clustering = cfg.generate();
    write_labels(&clustering, &args.out)?;
    let (mean, std) = cluster_size_stats(&clustering);
    println!(
        "wrote {} labels across {} clusters to {}",
        clustering.n_points(),
        clustering.k(),
        args.out.display()
    );
    println!("cluster size mean: {mean:.3}, std: {std:.3}");
    Ok(0)
}

fn load_clustering(
    path: &Path,
    format: &LabelFormat,
    force_k: Option<usize>,
) -> anyhow::Result<Clustering> {
    let raw = read_labels(path, format)?;
    let mut clustering = raw.to_clustering()?;
    if let Some(k) = force_k {
        let k = k.max(clustering.k());
        clustering = clustering.with_k(k)?;
    }
    Ok(clustering)
}

fn cmd_pair(args: PairArgs) -> anyhow::Result<i32> {
    let format = args.format.resolve()?;
    let a = load_clustering(&args.a, &format, args.force_k)?;
    let b = load_clustering(&args.b, &format, args.force_k)?;
    if a.n_points() != b.n_points() {
        bail!(
            "label files cover different point counts: {} has {}, {} has {}",
            args.a.display(),
            a.n_points(),
            args.b.display(),
            b.n_points()
        );
    }
    let m = build_contingency(&a, &b)?;

    let (pairing, seconds): (Pairing, f64) = match args.method {
        PairMethod::Smbp => time_op(|| smbp_pair(&m, args.proposer.into())),
        PairMethod::Mwm => time_op(|| mwm_pair(&m)),
        PairMethod::Mmm => time_op(|| mmm_pair(&m)),
    };

    println!("method: {}", method_name(args.method));
    println!("pairs: {}", pairing.len());
    println!("weight sum: {}", pairing.weight_sum());

    let accuracy = if args.method == PairMethod::Mwm {
        args.with_mwm.then_some(1.0)
    } else if args.with_mwm {
        let optimal = mwm_pair(&m);
        Some(metrics::accuracy(&pairing, &optimal))
    } else {
        None
    };
    if let Some(acc) = accuracy {
        println!("accuracy vs mwm: {acc:.6}");
    }

    if let Some(report_path) = &args.report {
        let record = ReportRecord {
            schema_version: REPORT_SCHEMA_VERSION,
            dataset_type: "files".into(),
            method: method_name(args.method).into(),
            iterations: 1,
            base_seed: None,
            proposer: (args.method == PairMethod::Smbp)
                .then(|| args.proposer.as_str().into()),
            timing_scope: TimingScope::PairingOnly.as_str().into(),
            timing_warmup: 0,
            run_time_seconds: Some(seconds),
            accuracy_mean: accuracy,
            accuracy_std: accuracy.map(|_| 0.0),
            normalized: false,
            baseline: accuracy.map(|_| "mwm".into()),
            timed_out: false,
            time_limit_seconds: None,
            error: None,
        };
        write_report(&[record], report_path, args.report_format)?;
    }
    Ok(0)
}

fn method_name(m: PairMethod) -> &'static str {
    match m {
        PairMethod::Smbp => "smbp",
        PairMethod::Mwm => "mwm",
        PairMethod::Mmm => "mmm",
    }
}

fn cmd_contingency(args: ContingencyArgs) -> anyhow::Result<i32> {
    let format = args.format.resolve()?;
    let a = load_clustering(&args.a, &format, None)?;
    let b = load_clustering(&args.b, &format, None)?;
    if a.n_points() != b.n_points() {
        bail!(
            "label files cover different point counts: {} has {}, {} has {}",
            args.a.display(),
            a.n_points(),
            args.b.display(),
            b.n_points()
        );
    }
    let m = build_contingency(&a, &b)?;
    write_contingency(&m, &args.out)?;
    println!("wrote {}x{} contingency matrix to {}", m.k1(), m.k2(), args.out.display());
    Ok(0)
}

fn load_specs(path: &Path) -> anyhow::Result<Vec<ExperimentSpec>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read spec file {}", path.display()))?;
    if let Ok(specs) = serde_json::from_str::<Vec<ExperimentSpec>>(&text) {
        return Ok(specs);
    }
    let single: ExperimentSpec = serde_json::from_str(&text)
        .with_context(|| format!("{} is not an experiment spec or an array of them", path.display()))?;
    Ok(vec![single])
}

fn cmd_bench(args: BenchArgs) -> anyhow::Result<i32> {
    let seed = resolve_seed(args.seed, args.seed_from_entropy);
    let mut specs = match (&args.suite, &args.spec) {
        (Some(scale), None) => paper_suite(*scale, seed),
        (None, Some(path)) => load_specs(path)?,
        _ => unreachable!("clap enforces exactly one of --suite/--spec"),
    };

    let threads = args.threads.or_else(|| {
        std::env::var("CLUSTER_PAIR_THREADS").ok().and_then(|v| v.parse().ok())
    });
    for spec in &mut specs {
        if let Some(limit) = args.time_limit {
            spec.time_limit_seconds = Some(limit);
        }
        if let Some(t) = threads {
            spec.threads = t;
        }
        if let Some(scope) = args.timing_scope {
            spec.timing_scope = scope;
        }
        if let Some(w) = args.warmup {
            spec.timing_warmup = w;
        }
    }

    let mut failed = false;
    for spec in &specs {
        match run_experiment(spec) {
            Ok(report) => {
                print_report(&report);
                write_report(&report.records(), &args.out, args.report_format)?;
            }
            Err(err) => {
                failed = true;
                eprintln!("error: experiment `{}` failed: {err:#}", spec.name);
                let record = ReportRecord {
                    schema_version: REPORT_SCHEMA_VERSION,
                    dataset_type: spec.name.clone(),
                    method: "none".into(),
                    iterations: spec.iterations,
                    base_seed: Some(spec.base_seed),
                    proposer: None,
                    timing_scope: spec.timing_scope.as_str().into(),
                    timing_warmup: spec.timing_warmup,
                    run_time_seconds: None,
                    accuracy_mean: None,
                    accuracy_std: None,
                    normalized: false,
                    baseline: None,
                    timed_out: false,
                    time_limit_seconds: spec.time_limit_seconds,
                    error: Some(err.to_string()),
                };
                write_report(&[record], &args.out, args.report_format)?;
            }
        }
    }
    println!("report written to {}", args.out.display());
    Ok(if failed { 1 } else { 0 })
}

fn format_accuracy(mean: f64, std: f64) -> String {
    if mean == 1.0 && std == 0.0 {
        "1±0".to_string()
    } else {
        format!("{mean:.4}±{std:.5}")
    }
}

fn print_report(report: &BenchReport) {
    let normalized = report.rows.iter().any(|r| r.normalized);
    let accuracy_header = if normalized { "Normalized Accuracy±Std" } else { "Accuracy±Std" };
    println!(
        "\n== {} ({}, {} iterations, seed {}, {})",
        report.name,
        report.dataset_type,
        report.iterations,
        report.base_seed,
        report.timing_scope.as_str()
    );
    println!("{:<32} {:>20}   {}", "Model", "Run Time in Seconds", accuracy_header);
    for row in &report.rows {
        let time = if row.timed_out {
            match report.time_limit_seconds {
                Some(limit) => format!("Do not finish after {limit} seconds"),
                None => "Do not finish".to_string(),
            }
        } else {
            row.run_time_seconds.map_or("-".to_string(), |t| format!("{t:.6}"))
        };
        let accuracy = match (row.accuracy_mean, row.accuracy_std) {
            (Some(mean), Some(std)) => format_accuracy(mean, std),
            _ => "-".to_string(),
        };
        println!("{:<32} {:>20}   {}", display_name(row.method), time, accuracy);
    }
}

fn display_name(m: BenchMethod) -> &'static str {
    m.display_name()
}
