//! Experiment harness: repeated seeded trials of the pairing methods with
//! per-method timing, accuracy against the exact optimum (or the normalized
//! variant when the optimum is excluded), and per-method time limits.

use std::path::PathBuf;
use std::sync::mpsc;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use cluster_pair_core::contingency::build_contingency_chunk;
use cluster_pair_core::{
    build_contingency, cr_pair, derive_seed, metrics, mmm_pair, mwm_pair, smbp_pair, Clustering,
    ContingencyMatrix, FeatureDataset, GenConfig, GenMode, Pairing, ProposerSide,
};

use crate::error::{Error, Result};
use crate::io::{self, LabelFormat, ReportRecord, REPORT_SCHEMA_VERSION};

/// Fixed fallback seed so every invocation is reproducible by default.
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Balanced,
    Unbalanced,
}

impl From<Mode> for GenMode {
    fn from(m: Mode) -> GenMode {
        match m {
            Mode::Balanced => GenMode::Balanced,
            Mode::Unbalanced => GenMode::Unbalanced,
        }
    }
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Balanced => "balanced",
            Mode::Unbalanced => "unbalanced",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Proposer {
    #[default]
    Row,
    Col,
}

impl From<Proposer> for ProposerSide {
    fn from(p: Proposer) -> ProposerSide {
        match p {
            Proposer::Row => ProposerSide::Row,
            Proposer::Col => ProposerSide::Column,
        }
    }
}

impl Proposer {
    pub fn as_str(&self) -> &'static str {
        match self {
            Proposer::Row => "row",
            Proposer::Col => "col",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BenchMethod {
    Smbp,
    Mwm,
    Mmm,
    Cr,
}

impl BenchMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            BenchMethod::Smbp => "smbp",
            BenchMethod::Mwm => "mwm",
            BenchMethod::Mmm => "mmm",
            BenchMethod::Cr => "cr",
        }
    }

    /// Paper-style display name for tables.
    pub fn display_name(&self) -> &'static str {
        match self {
            BenchMethod::Smbp => "Stable Matching Based Pairing",
            BenchMethod::Mwm => "Maximum Weighted Matching",
            BenchMethod::Mmm => "Maximum Match Measure",
            BenchMethod::Cr => "Centroid Ratio",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum TimingScope {
    /// Time the pairing call only (including its preference construction);
    /// contingency building is excluded.
    #[default]
    PairingOnly,
    /// Time one contingency build plus the pairing call per method.
    PairingPlusContingency,
}

impl TimingScope {
    pub fn as_str(&self) -> &'static str {
        match self {
            TimingScope::PairingOnly => "pairing-only",
            TimingScope::PairingPlusContingency => "pairing-plus-contingency",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub mode: Mode,
    pub communities: usize,
    pub rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceSpec {
    LabelsFile {
        path: PathBuf,
        #[serde(default)]
        format: LabelFormat,
    },
    Generator(GeneratorSpec),
}

impl SourceSpec {
    fn kind(&self) -> &'static str {
        match self {
            SourceSpec::LabelsFile { .. } => "file",
            SourceSpec::Generator(g) => g.mode.as_str(),
        }
    }
}

fn default_warmup() -> u64 {
    1
}

fn default_threads() -> usize {
    1
}

/// One experiment: two label sources, a method set, and trial parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub first_source: SourceSpec,
    pub second_source: SourceSpec,
    pub methods: Vec<BenchMethod>,
    pub iterations: u64,
    pub base_seed: u64,
    #[serde(default)]
    pub timing_scope: TimingScope,
    /// Leading iterations whose timings are excluded from the reported
    /// mean; capped at `iterations - 1` so one-shot runs still report.
    #[serde(default = "default_warmup")]
    pub timing_warmup: u64,
    #[serde(default)]
    pub time_limit_seconds: Option<f64>,
    /// Feature matrix for the centroid-ratio method.
    #[serde(default)]
    pub features: Option<PathBuf>,
    #[serde(default)]
    pub proposer: Proposer,
    /// Worker threads for chunk-and-merge contingency construction.
    #[serde(default = "default_threads")]
    pub threads: usize,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidInput("iterations must be >= 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::InvalidInput("methods must be non-empty".into()));
        }
        let mut seen = Vec::new();
        for m in &self.methods {
            if seen.contains(m) {
                return Err(Error::InvalidInput(format!("duplicate method {}", m.as_str())));
            }
            seen.push(*m);
        }
        if self.methods.contains(&BenchMethod::Cr) && self.features.is_none() {
            return Err(Error::InvalidInput(
                "the cr method needs a feature source (`features`)".into(),
            ));
        }
        if matches!(self.second_source, SourceSpec::LabelsFile { .. }) {
            return Err(Error::InvalidInput(
                "second_source must be a generator; only the first source may be a file".into(),
            ));
        }
        if self.threads == 0 {
            return Err(Error::InvalidInput("threads must be >= 1".into()));
        }
        Ok(())
    }

    fn dataset_type(&self) -> String {
        format!("{}/{}", self.first_source.kind(), self.second_source.kind())
    }
}

/// Per-method outcome aggregated over all iterations.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodRow {
    pub method: BenchMethod,
    pub run_time_seconds: Option<f64>,
    pub accuracy_mean: Option<f64>,
    pub accuracy_std: Option<f64>,
    pub normalized: bool,
    pub baseline: Option<String>,
    pub timed_out: bool,
}

/// Results of one experiment across all requested methods.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub name: String,
    pub dataset_type: String,
    pub iterations: u64,
    pub base_seed: u64,
    pub timing_scope: TimingScope,
    pub timing_warmup: u64,
    pub time_limit_seconds: Option<f64>,
    pub proposer: Proposer,
    pub rows: Vec<MethodRow>,
}

impl BenchReport {
    pub fn records(&self) -> Vec<ReportRecord> {
        self.rows
            .iter()
            .map(|row| ReportRecord {
                schema_version: REPORT_SCHEMA_VERSION,
                dataset_type: format!("{} ({})", self.name, self.dataset_type),
                method: row.method.as_str().into(),
                iterations: self.iterations,
                base_seed: Some(self.base_seed),
                proposer: (row.method == BenchMethod::Smbp)
                    .then(|| self.proposer.as_str().into()),
                timing_scope: self.timing_scope.as_str().into(),
                timing_warmup: self.timing_warmup,
                run_time_seconds: row.run_time_seconds,
                accuracy_mean: row.accuracy_mean,
                accuracy_std: row.accuracy_std,
                normalized: row.normalized,
                baseline: row.baseline.clone(),
                timed_out: row.timed_out,
                time_limit_seconds: self.time_limit_seconds,
                error: None,
            })
            .collect()
    }
}

/// Monotonic wall-clock around the thunk only.
pub fn time_op<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

/// Chunk-and-merge contingency construction; bit-identical to the serial
/// single-pass build for any thread count.
pub fn build_contingency_parallel(
    a: &Clustering,
    b: &Clustering,
    threads: usize,
) -> Result<ContingencyMatrix> {
    if threads <= 1 {
        return Ok(build_contingency(a, b)?);
    }
    let n = a.n_points();
    let chunk = n.div_ceil(threads);
    let parts: Vec<cluster_pair_core::Result<ContingencyMatrix>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .filter_map(|t| {
                let lo = t * chunk;
                if lo >= n {
                    return None;
                }
                let hi = ((t + 1) * chunk).min(n);
                Some(scope.spawn(move || build_contingency_chunk(a, b, lo..hi)))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("contingency worker panicked"))
            .collect()
    });
    let mut iter = parts.into_iter();
    let mut acc = iter.next().expect("n >= 1 yields at least one chunk")?;
    for part in iter {
        acc.merge_assign(&part?)?;
    }
    Ok(acc)
}

enum Outcome {
    Completed { pairing: Pairing, seconds: f64 },
    TimedOut,
}

/// Runs a pairing job, optionally under a wall-clock limit.
///
/// With a limit the job runs on a worker thread; on timeout the worker is
/// abandoned (its eventual result is discarded) and the harness moves on,
/// which matches the wall-clock semantics of aborting a too-slow method.
fn run_job(
    job: Box<dyn FnOnce() -> Pairing + Send + 'static>,
    limit: Option<f64>,
) -> Outcome {
    match limit {
        None => {
            let (pairing, seconds) = time_op(job);
            Outcome::Completed { pairing, seconds }
        }
        Some(limit) => {
            let (tx, rx) = mpsc::channel();
            std::thread::Builder::new()
                .name("cluster-pair-matcher".into())
                .spawn(move || {
                    let result = time_op(job);
                    let _ = tx.send(result);
                })
                .expect("failed to spawn matcher thread");
            match rx.recv_timeout(Duration::from_secs_f64(limit)) {
                Ok((pairing, seconds)) => Outcome::Completed { pairing, seconds },
                Err(_) => Outcome::TimedOut,
            }
        }
    }
}

struct IterationData {
    first: Arc<Clustering>,
    second: Arc<Clustering>,
    matrix: Option<Arc<ContingencyMatrix>>,
}

/// Runs every method of `spec` for `spec.iterations` seeded trials.
///
/// Per-iteration seeds are derived from `(base_seed, iteration, side)`, so
/// the two clusterings of a trial are independent streams and any dataset
/// condition sharing a side reproduces the identical labels. Methods are
/// timed one at a time on the calling thread (unless a time limit moves the
/// work to a watchdogged worker); a method that exceeds the limit is marked
/// timed out and skipped in later iterations.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<BenchReport> {
    spec.validate()?;

    let fixed_first: Option<Arc<Clustering>> = match &spec.first_source {
        SourceSpec::LabelsFile { path, format } => {
            let raw = io::read_labels(path, format)?;
            Some(Arc::new(raw.to_clustering()?))
        }
        SourceSpec::Generator(_) => None,
    };

    let features: Option<Arc<FeatureDataset>> = match (&spec.features, spec.methods.contains(&BenchMethod::Cr)) {
        (Some(path), true) => Some(Arc::new(io::read_features(path)?)),
        _ => None,
    };

    let mut timings: Vec<Vec<f64>> = vec![Vec::new(); spec.methods.len()];
    let mut accuracies: Vec<Vec<f64>> = vec![Vec::new(); spec.methods.len()];
    let mut dead: Vec<bool> = vec![false; spec.methods.len()];
    let mut baselines: Vec<Option<String>> = vec![None; spec.methods.len()];
    let mut any_normalized = false;

    for iteration in 0..spec.iterations {
        let data = materialize_iteration(spec, iteration, &fixed_first, &features)?;

        let mut pairings: Vec<Option<Pairing>> = vec![None; spec.methods.len()];
        for (idx, method) in spec.methods.iter().enumerate() {
            if dead[idx] {
                continue;
            }
            let job = make_job(*method, spec, &data, &features);
            match run_job(job, spec.time_limit_seconds) {
                Outcome::Completed { pairing, seconds } => {
                    timings[idx].push(seconds);
                    pairings[idx] = Some(pairing);
                }
                Outcome::TimedOut => {
                    dead[idx] = true;
                    timings[idx].clear();
                    accuracies[idx].clear();
                    // losing the exact baseline switches later iterations to
                    // normalized scoring; drop mixed-baseline samples
                    if *method == BenchMethod::Mwm {
                        for acc in accuracies.iter_mut() {
                            acc.clear();
                        }
                    }
                }
            }
        }

        score_iteration(spec, &pairings, &mut accuracies, &mut baselines, &mut any_normalized);
    }

    let rows = spec
        .methods
        .iter()
        .enumerate()
        .map(|(idx, method)| {
            let timed_out = dead[idx];
            let run_time_seconds = (!timed_out && !timings[idx].is_empty()).then(|| {
                let samples = &timings[idx];
                let skip = (spec.timing_warmup as usize).min(samples.len() - 1);
                let kept = &samples[skip..];
                kept.iter().sum::<f64>() / kept.len() as f64
            });
            let (accuracy_mean, accuracy_std) = if timed_out || accuracies[idx].is_empty() {
                (None, None)
            } else {
                let (mean, std) = metrics::summarize(&accuracies[idx])
                    .expect("non-empty accuracy sample");
                (Some(mean), Some(std))
            };
            MethodRow {
                method: *method,
                run_time_seconds,
                accuracy_mean,
                accuracy_std,
                normalized: any_normalized && *method != BenchMethod::Mwm,
                baseline: baselines[idx].clone(),
                timed_out,
            }
        })
        .collect();

    Ok(BenchReport {
        name: spec.name.clone(),
        dataset_type: spec.dataset_type(),
        iterations: spec.iterations,
        base_seed: spec.base_seed,
        timing_scope: spec.timing_scope,
        timing_warmup: spec.timing_warmup,
        time_limit_seconds: spec.time_limit_seconds,
        proposer: spec.proposer,
        rows,
    })
}

fn materialize_iteration(
    spec: &ExperimentSpec,
    iteration: u64,
    fixed_first: &Option<Arc<Clustering>>,
    features: &Option<Arc<FeatureDataset>>,
) -> Result<IterationData> {
    let first = match (&spec.first_source, fixed_first) {
        (SourceSpec::LabelsFile { .. }, Some(c)) => Arc::clone(c),
        (SourceSpec::Generator(g), _) => {
            let seed = derive_seed(spec.base_seed, 2 * iteration);
            Arc::new(GenConfig::new(g.mode.into(), g.communities, g.rows, seed)?.generate())
        }
        _ => unreachable!("file source materialized before the loop"),
    };
    let second = match &spec.second_source {
        SourceSpec::Generator(g) => {
            let seed = derive_seed(spec.base_seed, 2 * iteration + 1);
            Arc::new(GenConfig::new(g.mode.into(), g.communities, g.rows, seed)?.generate())
        }
        SourceSpec::LabelsFile { .. } => unreachable!("rejected by validate"),
    };
    if first.n_points() != second.n_points() {
        return Err(Error::InvalidInput(format!(
            "label sources disagree on point count: {} vs {}",
            first.n_points(),
            second.n_points()
        )));
    }
    if let Some(f) = features {
        if f.n_points() != first.n_points() {
            return Err(Error::InvalidInput(format!(
                "feature rows ({}) do not match label count ({})",
                f.n_points(),
                first.n_points()
            )));
        }
    }

    // Under the pairing-only scope the matrix is built once, untimed, and
    // shared; the wider scope rebuilds it inside each timed job.
    let matrix = match spec.timing_scope {
        TimingScope::PairingOnly => Some(Arc::new(build_contingency_parallel(
            &first,
            &second,
            spec.threads,
        )?)),
        TimingScope::PairingPlusContingency => None,
    };
    Ok(IterationData { first, second, matrix })
}

fn make_job(
    method: BenchMethod,
    spec: &ExperimentSpec,
    data: &IterationData,
    features: &Option<Arc<FeatureDataset>>,
) -> Box<dyn FnOnce() -> Pairing + Send + 'static> {
    let proposer: ProposerSide = spec.proposer.into();
    let threads = spec.threads;

    if method == BenchMethod::Cr {
        let feats = Arc::clone(features.as_ref().expect("validated"));
        let a = Arc::clone(&data.first);
        let b = Arc::clone(&data.second);
        return Box::new(move || {
            cr_pair(&feats, &a, &b).expect("inputs validated before the run")
        });
    }

    match &data.matrix {
        Some(m) => {
            let m = Arc::clone(m);
            Box::new(move || match method {
                BenchMethod::Smbp => smbp_pair(&m, proposer),
                BenchMethod::Mwm => mwm_pair(&m),
                BenchMethod::Mmm => mmm_pair(&m),
                BenchMethod::Cr => unreachable!(),
            })
        }
        None => {
            let a = Arc::clone(&data.first);
            let b = Arc::clone(&data.second);
            Box::new(move || {
                let m = build_contingency_parallel(&a, &b, threads)
                    .expect("inputs validated before the run");
                match method {
                    BenchMethod::Smbp => smbp_pair(&m, proposer),
                    BenchMethod::Mwm => mwm_pair(&m),
                    BenchMethod::Mmm => mmm_pair(&m),
                    BenchMethod::Cr => unreachable!(),
                }
            })
        }
    }
}

/// Scores one iteration's completed pairings: against the exact optimum
/// when available, otherwise each heuristic against the best of SMBP/MMM.
fn score_iteration(
    spec: &ExperimentSpec,
    pairings: &[Option<Pairing>],
    accuracies: &mut [Vec<f64>],
    baselines: &mut [Option<String>],
    any_normalized: &mut bool,
) {
    let idx_of = |m: BenchMethod| spec.methods.iter().position(|&x| x == m);
    let mwm = idx_of(BenchMethod::Mwm).and_then(|i| pairings[i].as_ref());

    if let Some(mwm_pairing) = mwm {
        for (idx, pairing) in pairings.iter().enumerate() {
            if let Some(p) = pairing {
                accuracies[idx].push(metrics::accuracy(p, mwm_pairing));
                baselines[idx] = Some("mwm".into());
            }
        }
        return;
    }

    // The exact solver is absent or timed out: normalize SMBP/MMM against
    // their own best weight sum.
    let smbp_w = idx_of(BenchMethod::Smbp)
        .and_then(|i| pairings[i].as_ref())
        .map(|p| p.weight_sum());
    let mmm_w = idx_of(BenchMethod::Mmm)
        .and_then(|i| pairings[i].as_ref())
        .map(|p| p.weight_sum());
    let denom = smbp_w.unwrap_or(0).max(mmm_w.unwrap_or(0));
    if smbp_w.is_none() && mmm_w.is_none() {
        return;
    }
    *any_normalized = true;
    for (idx, method) in spec.methods.iter().enumerate() {
        let weight = match method {
            BenchMethod::Smbp => smbp_w,
            BenchMethod::Mmm => mmm_w,
            _ => None,
        };
        if let Some(w) = weight {
            let acc = if denom == 0 { 1.0 } else { w as f64 / denom as f64 };
            accuracies[idx].push(acc);
            baselines[idx] = Some("max(smbp,mmm)".into());
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SuiteScale {
    /// Rows and communities shrunk 50x/5x and iterations 10x from `medium`
    /// so the whole grid fits a CI budget.
    Small,
    /// 100k points over 100 communities, 50 iterations.
    Medium,
    /// The full grid up to 400M points over 10000 communities.
    Paper,
}

/// The canned experiment grid: three dataset-type conditions per size.
///
/// In the mixed condition the first source is the unbalanced one. The
/// largest sizes drop the exact solver and carry a two-hour per-method
/// limit; their accuracy is the normalized SMBP/MMM ratio.
pub fn paper_suite(scale: SuiteScale, base_seed: u64) -> Vec<ExperimentSpec> {
    let mut specs = Vec::new();
    let exact = &[BenchMethod::Mwm, BenchMethod::Smbp, BenchMethod::Mmm][..];
    let heuristic = &[BenchMethod::Smbp, BenchMethod::Mmm][..];
    match scale {
        SuiteScale::Small => {
            push_grid(&mut specs, "2k-k20", 2_000, 20, 5, exact, None, base_seed);
        }
        SuiteScale::Medium => {
            push_grid(&mut specs, "100k-k100", 100_000, 100, 50, exact, None, base_seed);
        }
        SuiteScale::Paper => {
            push_grid(&mut specs, "100k-k100", 100_000, 100, 50, exact, None, base_seed);
            push_grid(&mut specs, "10m-k500", 10_000_000, 500, 1, exact, None, base_seed);
            push_grid(&mut specs, "20m-k1000", 20_000_000, 1_000, 1, exact, None, base_seed);
            let limit = Some(7_200.0);
            push_grid(&mut specs, "40m-k2000", 40_000_000, 2_000, 1, heuristic, limit, base_seed);
            push_grid(&mut specs, "200m-k5000", 200_000_000, 5_000, 1, heuristic, limit, base_seed);
            push_grid(&mut specs, "400m-k10000", 400_000_000, 10_000, 1, heuristic, limit, base_seed);
        }
    }
    specs
}

#[allow(clippy::too_many_arguments)]
fn push_grid(
    specs: &mut Vec<ExperimentSpec>,
    size_tag: &str,
    rows: usize,
    communities: usize,
    iterations: u64,
    methods: &[BenchMethod],
    time_limit_seconds: Option<f64>,
    base_seed: u64,
) {
    let gen = |mode: Mode| SourceSpec::Generator(GeneratorSpec { mode, communities, rows });
    let conditions = [
        ("both-balanced", Mode::Balanced, Mode::Balanced),
        ("one-balanced-one-unbalanced", Mode::Unbalanced, Mode::Balanced),
        ("both-unbalanced", Mode::Unbalanced, Mode::Unbalanced),
    ];
    for (tag, first, second) in conditions {
        specs.push(ExperimentSpec {
            name: format!("{size_tag}-{tag}"),
            first_source: gen(first),
            second_source: gen(second),
            methods: methods.to_vec(),
            iterations,
            base_seed,
            timing_scope: TimingScope::PairingOnly,
            timing_warmup: 1,
            time_limit_seconds,
            features: None,
            proposer: Proposer::Row,
            threads: 1,
        });
    }
}
