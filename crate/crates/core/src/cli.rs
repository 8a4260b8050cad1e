//! Command-line front end.
//!
//! Each command computes everything first, then writes its files atomically together with a
//! `run.json` that `contrast replay` accepts as its only input.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::contrast::{extract_from_summaries, AlphaSpec, ContrastResult, Variant};
use crate::error::{Error, Result};
use crate::graph::{GraphGroup, Label, LabelAliases, ObservationGraph};
use crate::io::{
    atomic_write, fmt_f64, format_edge_list, format_manifest, format_matrix_csv, load_group,
    read_atlas, Ingest, ManifestRow,
};
use crate::oracle::{fixture_f2, planted_dataset, PlantedSpec};
use crate::pipeline::{
    evaluate_protocol, extract_rules, features_p1, features_p2, fit_display_model, EvalConfig,
    FeatureTable, SvmParams,
};
use crate::solver::{Method, SolverConfig};
use crate::summary::{
    build_difference, build_summary, weighted_degrees, DifferenceGraph, DifferenceMode,
    SummaryGraph, SummaryMode,
};

pub const GRID_SIZE: usize = 200;

#[derive(Debug, Parser)]
#[command(name = "contrast", version, about = "Contrast subgraphs between two groups of graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", content = "args", rename_all = "kebab-case")]
pub enum Command {
    /// Group summaries, their signed difference and weighted degrees.
    Summarize(SummarizeArgs),
    /// Contrast subgraphs in both directions, or the symmetric one.
    Extract(ExtractArgs),
    /// Two-feature classification with repeated stratified evaluation.
    Classify(ClassifyArgs),
    /// Writes a planted cohort (or the small two-graph fixture) as manifests and edge lists.
    Synth(SynthArgs),
    /// Re-renders display edges and vertex importance from saved results.
    Report(ReportArgs),
    /// Re-runs the command recorded in a run.json.
    #[serde(skip)]
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SummaryModeArg {
    Fraction,
    WeightedMean,
    Binary,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct InputArgs {
    /// Manifest (TSV: subject_id, path, label) of the first group.
    #[arg(long)]
    pub group_a: PathBuf,
    /// Manifest of the second group.
    #[arg(long)]
    pub group_b: PathBuf,
    /// Manifest paths point to ROI time series instead of graphs.
    #[arg(long)]
    pub timeseries: bool,
    #[arg(long, default_value_t = 80.0)]
    pub threshold_percentile: f64,
    /// Extra manifest label aliases, e.g. `TD=A,ASD=B`.
    #[arg(long)]
    pub labels: Option<String>,
    #[arg(long, value_enum, default_value_t = SummaryModeArg::Fraction)]
    pub summary_mode: SummaryModeArg,
    /// Cut-off for `--summary-mode binary`.
    #[arg(long, default_value_t = 0.5)]
    pub binary_threshold: f64,
    /// Vertex names, one per line.
    #[arg(long)]
    pub atlas: Option<PathBuf>,
}

impl InputArgs {
    fn absolutize(&mut self) -> Result<()> {
        self.group_a = absolute(&self.group_a)?;
        self.group_b = absolute(&self.group_b)?;
        if let Some(a) = &self.atlas {
            self.atlas = Some(absolute(a)?);
        }
        Ok(())
    }

    fn summary_mode(&self) -> SummaryMode {
        match self.summary_mode {
            SummaryModeArg::Fraction => SummaryMode::Fraction,
            SummaryModeArg::WeightedMean => SummaryMode::WeightedMean,
            SummaryModeArg::Binary => SummaryMode::Binary {
                threshold: self.binary_threshold,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SolverArgs {
    #[arg(long, default_value_t = Method::SdpLocalSearch)]
    pub method: Method,
    #[arg(long, default_value_t = 20)]
    pub restarts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Rank of the vector relaxation; derived from n when absent.
    #[arg(long)]
    pub sdp_rank: Option<usize>,
    #[arg(long, default_value_t = 1000)]
    pub sdp_max_iters: usize,
    #[arg(long, default_value_t = 50)]
    pub rounding_samples: usize,
    #[arg(long, default_value_t = 50)]
    pub local_search_max_passes: usize,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            restarts: self.restarts,
            local_search_max_passes: self.local_search_max_passes,
            sdp_rank: self.sdp_rank,
            sdp_max_iters: self.sdp_max_iters,
            rounding_samples: self.rounding_samples,
            rng_seed: self.seed,
            method: self.method,
            ..SolverConfig::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SummarizeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// `0.8` (raw), `80` or `80%` (percent), `p80` (percentile of positive differences).
    #[arg(long)]
    pub alpha: AlphaSpec,
    /// Separate alpha for the B-minus-A direction.
    #[arg(long)]
    pub alpha_b: Option<AlphaSpec>,
    #[arg(long)]
    pub symmetric: bool,
    #[arg(long, default_value_t = 0.1)]
    pub edge_display_threshold: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeArg {
    P1,
    P2,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub alpha: AlphaSpec,
    #[arg(long)]
    pub alpha_b: Option<AlphaSpec>,
    #[arg(long, value_enum, default_value_t = SchemeArg::P1)]
    pub scheme: SchemeArg,
    #[arg(long, default_value_t = 5)]
    pub repetitions: usize,
    /// Mine contrast subgraphs once on all subjects instead of inside each training split.
    #[arg(long)]
    pub fixed_contrast: bool,
    /// Saved contrast results to use instead of mining (implies fixed features).
    #[arg(long = "result")]
    pub results: Vec<PathBuf>,
    /// Adds squared and product terms to the classifier features.
    #[arg(long)]
    pub quadratic: bool,
    #[arg(long)]
    pub no_standardize: bool,
    #[arg(long, default_value_t = 2000)]
    pub epochs: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 60)]
    pub n: usize,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long, default_value_t = 40)]
    pub group_size_a: usize,
    #[arg(long, default_value_t = 40)]
    pub group_size_b: usize,
    #[arg(long, default_value_t = 0.9)]
    pub p_in_a: f64,
    #[arg(long, default_value_t = 0.1)]
    pub p_in_b: f64,
    #[arg(long, default_value_t = 0.3)]
    pub p_bg: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Writes the two-graph, eight-vertex fixture instead of a planted cohort.
    #[arg(long)]
    pub fixture: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ReportArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Result JSON written by `extract` or `classify`.
    #[arg(long = "result", required = true)]
    pub results: Vec<PathBuf>,
    #[arg(long, default_value_t = 0.1)]
    pub edge_display_threshold: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct ReplayArgs {
    /// A run.json written by an earlier run.
    pub run: PathBuf,
    /// Write to this directory instead of the recorded one.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Contents of `run.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub version: String,
    #[serde(flatten)]
    pub command: Command,
    /// Resolved alpha per variant.
    #[serde(default)]
    pub alpha_resolved: BTreeMap<String, f64>,
}

fn absolute(p: &Path) -> Result<PathBuf> {
    std::path::absolute(p).map_err(|e| Error::io(p, e))
}

/// Files produced by a command, written only once everything has been computed.
#[derive(Debug, Default)]
struct Outputs {
    files: Vec<(PathBuf, Vec<u8>)>,
    alpha_resolved: BTreeMap<String, f64>,
}

impl Outputs {
    fn add(&mut self, name: impl Into<PathBuf>, contents: impl Into<Vec<u8>>) {
        self.files.push((name.into(), contents.into()));
    }

    fn add_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.add(name, text);
        Ok(())
    }

    fn commit(mut self, out: &Path, command: Command) -> Result<Vec<PathBuf>> {
        let record = RunRecord {
            version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            alpha_resolved: std::mem::take(&mut self.alpha_resolved),
        };
        self.add_json("run.json", &record)?;
        let mut written = Vec::with_capacity(self.files.len());
        for (name, contents) in &self.files {
            let path = out.join(name);
            atomic_write(&path, contents)?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Runs a parsed command line and returns the files written.
pub fn run(cli: Cli) -> Result<Vec<PathBuf>> {
    execute(cli.command)
}

pub fn execute(command: Command) -> Result<Vec<PathBuf>> {
    let mut command = command;
    match &mut command {
        Command::Summarize(a) => {
            a.input.absolutize()?;
            a.out = absolute(&a.out)?;
        }
        Command::Extract(a) => {
            a.input.absolutize()?;
            a.out = absolute(&a.out)?;
        }
        Command::Classify(a) => {
            a.input.absolutize()?;
            a.out = absolute(&a.out)?;
            a.results = a.results.iter().map(|p| absolute(p)).collect::<Result<_>>()?;
        }
        Command::Synth(a) => a.out = absolute(&a.out)?,
        Command::Report(a) => {
            a.input.absolutize()?;
            a.out = absolute(&a.out)?;
            a.results = a.results.iter().map(|p| absolute(p)).collect::<Result<_>>()?;
        }
        Command::Replay(a) => return replay(&a.run, a.out.as_deref()),
    }
    let (outputs, out) = match &command {
        Command::Summarize(a) => (cmd_summarize(a)?, &a.out),
        Command::Extract(a) => (cmd_extract(a)?, &a.out),
        Command::Classify(a) => (cmd_classify(a)?, &a.out),
        Command::Synth(a) => (cmd_synth(a)?, &a.out),
        Command::Report(a) => (cmd_report(a)?, &a.out),
        Command::Replay(_) => unreachable!("handled above"),
    };
    let out = out.clone();
    outputs.commit(&out, command)
}

fn replay(run: &Path, out: Option<&Path>) -> Result<Vec<PathBuf>> {
    let text = std::fs::read_to_string(run).map_err(|e| Error::io(run, e))?;
    let record: RunRecord = serde_json::from_str(&text)?;
    let mut command = record.command;
    if let Some(out) = out {
        let out = out.to_path_buf();
        match &mut command {
            Command::Summarize(a) => a.out = out,
            Command::Extract(a) => a.out = out,
            Command::Classify(a) => a.out = out,
            Command::Synth(a) => a.out = out,
            Command::Report(a) => a.out = out,
            Command::Replay(_) => {}
        }
    }
    if matches!(command, Command::Replay(_)) {
        return Err(Error::InvalidArgument("run.json cannot record a replay".into()));
    }
    execute(command)
}

/// Sets the global worker count from `CS_THREADS`, when present.
pub fn init_threads() -> Result<()> {
    let Ok(raw) = std::env::var("CS_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Error::InvalidArgument(format!("CS_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Error::InvalidArgument(format!("cannot size worker pool: {e}")))
}

struct Loaded {
    a: GraphGroup,
    b: GraphGroup,
    names: Option<Vec<String>>,
}

fn load_inputs(input: &InputArgs) -> Result<Loaded> {
    let aliases = match &input.labels {
        Some(s) => s.parse()?,
        None => LabelAliases::default(),
    };
    let ingest = if input.timeseries {
        Ingest::TimeSeries {
            percentile: input.threshold_percentile,
        }
    } else {
        Ingest::Graphs
    };
    let a = load_group(&input.group_a, &aliases, ingest)?;
    let b = load_group(&input.group_b, &aliases, ingest)?;
    for (group, want, flag) in [(&a, Label::A, "--group-a"), (&b, Label::B, "--group-b")] {
        if group.label() != want {
            return Err(Error::InvalidArgument(format!(
                "{flag} must list subjects labelled {want}, found {}",
                group.label()
            )));
        }
    }
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch(a.n(), b.n()));
    }
    let names = match &input.atlas {
        Some(p) => Some(read_atlas(p, a.n())?),
        None => None,
    };
    Ok(Loaded { a, b, names })
}

fn cmd_summarize(args: &SummarizeArgs) -> Result<Outputs> {
    let data = load_inputs(&args.input)?;
    let mode = args.input.summary_mode();
    let sum_a = build_summary(&data.a, mode)?;
    let sum_b = build_summary(&data.b, mode)?;
    let diff = build_difference(&sum_a, &sum_b, DifferenceMode::Signed)?;

    let deg_a = weighted_degrees(&sum_a);
    let deg_b = weighted_degrees(&sum_b);
    let mut degrees = String::from(if data.names.is_some() {
        "vertex,atlas_name,degree_A,degree_B\n"
    } else {
        "vertex,degree_A,degree_B\n"
    });
    for u in 0..sum_a.n() {
        let _ = write!(degrees, "{u},");
        if let Some(names) = &data.names {
            let _ = write!(degrees, "{},", csv_field(&names[u]));
        }
        let _ = writeln!(degrees, "{},{}", fmt_f64(deg_a[u]), fmt_f64(deg_b[u]));
    }

    let mut out = Outputs::default();
    out.add("summary_A.csv", format_matrix_csv(&sum_a.w));
    out.add("summary_B.csv", format_matrix_csv(&sum_b.w));
    out.add("difference.csv", format_matrix_csv(&diff.d));
    out.add("degrees.csv", degrees);
    println!(
        "summarized {} + {} subjects over {} vertices",
        data.a.len(),
        data.b.len(),
        sum_a.n()
    );
    Ok(out)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Difference graph a result was scored on.
fn difference_of(result: &ContrastResult, sum_a: &SummaryGraph, sum_b: &SummaryGraph) -> Result<DifferenceGraph> {
    match result.variant {
        Variant::AMinusB => build_difference(sum_a, sum_b, DifferenceMode::Signed),
        Variant::BMinusA => build_difference(sum_b, sum_a, DifferenceMode::Signed),
        Variant::Symmetric => build_difference(sum_a, sum_b, DifferenceMode::Absolute),
    }
}

/// Display edges (pairs of the set with weight at least `threshold`) and per-vertex
/// importance (summed weight to the rest of the set), both as CSV.
pub fn render_result(
    result: &ContrastResult,
    d: &DifferenceGraph,
    threshold: f64,
    names: Option<&[String]>,
) -> Result<(String, String)> {
    crate::graph::membership(d.n(), &result.vertices)?;
    let s = &result.vertices;
    let mut edges = String::from(if names.is_some() {
        "u,v,u_name,v_name,weight\n"
    } else {
        "u,v,weight\n"
    });
    for (i, &u) in s.iter().enumerate() {
        for &v in &s[i + 1..] {
            let w = d.d.get(u, v);
            if w >= threshold {
                let _ = write!(edges, "{u},{v},");
                if let Some(names) = names {
                    let _ = write!(edges, "{},{},", csv_field(&names[u]), csv_field(&names[v]));
                }
                let _ = writeln!(edges, "{}", fmt_f64(w));
            }
        }
    }
    let mut importance = String::from(if names.is_some() {
        "vertex,name,importance\n"
    } else {
        "vertex,importance\n"
    });
    for &u in s {
        let total: f64 = s.iter().filter(|&&v| v != u).map(|&v| d.d.get(u, v)).sum();
        let _ = write!(importance, "{u},");
        if let Some(names) = names {
            let _ = write!(importance, "{},", csv_field(&names[u]));
        }
        let _ = writeln!(importance, "{}", fmt_f64(total));
    }
    Ok((edges, importance))
}

fn name_vertices(mut result: ContrastResult, names: Option<&[String]>) -> ContrastResult {
    result.vertex_names = names.map(|n| result.vertices.iter().map(|&v| n[v].clone()).collect());
    result
}

fn cmd_extract(args: &ExtractArgs) -> Result<Outputs> {
    let data = load_inputs(&args.input)?;
    let mode = args.input.summary_mode();
    let sum_a = build_summary(&data.a, mode)?;
    let sum_b = build_summary(&data.b, mode)?;
    let cfg = args.solver.config();
    let names = data.names.as_deref();

    let results = if args.symmetric {
        vec![extract_from_summaries(&sum_a, &sum_b, &args.alpha, true, &cfg)?]
    } else {
        let alpha_b = args.alpha_b.unwrap_or(args.alpha);
        vec![
            extract_from_summaries(&sum_a, &sum_b, &args.alpha, false, &cfg)?,
            extract_from_summaries(&sum_b, &sum_a, &alpha_b, false, &cfg)?,
        ]
    };

    let mut out = Outputs::default();
    for result in results {
        let result = name_vertices(result, names);
        let d = difference_of(&result, &sum_a, &sum_b)?;
        let (edges, importance) = render_result(&result, &d, args.edge_display_threshold, names)?;
        let v = result.variant;
        println!(
            "{v}: {} vertices, objective {}, alpha {}",
            result.vertices.len(),
            fmt_f64(result.objective),
            fmt_f64(result.alpha_resolved)
        );
        out.alpha_resolved.insert(v.to_string(), result.alpha_resolved);
        out.add_json(&format!("result_{v}.json"), &result)?;
        out.add(format!("edges_{v}.csv"), edges);
        out.add(format!("importance_{v}.csv"), importance);
    }
    Ok(out)
}

fn cmd_report(args: &ReportArgs) -> Result<Outputs> {
    let data = load_inputs(&args.input)?;
    let mode = args.input.summary_mode();
    let sum_a = build_summary(&data.a, mode)?;
    let sum_b = build_summary(&data.b, mode)?;
    let names = data.names.as_deref();
    let mut out = Outputs::default();
    for path in &args.results {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let result: ContrastResult = serde_json::from_str(&text)?;
        let d = difference_of(&result, &sum_a, &sum_b)?;
        let (edges, importance) = render_result(&result, &d, args.edge_display_threshold, names)?;
        let v = result.variant;
        out.add(format!("edges_{v}.csv"), edges);
        out.add(format!("importance_{v}.csv"), importance);
    }
    Ok(out)
}

/// Contrast subgraphs a feature table is computed from.
enum Mined {
    P1 {
        ab: ContrastResult,
        ba: ContrastResult,
    },
    P2 {
        s: ContrastResult,
        sum_a: SummaryGraph,
        sum_b: SummaryGraph,
    },
}

impl Mined {
    fn results(&self) -> Vec<&ContrastResult> {
        match self {
            Mined::P1 { ab, ba } => vec![ab, ba],
            Mined::P2 { s, .. } => vec![s],
        }
    }

    fn features(&self, subjects: &[ObservationGraph]) -> Result<FeatureTable> {
        let mut table = match self {
            Mined::P1 { ab, ba } => features_p1(subjects, &ab.vertices, &ba.vertices)?,
            Mined::P2 { s, sum_a, sum_b } => features_p2(subjects, &s.vertices, sum_a, sum_b)?,
        };
        table.provenance = self
            .results()
            .iter()
            .map(|r| format!("contrast_{}.json", r.variant))
            .collect();
        Ok(table)
    }
}

struct Miner<'a> {
    args: &'a ClassifyArgs,
    subjects: &'a [ObservationGraph],
    cfg: SolverConfig,
    mode: SummaryMode,
}

impl Miner<'_> {
    /// Contrast subgraphs from the subjects at `idx`.
    fn mine(&self, idx: &[usize]) -> Result<Mined> {
        let pick = |label: Label| {
            let members: Vec<ObservationGraph> = idx
                .iter()
                .map(|&i| &self.subjects[i])
                .filter(|g| g.label() == label)
                .cloned()
                .collect();
            GraphGroup::new(label, members)
        };
        let sum_a = build_summary(&pick(Label::A)?, self.mode)?;
        let sum_b = build_summary(&pick(Label::B)?, self.mode)?;
        let alpha = &self.args.alpha;
        Ok(match self.args.scheme {
            SchemeArg::P1 => Mined::P1 {
                ab: extract_from_summaries(&sum_a, &sum_b, alpha, false, &self.cfg)?,
                ba: extract_from_summaries(
                    &sum_b,
                    &sum_a,
                    self.args.alpha_b.as_ref().unwrap_or(alpha),
                    false,
                    &self.cfg,
                )?,
            },
            SchemeArg::P2 => Mined::P2 {
                s: extract_from_summaries(&sum_a, &sum_b, alpha, true, &self.cfg)?,
                sum_a,
                sum_b,
            },
        })
    }
}

fn load_results(paths: &[PathBuf], scheme: SchemeArg, subjects: &[ObservationGraph], mode: SummaryMode) -> Result<Mined> {
    let mut by_variant = BTreeMap::new();
    for path in paths {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let r: ContrastResult = serde_json::from_str(&text)?;
        by_variant.insert(r.variant.to_string(), r);
    }
    let mut take = |v: Variant| {
        by_variant.remove(&v.to_string()).ok_or_else(|| {
            Error::InvalidArgument(format!("scheme {scheme:?} needs a saved {v} result"))
        })
    };
    Ok(match scheme {
        SchemeArg::P1 => Mined::P1 {
            ab: take(Variant::AMinusB)?,
            ba: take(Variant::BMinusA)?,
        },
        SchemeArg::P2 => {
            let s = take(Variant::Symmetric)?;
            let group = |label| {
                GraphGroup::new(
                    label,
                    subjects.iter().filter(|g| g.label() == label).cloned().collect(),
                )
            };
            Mined::P2 {
                s,
                sum_a: build_summary(&group(Label::A)?, mode)?,
                sum_b: build_summary(&group(Label::B)?, mode)?,
            }
        }
    })
}

/// Model score on a `GRID_SIZE x GRID_SIZE` grid spanning the feature bounding box.
fn boundary_grid(table: &FeatureTable, model: &crate::pipeline::ClassifierModel) -> String {
    let bounds = |j: usize| {
        let values = table.rows.iter().map(|r| r.point()[j]);
        let lo = values.clone().fold(f64::INFINITY, f64::min);
        let hi = values.fold(f64::NEG_INFINITY, f64::max);
        if hi > lo {
            (lo, hi)
        } else {
            (lo - 1.0, hi + 1.0)
        }
    };
    let ((x0, x1), (y0, y1)) = (bounds(0), bounds(1));
    let step = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (GRID_SIZE - 1) as f64;
    let mut out = String::from("x,y,score\n");
    for i in 0..GRID_SIZE {
        let x = step(x0, x1, i);
        for j in 0..GRID_SIZE {
            let y = step(y0, y1, j);
            let _ = writeln!(out, "{},{},{}", fmt_f64(x), fmt_f64(y), fmt_f64(model.decision([x, y])));
        }
    }
    out
}

fn format_rules(table: &FeatureTable, rules: &[crate::pipeline::Rule]) -> String {
    let [x, y] = &table.axes;
    let mut out = format!(
        "# scheme {}: x = {} ({} vertices), y = {} ({} vertices)\n",
        table.scheme, x.name, x.set_size, y.name, y.set_size
    );
    for rule in rules {
        let _ = writeln!(out, "\n{}\taccuracy {:.4}\n{}", rule.compact, rule.accuracy, rule.sentence);
    }
    out
}

fn cmd_classify(args: &ClassifyArgs) -> Result<Outputs> {
    let data = load_inputs(&args.input)?;
    let subjects: Vec<ObservationGraph> =
        data.a.members().iter().chain(data.b.members()).cloned().collect();
    let labels: Vec<Label> = subjects.iter().map(ObservationGraph::label).collect();
    let miner = Miner {
        args,
        subjects: &subjects,
        cfg: args.solver.config(),
        mode: args.input.summary_mode(),
    };
    let eval_cfg = EvalConfig {
        repetitions: args.repetitions,
        rng_seed: args.solver.seed,
        svm: SvmParams {
            epochs: args.epochs,
            standardize: !args.no_standardize,
            quadratic: args.quadratic,
        },
        ..EvalConfig::default()
    };

    let all: Vec<usize> = (0..subjects.len()).collect();
    let precomputed = !args.results.is_empty();
    let full = if precomputed {
        load_results(&args.results, args.scheme, &subjects, miner.mode)?
    } else {
        miner.mine(&all)?
    };
    let table = full.features(&subjects)?;

    let report = if precomputed || args.fixed_contrast {
        let points = table.points();
        let protocol = if precomputed { "precomputed-contrast" } else { "fixed-contrast" };
        evaluate_protocol(&labels, &eval_cfg, protocol, |_| Ok(points.clone()))?
    } else {
        evaluate_protocol(&labels, &eval_cfg, "leak-free", |train| {
            Ok(miner.mine(train)?.features(&subjects)?.points())
        })?
    };
    let rules = extract_rules(&table)?;
    let model = fit_display_model(&table, &eval_cfg)?;

    let mut out = Outputs::default();
    for r in full.results() {
        out.alpha_resolved.insert(r.variant.to_string(), r.alpha_resolved);
        let named = name_vertices(r.clone(), data.names.as_deref());
        out.add_json(&format!("contrast_{}.json", r.variant), &named)?;
    }
    out.add("features.csv", table.to_csv());
    out.add_json("eval.json", &report)?;
    out.add("rules.txt", format_rules(&table, &rules));
    out.add("boundary_grid.csv", boundary_grid(&table, &model));
    println!(
        "{} accuracy {:.4} +/- {:.4} over {} repetitions ({})",
        table.scheme, report.mean, report.stdev, args.repetitions, report.protocol
    );
    Ok(out)
}

fn cmd_synth(args: &SynthArgs) -> Result<Outputs> {
    let (a, b, truth) = if args.fixture {
        let (a, b) = fixture_f2();
        (a, b, None)
    } else {
        let spec = PlantedSpec {
            n: args.n,
            k: args.k,
            group_size_a: args.group_size_a,
            group_size_b: args.group_size_b,
            p_in_a: args.p_in_a,
            p_in_b: args.p_in_b,
            p_bg: args.p_bg,
            rng_seed: args.seed,
        };
        let (a, b) = planted_dataset(&spec)?;
        (a, b, Some(spec))
    };
    let mut out = Outputs::default();
    for group in [&a, &b] {
        let mut rows = Vec::with_capacity(group.len());
        for g in group.members() {
            let rel = PathBuf::from("graphs").join(format!("{}.txt", g.subject_id()));
            out.add(rel.clone(), format_edge_list(g));
            rows.push(ManifestRow {
                subject_id: g.subject_id().to_string(),
                path: rel,
                label: g.label(),
            });
        }
        out.add(format!("group_{}.tsv", group.label()), format_manifest(&rows, Path::new("")));
    }
    if let Some(spec) = truth {
        #[derive(Serialize)]
        struct GroundTruth<'a> {
            planted_set: Vec<usize>,
            spec: &'a PlantedSpec,
        }
        out.add_json(
            "ground_truth.json",
            &GroundTruth {
                planted_set: spec.planted_set(),
                spec: &spec,
            },
        )?;
    }
    println!("wrote {} + {} subjects", a.len(), b.len());
    Ok(out)
}
