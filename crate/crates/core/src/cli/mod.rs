//! The `ctqw` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 input or parse error,
//! 3 numerical failure.

pub mod output;
pub mod svg;

use std::ffi::OsString;
use std::fmt;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::datasets::{self, GeneratorParams, LabeledNetwork};
use crate::error::Error;
use crate::experiments::{self, SweepResult};
use crate::walk::{Generator, InitialState, WalkConfig};
use output::{csv_bytes, fmt_sig12, manifest_path, to_json_bytes, OutputBatch, RunManifest};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_NUMERICAL,
            message: message.into(),
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::input(format!("{}: {e}", path.display()))
    }

    /// Errors raised while computing: numerical ones map to 3, the rest to 2.
    fn compute(e: Error) -> Self {
        if e.is_numerical() {
            CliError::numerical(e.to_string())
        } else {
            CliError::input(e.to_string())
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Debug, Parser)]
#[command(name = "ctqw", version, about = "Continuous-time quantum walks on networks with link failures")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree centrality next to time-averaged population for every node.
    Centrality(CentralityArgs),
    /// Remove each edge in turn and record how populations move.
    Sweep(SweepArgs),
    /// Node-affinity matrix (CSV) and heatmap (SVG) from a sweep.
    Affinity(AffinityArgs),
    /// Adjacency vs. Laplacian walk populations from one localized start.
    Compare(CompareArgs),
    /// Community coherence of adjacency vs. Laplacian sweeps against ground-truth labels.
    Contrast(ContrastArgs),
    /// Planted-partition benchmark graph with a labels file.
    Generate(GenerateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dataset {
    Karate,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Embedded network.
    #[arg(long, conflicts_with = "input")]
    pub dataset: Option<Dataset>,
    /// Edge-list file: one `u v` pair per line, `#` comments.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Labels file (`node_id community_id` per line) for `--input`.
    #[arg(long, requires = "input")]
    pub labels: Option<PathBuf>,
}

impl InputArgs {
    fn load(&self) -> Result<LabeledNetwork, CliError> {
        match (&self.dataset, &self.input) {
            (Some(Dataset::Karate), _) => Ok(datasets::karate_club()),
            (None, Some(path)) => {
                let mut net = datasets::load_edge_list(path).map_err(|e| CliError::input(e.to_string()))?;
                if let Some(lp) = &self.labels {
                    let labels = datasets::load_labels(lp, net.graph.node_count())
                        .map_err(|e| CliError::input(e.to_string()))?;
                    net.labels = Some(labels);
                }
                Ok(net)
            }
            (None, None) => Err(CliError::usage("one of --dataset or --input is required")),
        }
    }

    fn record(&self, m: &mut RunManifest) {
        match (&self.dataset, &self.input) {
            (Some(Dataset::Karate), _) => {
                m.set("dataset", "karate");
            }
            (None, Some(path)) => {
                m.set("input", path.display().to_string());
                if let Some(lp) = &self.labels {
                    m.set("labels", lp.display().to_string());
                }
            }
            _ => {}
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct TimeArgs {
    /// Total time: a number or a multiple of pi such as `100pi`.
    #[arg(long = "T", value_name = "T", default_value = "100pi", value_parser = parse_time)]
    pub total_time: f64,
    /// Sampling step as a fraction of T.
    #[arg(long = "dt-frac", default_value_t = 1e-3)]
    pub dt_frac: f64,
}

#[derive(Debug, Clone, Args)]
pub struct WalkArgs {
    #[command(flatten)]
    pub time: TimeArgs,
    /// `adjacency` or `laplacian`.
    #[arg(long, default_value = "adjacency")]
    pub generator: Generator,
    /// `uniform` or a 1-based node number for a localized start.
    #[arg(long, default_value = "uniform")]
    pub initial: InitialState,
}

impl TimeArgs {
    fn config(&self) -> Result<WalkConfig, CliError> {
        let cfg = WalkConfig {
            total_time: self.total_time,
            dt: self.total_time * self.dt_frac,
            ..WalkConfig::default()
        };
        cfg.validate().map_err(|e| CliError::usage(e.to_string()))?;
        Ok(cfg)
    }
}

impl WalkArgs {
    fn config(&self, n: usize) -> Result<WalkConfig, CliError> {
        let cfg = self
            .time
            .config()?
            .with_generator(self.generator)
            .with_initial(self.initial);
        if let InitialState::Localized(j) = cfg.initial {
            if j > n {
                return Err(CliError::usage(format!("initial node {j} out of range 1..={n}")));
            }
        }
        Ok(cfg)
    }
}

fn record_config(m: &mut RunManifest, cfg: &WalkConfig) {
    m.set("T", cfg.total_time)
        .set("dt", cfg.dt)
        .set("generator", cfg.generator.to_string())
        .set("initial", cfg.initial.to_string());
}

/// Accepts `314.159`, `100pi`, `pi`, `2.5pi` or `100π`.
pub fn parse_time(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let (number, scale) = match s.strip_suffix("pi").or_else(|| s.strip_suffix('π')) {
        Some(prefix) => (prefix.trim(), std::f64::consts::PI),
        None => (s, 1.0),
    };
    let base = if number.is_empty() {
        1.0
    } else {
        number.parse::<f64>().map_err(|_| format!("invalid time '{s}'"))?
    };
    Ok(base * scale)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct CentralityArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Defaults to the output file's extension, else csv.
    #[arg(long)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Directory for baseline.csv, deltas.csv, signs.csv and sweep.json.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Worker threads; output does not depend on this.
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AffinityArgs {
    /// A sweep.json written by `ctqw sweep`.
    #[arg(long, conflicts_with_all = ["dataset", "input"])]
    pub sweep: Option<PathBuf>,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub walk: WalkArgs,
    /// Affinity CSV path.
    #[arg(long, short)]
    pub output: PathBuf,
    /// Heatmap path; defaults to the CSV path with an .svg extension.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Reference node for the reported bipartition.
    #[arg(long, default_value_t = 1)]
    pub reference: usize,
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub time: TimeArgs,
    /// 1-based start node.
    #[arg(long)]
    pub start: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ContrastArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub time: TimeArgs,
    /// 1-based start node of the Laplacian walk.
    #[arg(long, default_value_t = 1)]
    pub start: usize,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(short = 'c', long)]
    pub communities: usize,
    /// Nodes per community.
    #[arg(short = 's', long)]
    pub size: usize,
    #[arg(long)]
    pub pin: f64,
    #[arg(long)]
    pub pout: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Edge-list path.
    #[arg(long, short)]
    pub output: PathBuf,
    /// Labels path; defaults to the edge-list path with a .labels extension.
    #[arg(long)]
    pub labels: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

pub fn execute(command: Command) -> Result<(), CliError> {
    let started = Instant::now();
    match command {
        Command::Centrality(a) => cmd_centrality(&a, started),
        Command::Sweep(a) => cmd_sweep(&a, started),
        Command::Affinity(a) => cmd_affinity(&a, started),
        Command::Compare(a) => cmd_compare(&a, started),
        Command::Contrast(a) => cmd_contrast(&a, started),
        Command::Generate(a) => cmd_generate(&a, started),
    }
}

fn node_header(first: &[&str], n: usize) -> Vec<String> {
    first
        .iter()
        .map(|s| s.to_string())
        .chain((1..=n).map(|j| j.to_string()))
        .collect()
}

/// Writes `bytes` to `output` with a timed manifest sidecar, or to stdout
/// with the manifest on stderr.
fn emit(output: Option<&Path>, bytes: Vec<u8>, manifest: &RunManifest, started: Instant) -> Result<(), CliError> {
    let timed = manifest.timed(started.elapsed().as_secs_f64());
    match output {
        Some(path) => {
            let mut batch = OutputBatch::default();
            batch.add(path, bytes);
            batch.add(manifest_path(path), to_json_bytes(&timed)?);
            batch.commit()
        }
        None => {
            std::io::stdout()
                .write_all(&bytes)
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
            eprintln!("{}", serde_json::to_string(&timed).unwrap_or_default());
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct CentralityDocument<'a> {
    manifest: &'a RunManifest,
    report: &'a experiments::CentralityReport,
}

pub fn cmd_centrality(a: &CentralityArgs, started: Instant) -> Result<(), CliError> {
    let net = a.input.load()?;
    let cfg = a.walk.config(net.graph.node_count())?;
    let mut manifest = RunManifest::new("centrality");
    a.input.record(&mut manifest);
    record_config(&mut manifest, &cfg);

    let report = experiments::centrality_population_report(&net.graph, &cfg).map_err(CliError::compute)?;
    match report.spearman_rho {
        Some(rho) => eprintln!("spearman_rho = {rho}"),
        None => eprintln!("spearman_rho = undefined (constant column)"),
    }

    let format = a.format.unwrap_or_else(|| match &a.output {
        Some(p) if p.extension().is_some_and(|e| e == "json") => Format::Json,
        _ => Format::Csv,
    });
    let bytes = match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .rows
                .iter()
                .map(|r| vec![r.node.to_string(), fmt_sig12(r.centrality), fmt_sig12(r.population)])
                .collect();
            csv_bytes(&["node".into(), "centrality".into(), "population".into()], &rows)
        }
        Format::Json => to_json_bytes(&CentralityDocument {
            manifest: &manifest,
            report: &report,
        })?,
    };
    emit(a.output.as_deref(), bytes, &manifest, started)
}

/// Contents of `sweep.json`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepDocument {
    pub manifest: RunManifest,
    pub result: SweepResult,
}

fn run_sweep(
    net: &LabeledNetwork,
    cfg: &WalkConfig,
    jobs: Option<usize>,
) -> Result<SweepResult, CliError> {
    if net.graph.edge_count() == 0 {
        return Err(CliError::input("graph has no edges to remove"));
    }
    let result = match jobs {
        Some(0) => return Err(CliError::usage("--jobs must be at least 1")),
        Some(j) => experiments::edge_removal_sweep_with_jobs(&net.graph, cfg, j),
        None => experiments::edge_removal_sweep(&net.graph, cfg),
    };
    result.map_err(CliError::compute)
}

pub fn cmd_sweep(a: &SweepArgs, started: Instant) -> Result<(), CliError> {
    let net = a.input.load()?;
    let cfg = a.walk.config(net.graph.node_count())?;
    let mut manifest = RunManifest::new("sweep");
    a.input.record(&mut manifest);
    record_config(&mut manifest, &cfg);

    let result = run_sweep(&net, &cfg, a.jobs)?;
    let n = result.node_count();

    let baseline_rows: Vec<Vec<String>> = result
        .baseline
        .as_slice()
        .iter()
        .enumerate()
        .map(|(j, p)| vec![(j + 1).to_string(), fmt_sig12(*p)])
        .collect();
    let prefix = |r: &experiments::EdgeRemoval| {
        vec![r.edge.to_string(), r.pair.0.to_string(), r.pair.1.to_string()]
    };
    let delta_rows: Vec<Vec<String>> = result
        .per_edge
        .iter()
        .map(|r| {
            let mut row = prefix(r);
            row.extend(r.deltas.iter().map(|d| fmt_sig12(*d)));
            row
        })
        .collect();
    let sign_rows: Vec<Vec<String>> = result
        .per_edge
        .iter()
        .zip(&result.flow_signs)
        .map(|(r, signs)| {
            let mut row = prefix(r);
            row.extend(signs.iter().map(|s| s.to_string()));
            row
        })
        .collect();
    let header = node_header(&["edge", "u", "v"], n);

    let near_zero: usize = result.per_edge.iter().map(|r| r.near_zero_count).sum();
    let bridges = result.per_edge.iter().filter(|r| r.disconnected).count();
    eprintln!(
        "swept {} edges over {} nodes ({} disconnecting, {} near-zero deltas)",
        result.edge_count(),
        n,
        bridges,
        near_zero
    );

    let doc = SweepDocument {
        manifest: manifest.clone(),
        result,
    };
    output::ensure_dir(&a.out_dir)?;
    let mut batch = OutputBatch::default();
    batch.add(
        a.out_dir.join("baseline.csv"),
        csv_bytes(&["node".into(), "population".into()], &baseline_rows),
    );
    batch.add(a.out_dir.join("deltas.csv"), csv_bytes(&header, &delta_rows));
    batch.add(a.out_dir.join("signs.csv"), csv_bytes(&header, &sign_rows));
    batch.add(a.out_dir.join("sweep.json"), to_json_bytes(&doc)?);
    let mut timed = manifest.timed(started.elapsed().as_secs_f64());
    if let Some(j) = a.jobs {
        timed.set("jobs", j);
    }
    batch.add(a.out_dir.join("manifest.json"), to_json_bytes(&timed)?);
    batch.commit()
}

pub fn cmd_affinity(a: &AffinityArgs, started: Instant) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("affinity");
    let sweep = match &a.sweep {
        Some(path) => {
            let text = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
            let doc: SweepDocument = serde_json::from_slice(&text)
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            manifest.set("sweep", path.display().to_string());
            manifest.parameters.extend(doc.manifest.parameters);
            doc.result
        }
        None => {
            let net = a.input.load()?;
            let cfg = a.walk.config(net.graph.node_count())?;
            a.input.record(&mut manifest);
            record_config(&mut manifest, &cfg);
            run_sweep(&net, &cfg, a.jobs)?
        }
    };
    let n = sweep.node_count();
    if sweep.flow_signs.iter().any(|row| row.len() != n) || sweep.flow_signs.is_empty() {
        return Err(CliError::input("sweep has no removals or inconsistent flow signs"));
    }
    if a.reference == 0 || a.reference > n {
        return Err(CliError::usage(format!("reference node {} out of range 1..={n}", a.reference)));
    }
    manifest.set("reference", a.reference);

    let alpha = experiments::affinity(&sweep);
    let split = experiments::partition_by_reference(&alpha, a.reference).map_err(CliError::compute)?;
    let with = split.with_reference.iter().filter(|&&w| w).count();
    eprintln!(
        "reference {}: {} nodes with, {} against ({} ambiguous)",
        a.reference,
        with,
        n - with,
        split.ambiguous
    );

    let rows: Vec<Vec<String>> = (0..n)
        .map(|i| {
            std::iter::once((i + 1).to_string())
                .chain(alpha.matrix().row(i).iter().map(|v| fmt_sig12(*v)))
                .collect()
        })
        .collect();
    let svg_path = a.svg.clone().unwrap_or_else(|| a.output.with_extension("svg"));
    let heatmap = svg::render_heatmap(alpha.matrix(), &format!("node affinity, {n} nodes"));

    let mut batch = OutputBatch::default();
    batch.add(&a.output, csv_bytes(&node_header(&["node"], n), &rows));
    batch.add(&svg_path, heatmap.into_bytes());
    batch.add(
        manifest_path(&a.output),
        to_json_bytes(&manifest.timed(started.elapsed().as_secs_f64()))?,
    );
    batch.commit()
}

pub fn cmd_compare(a: &CompareArgs, started: Instant) -> Result<(), CliError> {
    let net = a.input.load()?;
    let n = net.graph.node_count();
    if a.start == 0 || a.start > n {
        return Err(CliError::usage(format!("start node {} out of range 1..={n}", a.start)));
    }
    let cfg = a.time.config()?;
    let mut manifest = RunManifest::new("compare");
    a.input.record(&mut manifest);
    manifest.set("T", cfg.total_time).set("dt", cfg.dt).set("start", a.start);

    let cmp = experiments::compare_generators(&net.graph, a.start, &cfg).map_err(CliError::compute)?;
    eprintln!("max_gap = {}", cmp.max_gap);
    let rows: Vec<Vec<String>> = cmp
        .adjacency
        .as_slice()
        .iter()
        .zip(cmp.laplacian.as_slice())
        .enumerate()
        .map(|(j, (pa, pl))| {
            vec![(j + 1).to_string(), fmt_sig12(*pa), fmt_sig12(*pl), fmt_sig12(pa - pl)]
        })
        .collect();
    let header = ["node", "pop_adjacency", "pop_laplacian", "diff"].map(String::from);
    emit(a.output.as_deref(), csv_bytes(&header, &rows), &manifest, started)
}

#[derive(Serialize)]
struct ContrastDocument<'a> {
    manifest: &'a RunManifest,
    report: &'a experiments::ResponseContrast,
}

pub fn cmd_contrast(a: &ContrastArgs, started: Instant) -> Result<(), CliError> {
    let net = a.input.load()?;
    let n = net.graph.node_count();
    if a.start == 0 || a.start > n {
        return Err(CliError::usage(format!("start node {} out of range 1..={n}", a.start)));
    }
    let labels = net
        .labels
        .as_deref()
        .ok_or_else(|| CliError::usage("a community labeling is required (--labels or --dataset)"))?;
    let cfg = a.time.config()?;
    let mut manifest = RunManifest::new("contrast");
    a.input.record(&mut manifest);
    manifest.set("T", cfg.total_time).set("dt", cfg.dt).set("start", a.start);

    let report = experiments::laplacian_sweep_noncorrelation(&net.graph, a.start, &cfg, Some(labels))
        .map_err(CliError::compute)?;
    eprintln!(
        "within-community sign agreement: adjacency {} vs laplacian {}",
        report.adjacency.overall, report.laplacian.overall
    );
    let bytes = to_json_bytes(&ContrastDocument {
        manifest: &manifest,
        report: &report,
    })?;
    emit(a.output.as_deref(), bytes, &manifest, started)
}

pub fn cmd_generate(a: &GenerateArgs, started: Instant) -> Result<(), CliError> {
    let params = GeneratorParams {
        communities: a.communities,
        size: a.size,
        p_in: a.pin,
        p_out: a.pout,
        seed: a.seed,
    };
    let generated = datasets::planted_partition(&params).map_err(|e| CliError::usage(e.to_string()))?;
    if !generated.connected {
        eprintln!(
            "warning: no connected draw within {} retries; writing the last (seed {})",
            datasets::MAX_RETRIES,
            generated.seed_used
        );
    }

    let mut manifest = RunManifest::new("generate");
    manifest
        .set("communities", a.communities)
        .set("size", a.size)
        .set("p_in", a.pin)
        .set("p_out", a.pout)
        .set("seed", a.seed)
        .set("seed_used", generated.seed_used)
        .set("connected", generated.connected);

    let graph = &generated.network.graph;
    let mut edges = format!(
        "# {}\n",
        serde_json::to_string(&manifest).map_err(|e| CliError::numerical(e.to_string()))?
    );
    edges.push_str(&graph.to_edge_list());
    let labels = generated.network.labels.as_deref().unwrap_or_default();
    let labels_path = a.labels.clone().unwrap_or_else(|| a.output.with_extension("labels"));

    let mut batch = OutputBatch::default();
    batch.add(&a.output, edges.into_bytes());
    batch.add(&labels_path, datasets::labels_to_text(labels).into_bytes());
    batch.add(
        manifest_path(&a.output),
        to_json_bytes(&manifest.timed(started.elapsed().as_secs_f64()))?,
    );
    batch.commit()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn time_values() {
        assert_eq!(parse_time("100pi").unwrap(), 100.0 * PI);
        assert_eq!(parse_time("pi").unwrap(), PI);
        assert_eq!(parse_time("2.5π").unwrap(), 2.5 * PI);
        assert_eq!(parse_time("314.159265358979").unwrap(), 314.159265358979);
        assert!(parse_time("ten").is_err());
    }

    #[test]
    fn defaults_mirror_reference_setting() {
        let cli = Cli::try_parse_from(["ctqw", "centrality", "--dataset", "karate"]).unwrap();
        let Command::Centrality(a) = cli.command else { panic!() };
        let cfg = a.walk.config(34).unwrap();
        assert_eq!(cfg.total_time, 100.0 * PI);
        assert!((cfg.dt - 0.1 * PI).abs() < 1e-15);
        assert_eq!(cfg.generator, Generator::Adjacency);
        assert_eq!(cfg.initial, InitialState::Uniform);
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["ctqw", "centrality", "--dataset", "nope"]), EXIT_USAGE);
        assert_eq!(run(["ctqw", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["ctqw", "--version"]), 0);
    }
}
