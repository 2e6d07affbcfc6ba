//! Command-line surface for the community-detection toolkit: dataset
//! ingestion, synthetic benchmark generation, reciprocity prediction,
//! detection, parameter sweeps, evaluation and ECDF tables.
//!
//! Data goes to files or standard output; logs go to standard error (set
//! MCT_LOG for verbose progress). Exit codes: 0 ok, 2 usage or validation
//! error, 1 internal error.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use mct_core::baselines::{girvan_newman, label_propagation, BaselineConfig, GnTarget};
use mct_core::ingest::NetworkSource;
use mct_core::ingest::{
    generate_lfr, generate_ppm, read_dataset, read_partition_json, search_dyads, write_edges_tsv,
    write_partition_json, write_profiles_json, LfrConfig, PpmConfig, SnapshotSource,
};
use mct_core::mct::{detect_mct, detect_mct2, MctConfig, MctMode};
use mct_core::metrics::{ecdf, evaluate, MetricsReport};
use mct_core::model::{undirected_view, Category, NetworkData, Partition};
use mct_core::nmf::{build_size_matrix, factors_to_partition, nmf_joint, NmfProblem};
use mct_core::reciprocity::{f_sim, prediction_accuracy, ReciprocityConfig};
use mct_core::spectral::{spectral_cluster, SpectralConfig};
use mct_core::textual::TextConfig;
use mct_core::Error;

#[derive(Parser)]
#[command(name = "mct", version, about = "Bi-modal community detection toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate and normalize a dataset, reporting basic statistics.
    Ingest(IngestArgs),
    /// Generate an LFR benchmark graph with its planted partition.
    GenerateLfr(GenerateLfrArgs),
    /// Generate a planted-partition-model graph.
    GeneratePpm(GeneratePpmArgs),
    /// Classify pairs of a snapshot into reciprocal dyads and one-way edges.
    SnapshotDyads(SnapshotDyadsArgs),
    /// Predict reciprocal ties from profile features.
    Fsim(FsimArgs),
    /// Run a community detector and write partition plus metrics.
    Detect(DetectArgs),
    /// Run a parameter sweep, one row per grid cell.
    Sweep(SweepArgs),
    /// Evaluate an existing partition against a network and ground truth.
    Evaluate(EvaluateArgs),
    /// Emit ECDF tables of reciprocity against profile features.
    Ecdf(EcdfArgs),
}

#[derive(Args)]
struct DatasetArgs {
    /// Edge list (`src<TAB>dst` per line, # comments).
    #[arg(long)]
    edges: PathBuf,
    /// Profile file (JSON array); degree-derived profiles are used when
    /// absent.
    #[arg(long)]
    profiles: Option<PathBuf>,
    /// Tweets file (JSON lines).
    #[arg(long)]
    tweets: Option<PathBuf>,
    /// Treat each edge line as undirected (store both arcs).
    #[arg(long)]
    undirected: bool,
}

impl DatasetArgs {
    fn read(&self) -> mct_core::Result<NetworkData> {
        read_dataset(
            &self.edges,
            self.profiles.as_deref(),
            self.tweets.as_deref(),
            self.undirected,
        )
    }

    fn name(&self) -> String {
        self.edges
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "dataset".to_string())
    }
}

#[derive(Args)]
struct IngestArgs {
    #[command(flatten)]
    dataset: DatasetArgs,
    /// Write normalized copies with this prefix.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateLfrArgs {
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 1.5)]
    gamma: f64,
    #[arg(long = "mean-degree", default_value_t = 15.0)]
    mean_degree: f64,
    #[arg(long = "community-exponent", default_value_t = 0.8)]
    community_exponent: f64,
    #[arg(long = "c-min", default_value_t = 30)]
    c_min: usize,
    #[arg(long = "c-max", default_value_t = 300)]
    c_max: usize,
    #[arg(long, default_value_t = 0.1)]
    mu: f64,
    #[arg(long = "max-degree")]
    max_degree: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output prefix; writes `<out>.edges.tsv`, `<out>.profiles.json` and
    /// `<out>.truth.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GeneratePpmArgs {
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    k: usize,
    #[arg(long = "p-in", default_value_t = 0.3)]
    p_in: f64,
    #[arg(long = "p-out", default_value_t = 0.01)]
    p_out: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SnapshotDyadsArgs {
    /// Snapshot file ({"users": {id: {"friends": [...], ...}}}).
    #[arg(long)]
    snapshot: PathBuf,
    /// Seed users (comma separated); all snapshot users when omitted.
    #[arg(long, value_delimiter = ',')]
    seeds: Vec<String>,
    /// Output JSON with the dyad and one-edge sets.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FsimArgs {
    #[command(flatten)]
    dataset: DatasetArgs,
    #[arg(long, default_value_t = 0.5)]
    tau: f64,
    #[arg(long, default_value_t = 1.0 / 3.0)]
    zeta: f64,
    /// Score predictions against the network's reciprocal dyads.
    #[arg(long = "with-accuracy")]
    with_accuracy: bool,
    /// Output JSON with related pairs and probabilities.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    Mct,
    Mct2,
    Gn,
    Lp,
    Spectral,
    Nmf,
}

impl Algorithm {
    fn as_str(&self) -> &'static str {
        match self {
            Algorithm::Mct => "mct",
            Algorithm::Mct2 => "mct2",
            Algorithm::Gn => "gn",
            Algorithm::Lp => "lp",
            Algorithm::Spectral => "spectral",
            Algorithm::Nmf => "nmf",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Args)]
struct DetectArgs {
    #[command(flatten)]
    dataset: DatasetArgs,
    #[arg(long, value_enum)]
    algorithm: Algorithm,
    /// Ground-truth partition for NMI/Rand/Jaccard columns.
    #[arg(long = "ground-truth")]
    ground_truth: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    tau: f64,
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    #[arg(long, default_value_t = 20)]
    topics: usize,
    /// Cluster count (M for mct2, k for spectral/nmf, fixed k for gn).
    #[arg(long)]
    clusters: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Skip the textual stage even when tweets are present.
    #[arg(long = "structural-only")]
    structural_only: bool,
    /// Stopword list file (one token per line) replacing the built-in set.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Output prefix; writes `<out>.partition.json` and `<out>.metrics.csv`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SweepKind {
    /// LFR mixing-parameter sweep across detectors.
    LfrMu,
    /// Reciprocity threshold sweep with prediction accuracy.
    FsimTau,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    kind: SweepKind,
    /// Mixing parameters for lfr-mu sweeps.
    #[arg(long = "mu-grid", value_delimiter = ',',
          default_values_t = vec![0.01, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 1.0])]
    mu_grid: Vec<f64>,
    /// Detectors for lfr-mu sweeps.
    #[arg(long, value_delimiter = ',', value_enum,
          default_values_t = vec![Algorithm::Gn, Algorithm::Lp])]
    algorithms: Vec<Algorithm>,
    /// Thresholds for fsim-tau sweeps.
    #[arg(long = "tau-grid", value_delimiter = ',',
          default_values_t = vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])]
    tau_grid: Vec<f64>,
    /// Dataset for fsim-tau sweeps.
    #[arg(long)]
    edges: Option<PathBuf>,
    #[arg(long)]
    profiles: Option<PathBuf>,
    #[arg(long)]
    undirected: bool,
    /// LFR node count for lfr-mu sweeps.
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    dataset: DatasetArgs,
    #[arg(long)]
    partition: PathBuf,
    #[arg(long = "ground-truth")]
    ground_truth: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EcdfArgs {
    #[command(flatten)]
    dataset: DatasetArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn verbose() -> bool {
    std::env::var("MCT_LOG")
        .map(|v| !v.is_empty())
        .unwrap_or(false)
}

macro_rules! vlog {
    ($($arg:tt)*) => {
        if verbose() {
            eprintln!($($arg)*);
        }
    };
}

fn write_or_print(path: Option<&Path>, content: &str) -> mct_core::Result<()> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| Error::Io {
            path: p.display().to_string(),
            source: e,
        }),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_ingest(args: &IngestArgs) -> mct_core::Result<()> {
    let net = args.dataset.read()?;
    let view = undirected_view(&net);
    println!(
        "nodes={} edges={} reciprocal={} one_way={} profiles={} corpora={}",
        net.node_count(),
        net.edge_count(),
        view.reciprocal.len(),
        view.one_edge.len(),
        net.has_profiles(),
        net.has_corpora(),
    );
    if let Some(prefix) = &args.out {
        let edges_out = with_suffix(prefix, "edges.tsv");
        write_edges_tsv(&edges_out, &net)?;
        let profiles: Vec<_> = net.profiles().values().cloned().collect();
        let profiles_out = with_suffix(prefix, "profiles.json");
        write_profiles_json(&profiles_out, &profiles)?;
        vlog!(
            "wrote {} and {}",
            edges_out.display(),
            profiles_out.display()
        );
    }
    Ok(())
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.file_name().unwrap_or_default().to_os_string();
    name.push(".");
    name.push(suffix);
    prefix.with_file_name(name)
}

fn write_generated(out: &Path, net: &NetworkData, truth: &Partition) -> mct_core::Result<()> {
    write_edges_tsv(&with_suffix(out, "edges.tsv"), net)?;
    let profiles: Vec<_> = net.profiles().values().cloned().collect();
    write_profiles_json(&with_suffix(out, "profiles.json"), &profiles)?;
    write_partition_json(&with_suffix(out, "truth.json"), truth)?;
    println!(
        "generated nodes={} edges={} communities={}",
        net.node_count(),
        net.edge_count(),
        truth.len()
    );
    Ok(())
}

fn cmd_generate_lfr(args: &GenerateLfrArgs) -> mct_core::Result<()> {
    let cfg = LfrConfig {
        n: args.n,
        gamma: args.gamma,
        mean_degree: args.mean_degree,
        community_exponent: args.community_exponent,
        c_min: args.c_min,
        c_max: args.c_max,
        mu: args.mu,
        max_degree: args.max_degree,
        seed: args.seed,
    };
    let (net, truth) = generate_lfr(&cfg)?;
    write_generated(&args.out, &net, &truth)
}

fn cmd_generate_ppm(args: &GeneratePpmArgs) -> mct_core::Result<()> {
    let cfg = PpmConfig {
        n: args.n,
        k: args.k,
        p_in: args.p_in,
        p_out: args.p_out,
        seed: args.seed,
    };
    let (net, truth) = generate_ppm(&cfg)?;
    write_generated(&args.out, &net, &truth)
}

fn cmd_snapshot_dyads(args: &SnapshotDyadsArgs) -> mct_core::Result<()> {
    let source = SnapshotSource::from_path(&args.snapshot)?;
    let seeds = if args.seeds.is_empty() {
        source.ids()
    } else {
        args.seeds.clone()
    };
    let (dyads, one_edge) = search_dyads(&source, &seeds)?;
    println!("dyads={} one_edge={}", dyads.len(), one_edge.len());
    if args.out.is_some() {
        let payload = serde_json::json!({
            "dyads": dyads.iter().map(|p| [&p.0, &p.1]).collect::<Vec<_>>(),
            "one_edge": one_edge.iter().map(|(a, b)| [a, b]).collect::<Vec<_>>(),
        });
        write_or_print(args.out.as_deref(), &format!("{payload:#}\n"))?;
    }
    Ok(())
}

fn cmd_fsim(args: &FsimArgs) -> mct_core::Result<()> {
    let net = args.dataset.read()?;
    let cfg = ReciprocityConfig {
        tau: args.tau,
        zeta: args.zeta,
        ..Default::default()
    };
    let result = f_sim(&net, &cfg)?;
    println!(
        "pairs={} related={} unrelated={}",
        result.prob.len(),
        result.related.len(),
        result.unrelated.len()
    );
    if args.with_accuracy {
        let truth = undirected_view(&net).reciprocal;
        let report = prediction_accuracy(&result, &truth)?;
        println!(
            "accuracy={:.4} precision={:.4} f1={:.4} hits={} truth={}",
            report.accuracy, report.precision, report.f1, report.hits, report.truth
        );
    }
    if args.out.is_some() {
        let payload = serde_json::json!({
            "tau": args.tau,
            "zeta": args.zeta,
            "related": result.related.iter().map(|p| [&p.0, &p.1]).collect::<Vec<_>>(),
            "probabilities": result
                .prob
                .iter()
                .map(|(p, v)| serde_json::json!([&p.0, &p.1, v]))
                .collect::<Vec<_>>(),
        });
        write_or_print(args.out.as_deref(), &format!("{payload:#}\n"))?;
    }
    Ok(())
}

fn run_detector(args: &DetectArgs, net: &NetworkData) -> mct_core::Result<Partition> {
    let recip_cfg = ReciprocityConfig {
        tau: args.tau,
        ..Default::default()
    };
    let mut text_cfg = TextConfig {
        tau: args.tau,
        seed: args.seed,
        ..TextConfig::default().with_topics(args.topics)
    };
    if let Some(path) = &args.stopwords {
        text_cfg.stopwords = mct_core::textual::load_stopwords(path)?;
    }
    let mct_cfg = MctConfig {
        tau: args.tau,
        lambda: args.lambda,
        max_clusters: args.clusters,
        seed: args.seed,
        mode: if args.structural_only {
            MctMode::StructuralOnly
        } else {
            MctMode::Joint
        },
        ..Default::default()
    };
    match args.algorithm {
        Algorithm::Mct => detect_mct(net, &mct_cfg, &recip_cfg, &text_cfg),
        Algorithm::Mct2 => detect_mct2(net, &mct_cfg, &recip_cfg, &text_cfg),
        Algorithm::Gn => {
            let cfg = BaselineConfig {
                seed: args.seed,
                gn_target: match args.clusters {
                    Some(k) => GnTarget::FixedK(k),
                    None => GnTarget::ModularityPeak,
                },
                ..Default::default()
            };
            girvan_newman(net, &cfg)
        }
        Algorithm::Lp => {
            let cfg = BaselineConfig {
                seed: args.seed,
                ..Default::default()
            };
            label_propagation(net, &cfg)
        }
        Algorithm::Spectral => {
            let structural = f_sim(net, &recip_cfg)?;
            let cfg = SpectralConfig {
                k: args.clusters,
                seed: args.seed,
                ..Default::default()
            };
            spectral_cluster(&structural, &cfg)
        }
        Algorithm::Nmf => {
            let bands = 4;
            let data = build_size_matrix(net, bands)?;
            let k = args.clusters.unwrap_or(bands).min(data.rows.min(bands));
            let structural = f_sim(net, &recip_cfg)?;
            let problem = NmfProblem::new(data, k)?
                .with_joint(args.lambda.min(0.99), structural.adjacency.clone())?;
            let outcome = nmf_joint(&problem, 500, 1e-6, args.seed)?;
            factors_to_partition(&outcome.p, "nmf")
        }
    }
}

fn cmd_detect(args: &DetectArgs) -> mct_core::Result<()> {
    let net = args.dataset.read()?;
    if args.algorithm == Algorithm::Mct && !args.structural_only && !net.has_corpora() {
        return Err(Error::validation(
            "corpora required unless --structural-only",
        ));
    }
    let truth = match &args.ground_truth {
        Some(p) => Some(read_partition_json(p)?),
        None => None,
    };
    let started = Instant::now();
    let partition = run_detector(args, &net)?;
    let runtime = started.elapsed().as_millis();
    vlog!(
        "{} produced {} communities",
        args.algorithm.as_str(),
        partition.len()
    );
    let report = evaluate(
        &args.dataset.name(),
        &net,
        &partition,
        truth.as_ref(),
        runtime,
    )?;
    let csv = format!("{}\n{}\n", MetricsReport::CSV_HEADER, report.csv_row());
    match &args.out {
        Some(prefix) => {
            write_partition_json(&with_suffix(prefix, "partition.json"), &partition)?;
            let metrics_path = with_suffix(prefix, "metrics.csv");
            std::fs::write(&metrics_path, &csv).map_err(|e| Error::Io {
                path: metrics_path.display().to_string(),
                source: e,
            })?;
            println!("{}", report.csv_row());
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> mct_core::Result<()> {
    match args.kind {
        SweepKind::LfrMu => {
            if args.mu_grid.is_empty() || args.algorithms.is_empty() {
                return Err(Error::validation("empty sweep grid"));
            }
            let mut rows = vec![MetricsReport::CSV_HEADER.to_string()];
            let mut succeeded = 0usize;
            for &mu in &args.mu_grid {
                let defaults = LfrConfig::default();
                let c_max = defaults.c_max.min(args.n);
                let cfg = LfrConfig {
                    n: args.n,
                    mu,
                    seed: args.seed,
                    c_max,
                    c_min: defaults.c_min.min(c_max),
                    ..defaults
                };
                let generated = generate_lfr(&cfg);
                for algo in &args.algorithms {
                    let cell = format!("lfr-mu={mu}/{}", algo.as_str());
                    let (net, planted) = match &generated {
                        Ok(pair) => (&pair.0, &pair.1),
                        Err(e) => {
                            eprintln!("cell {cell} failed: generation: {e}");
                            continue;
                        }
                    };
                    let started = Instant::now();
                    let base = BaselineConfig {
                        seed: args.seed,
                        ..Default::default()
                    };
                    let result = match algo {
                        Algorithm::Gn => girvan_newman(net, &base),
                        Algorithm::Lp => label_propagation(net, &base),
                        other => Err(Error::validation(format!(
                            "sweep supports gn and lp, got {}",
                            other.as_str()
                        ))),
                    };
                    match result.and_then(|part| {
                        evaluate(
                            &format!("lfr-mu={mu}"),
                            net,
                            &part,
                            Some(planted),
                            started.elapsed().as_millis(),
                        )
                    }) {
                        Ok(report) => {
                            rows.push(report.csv_row());
                            succeeded += 1;
                        }
                        Err(e) => eprintln!("cell {cell} failed: {e}"),
                    }
                }
            }
            if succeeded == 0 {
                return Err(Error::validation("every sweep cell failed"));
            }
            write_or_print(args.out.as_deref(), &(rows.join("\n") + "\n"))
        }
        SweepKind::FsimTau => {
            if args.tau_grid.is_empty() {
                return Err(Error::validation("empty sweep grid"));
            }
            let edges = args
                .edges
                .as_ref()
                .ok_or_else(|| Error::validation("fsim-tau sweep needs --edges"))?;
            let net = read_dataset(edges, args.profiles.as_deref(), None, args.undirected)?;
            let truth = undirected_view(&net).reciprocal;
            let mut rows = vec!["tau,accuracy,precision,f1,predicted,truth".to_string()];
            for &tau in &args.tau_grid {
                let cfg = ReciprocityConfig {
                    tau,
                    ..Default::default()
                };
                let result = f_sim(&net, &cfg)?;
                let report = prediction_accuracy(&result, &truth)?;
                rows.push(format!(
                    "{tau},{:.6},{:.6},{:.6},{},{}",
                    report.accuracy, report.precision, report.f1, report.predicted, report.truth
                ));
            }
            write_or_print(args.out.as_deref(), &(rows.join("\n") + "\n"))
        }
    }
}

fn cmd_evaluate(args: &EvaluateArgs) -> mct_core::Result<()> {
    let net = args.dataset.read()?;
    let partition = read_partition_json(&args.partition)?;
    partition.validate_over(net.nodes())?;
    let truth = match &args.ground_truth {
        Some(p) => Some(read_partition_json(p)?),
        None => None,
    };
    let report = evaluate(&args.dataset.name(), &net, &partition, truth.as_ref(), 0)?;
    let csv = format!("{}\n{}\n", MetricsReport::CSV_HEADER, report.csv_row());
    write_or_print(args.out.as_deref(), &csv)
}

fn cmd_ecdf(args: &EcdfArgs) -> mct_core::Result<()> {
    let net = args.dataset.read()?;
    if !net.has_profiles() {
        return Err(Error::validation("profiles required for ecdf"));
    }
    let view = undirected_view(&net);
    let mut reciprocal_count: std::collections::BTreeMap<&str, usize> =
        net.nodes().iter().map(|n| (n.as_str(), 0)).collect();
    for pair in &view.reciprocal {
        *reciprocal_count.get_mut(pair.0.as_str()).unwrap() += 1;
        *reciprocal_count.get_mut(pair.1.as_str()).unwrap() += 1;
    }
    let category_of = |id: &str| net.profile(id).map(|p| p.category);
    let mut rows = vec!["metric,group,value,probability".to_string()];
    for group in ["all", "verified", "unverified"] {
        let ids: Vec<&str> = net
            .nodes()
            .iter()
            .map(|s| s.as_str())
            .filter(|id| match group {
                "verified" => category_of(id) == Some(Category::Verified),
                "unverified" => category_of(id) == Some(Category::Unverified),
                _ => true,
            })
            .collect();
        if ids.is_empty() {
            continue;
        }
        let metrics: [(&str, Vec<f64>); 3] = [
            (
                "reciprocal_ties",
                ids.iter().map(|id| reciprocal_count[id] as f64).collect(),
            ),
            (
                "indegree",
                ids.iter()
                    .map(|id| net.profile(id).unwrap().indegree as f64)
                    .collect(),
            ),
            (
                "outdegree",
                ids.iter()
                    .map(|id| net.profile(id).unwrap().outdegree as f64)
                    .collect(),
            ),
        ];
        for (metric, values) in &metrics {
            for (value, probability) in ecdf(values) {
                rows.push(format!("{metric},{group},{value},{probability:.6}"));
            }
        }
    }
    write_or_print(args.out.as_deref(), &(rows.join("\n") + "\n"))
}

fn run() -> mct_core::Result<()> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Ingest(args) => cmd_ingest(args),
        Command::GenerateLfr(args) => cmd_generate_lfr(args),
        Command::GeneratePpm(args) => cmd_generate_ppm(args),
        Command::SnapshotDyads(args) => cmd_snapshot_dyads(args),
        Command::Fsim(args) => cmd_fsim(args),
        Command::Detect(args) => cmd_detect(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Ecdf(args) => cmd_ecdf(args),
    }
}

fn main() {
    match run() {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(if e.is_usage() { 2 } else { 1 });
        }
    }
}
