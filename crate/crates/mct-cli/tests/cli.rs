//! End-to-end tests of the command-line binary: exit codes, determinism and
//! output formats.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_mct")
}

fn data(p: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(p)
}

fn tmpdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "mct-cli-{}-{}",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .unwrap()
            .as_nanos()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary should run")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn detect_gn_on_karate_with_ground_truth() {
    let edges = data("karate.tsv");
    let truth = data("karate_truth.json");
    let out = run(&[
        "detect",
        "--algorithm",
        "gn",
        "--edges",
        edges.to_str().unwrap(),
        "--undirected",
        "--ground-truth",
        truth.to_str().unwrap(),
        "--clusters",
        "2",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("dataset,algorithm,params,Q,NMI,Rand,Jaccard"));
    let row = text.lines().nth(1).unwrap();
    let cols: Vec<&str> = row.split(',').collect();
    assert_eq!(cols[0], "karate");
    assert_eq!(cols[1], "gn");
    assert_eq!(cols[7], "2", "expected 2 communities: {row}");
}

#[test]
fn detect_mct_without_corpora_exits_2() {
    let edges = data("karate.tsv");
    let out = run(&[
        "detect",
        "--algorithm",
        "mct",
        "--edges",
        edges.to_str().unwrap(),
        "--undirected",
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("corpora required unless --structural-only"));
}

#[test]
fn detect_same_seed_writes_identical_partition() {
    let dir = tmpdir();
    let edges = data("dolphins.tsv");
    for name in ["a", "b"] {
        let prefix = dir.join(name);
        let out = run(&[
            "detect",
            "--algorithm",
            "mct2",
            "--edges",
            edges.to_str().unwrap(),
            "--undirected",
            "--structural-only",
            "--seed",
            "7",
            "--out",
            prefix.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let a = std::fs::read(dir.join("a.partition.json")).unwrap();
    let b = std::fs::read(dir.join("b.partition.json")).unwrap();
    assert_eq!(a, b, "same command and seed must be byte-identical");
}

#[test]
fn missing_input_exits_2() {
    let out = run(&[
        "detect",
        "--algorithm",
        "lp",
        "--edges",
        "/nonexistent/edges.tsv",
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn generate_lfr_roundtrips_through_evaluate() {
    let dir = tmpdir();
    let prefix = dir.join("snd");
    let out = run(&[
        "generate-lfr",
        "--n",
        "200",
        "--c-min",
        "20",
        "--c-max",
        "100",
        "--mu",
        "0.1",
        "--seed",
        "3",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let edges = dir.join("snd.edges.tsv");
    let truth = dir.join("snd.truth.json");
    assert!(edges.exists() && truth.exists());

    let detect_out = dir.join("lp");
    let out = run(&[
        "detect",
        "--algorithm",
        "lp",
        "--edges",
        edges.to_str().unwrap(),
        "--undirected",
        "--ground-truth",
        truth.to_str().unwrap(),
        "--seed",
        "3",
        "--out",
        detect_out.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));

    let out = run(&[
        "evaluate",
        "--edges",
        edges.to_str().unwrap(),
        "--undirected",
        "--partition",
        dir.join("lp.partition.json").to_str().unwrap(),
        "--ground-truth",
        truth.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    // NMI column present and high on an easy benchmark
    let nmi: f64 = row.split(',').nth(4).unwrap().parse().unwrap();
    assert!(nmi > 0.8, "unexpectedly low NMI: {row}");
}

#[test]
fn sweep_fsim_tau_needs_edges() {
    let out = run(&["sweep", "--kind", "fsim-tau"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--edges"));
}

#[test]
fn sweep_lfr_mu_default_grid_is_sixteen_rows() {
    let dir = tmpdir();
    let out_file = dir.join("metrics.csv");
    // default grids: eight mixing values x {gn, lp}
    let out = run(&[
        "sweep",
        "--kind",
        "lfr-mu",
        "--n",
        "120",
        "--seed",
        "1",
        "--out",
        out_file.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = std::fs::read_to_string(&out_file).unwrap();
    // header + 8 x 2 cells
    assert_eq!(text.lines().count(), 17, "{text}");
    assert!(text.lines().nth(1).unwrap().starts_with("lfr-mu=0.01,gn"));
    assert!(text.lines().nth(2).unwrap().starts_with("lfr-mu=0.01,lp"));
}

#[test]
fn snapshot_dyads_counts() {
    let dir = tmpdir();
    let snap = dir.join("snap.json");
    std::fs::write(
        &snap,
        r#"{"users": {
            "a": {"friends": ["b", "c"]},
            "b": {"friends": ["a"]},
            "c": {"friends": []}
        }}"#,
    )
    .unwrap();
    let out = run(&["snapshot-dyads", "--snapshot", snap.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("dyads=1 one_edge=1"));
}

#[test]
fn ecdf_reaches_one_at_max() {
    let dir = tmpdir();
    let edges = dir.join("edges.tsv");
    std::fs::write(&edges, "a\tb\nb\tc\n").unwrap();
    let out = run(&["ecdf", "--edges", edges.to_str().unwrap(), "--undirected"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("metric,group,value,probability"));
    // every (metric, group) block ends at probability 1.0
    let mut last_probability = BTreeMapLike::new();
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        last_probability.set(
            format!("{}-{}", cols[0], cols[1]),
            cols[3].parse::<f64>().unwrap(),
        );
    }
    for (key, p) in last_probability.entries {
        assert!((p - 1.0).abs() < 1e-9, "{key} ends at {p}");
    }
}

/// Tiny insertion-ordered map to keep the last probability per block.
struct BTreeMapLike {
    entries: Vec<(String, f64)>,
}

impl BTreeMapLike {
    fn new() -> Self {
        BTreeMapLike {
            entries: Vec::new(),
        }
    }
    fn set(&mut self, key: String, value: f64) {
        if let Some(e) = self.entries.iter_mut().find(|(k, _)| *k == key) {
            e.1 = value;
        } else {
            self.entries.push((key, value));
        }
    }
}

#[test]
fn detect_mct_joint_with_tweets() {
    let dir = tmpdir();
    let edges = dir.join("edges.tsv");
    let tweets = dir.join("tweets.jsonl");
    // two 3-node blocks plus one cross tie; topics disagree across blocks
    let mut edge_lines = String::new();
    for b in 0..2 {
        for i in 0..3 {
            for j in (i + 1)..3 {
                edge_lines.push_str(&format!("b{b}n{i}\tb{b}n{j}\n"));
            }
        }
    }
    edge_lines.push_str("b0n0\tb1n0\n");
    std::fs::write(&edges, edge_lines).unwrap();
    let words = [["solar", "panel", "battery"], ["guitar", "chord", "stage"]];
    let mut tweet_lines = String::new();
    for (b, w) in words.iter().enumerate() {
        for i in 0..3 {
            for t in 0..30 {
                tweet_lines.push_str(&format!(
                    "{{\"node_id\": \"b{b}n{i}\", \"text\": \"{} {} {}\"}}\n",
                    w[t % 3],
                    w[(t + 1) % 3],
                    w[(t + 2) % 3]
                ));
            }
        }
    }
    std::fs::write(&tweets, tweet_lines).unwrap();
    let prefix = dir.join("joint");
    let out = run(&[
        "detect",
        "--algorithm",
        "mct",
        "--edges",
        edges.to_str().unwrap(),
        "--tweets",
        tweets.to_str().unwrap(),
        "--undirected",
        "--topics",
        "2",
        "--seed",
        "9",
        "--out",
        prefix.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let partition: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("joint.partition.json")).unwrap())
            .unwrap();
    let comms = partition["communities"].as_array().unwrap();
    assert!(comms.len() >= 2, "cross-topic tie should be cut: {comms:?}");
}

#[test]
fn detect_spectral_and_nmf_run() {
    let edges = data("karate.tsv");
    for algo in ["spectral", "nmf"] {
        let out = run(&[
            "detect",
            "--algorithm",
            algo,
            "--edges",
            edges.to_str().unwrap(),
            "--undirected",
            "--clusters",
            "2",
        ]);
        assert!(out.status.success(), "{algo}: {}", stderr(&out));
        let text = stdout(&out);
        let row = text.lines().nth(1).unwrap();
        assert!(row.starts_with("karate,"), "{row}");
    }
}

#[test]
fn fsim_reports_accuracy_against_own_dyads() {
    let edges = data("karate.tsv");
    let out = run(&[
        "fsim",
        "--edges",
        edges.to_str().unwrap(),
        "--undirected",
        "--with-accuracy",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("related="));
    assert!(text.contains("accuracy=1.0000"), "{text}");
}

#[test]
fn ingest_reports_statistics() {
    let edges = data("dolphins.tsv");
    let out = run(&["ingest", "--edges", edges.to_str().unwrap(), "--undirected"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("nodes=62"));
    assert!(text.contains("reciprocal=159"));
}
