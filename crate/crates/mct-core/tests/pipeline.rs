//! File-format and end-to-end pipeline tests over the shipped datasets.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use mct_core::ingest::{
    read_dataset, read_edges_tsv, read_partition_json, read_profiles_json, read_tweets_jsonl,
    write_edges_tsv, write_partition_json, write_profiles_json, write_tweets_jsonl,
};
use mct_core::mct::{detect_mct2, MctConfig, MctMode};
use mct_core::metrics::UndirectedGraph;
use mct_core::model::{build_network, undirected_view, Category, NodeProfile, Partition};
use mct_core::reciprocity::ReciprocityConfig;
use mct_core::textual::TextConfig;

fn data(p: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(p)
}

fn tmpdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!(
        "mct-pipeline-{}-{}",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .unwrap()
            .as_nanos()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn karate_dataset_counts() {
    let net = read_dataset(&data("karate.tsv"), None, None, true).unwrap();
    assert_eq!(net.node_count(), 34);
    let graph = UndirectedGraph::from_network(&net);
    assert_eq!(graph.edge_count(), 78);
    // stored undirected: every tie reciprocal
    let view = undirected_view(&net);
    assert_eq!(view.reciprocal.len(), 78);
    assert!(view.one_edge.is_empty());
    assert!(net.has_profiles()); // degree-derived
    let truth = read_partition_json(&data("karate_truth.json")).unwrap();
    assert_eq!(truth.len(), 2);
    truth.validate_over(net.nodes()).unwrap();
}

#[test]
fn dolphins_dataset_counts() {
    let net = read_dataset(&data("dolphins.tsv"), None, None, true).unwrap();
    assert_eq!(net.node_count(), 62);
    let graph = UndirectedGraph::from_network(&net);
    assert_eq!(graph.edge_count(), 159);
    let truth = read_partition_json(&data("dolphins_truth.json")).unwrap();
    assert_eq!(truth.len(), 2);
    let mut sizes: Vec<usize> = truth.communities.iter().map(|c| c.len()).collect();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![20, 42]);
}

#[test]
fn empty_edge_file_gives_isolated_nodes() {
    let dir = tmpdir();
    let edges = dir.join("edges.tsv");
    std::fs::write(&edges, "# no edges\n").unwrap();
    let profiles_path = dir.join("profiles.json");
    write_profiles_json(
        &profiles_path,
        &[
            NodeProfile::new("a", 1, 2, Category::Verified),
            NodeProfile::new("b", 0, 0, Category::Unverified),
            NodeProfile::new("c", 5, 5, Category::Unverified),
        ],
    )
    .unwrap();
    let net = read_dataset(&edges, Some(&profiles_path), None, false).unwrap();
    assert_eq!(net.node_count(), 3);
    assert_eq!(net.edge_count(), 0);
}

#[test]
fn malformed_edge_line_reports_line_number() {
    let dir = tmpdir();
    let edges = dir.join("edges.tsv");
    std::fs::write(&edges, "a\tb\nbroken-line\n").unwrap();
    let err = read_edges_tsv(&edges, false).unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("line 2"), "{msg}");
}

#[test]
fn edges_roundtrip_stable() {
    let dir = tmpdir();
    let net = build_network(
        vec![],
        vec!["1".into(), "2".into(), "30".into()],
        vec![
            ("1".into(), "2".into()),
            ("2".into(), "1".into()),
            ("2".into(), "30".into()),
        ],
        None,
    )
    .unwrap();
    let path = dir.join("edges.tsv");
    write_edges_tsv(&path, &net).unwrap();
    let edges = read_edges_tsv(&path, false).unwrap();
    assert_eq!(edges.len(), 3);
    let reread = build_network(vec![], net.nodes().to_vec(), edges, None).unwrap();
    let a: Vec<_> = net.edges().cloned().collect();
    let b: Vec<_> = reread.edges().cloned().collect();
    assert_eq!(a, b);
}

#[test]
fn partition_roundtrip_identity() {
    let dir = tmpdir();
    let mut params = BTreeMap::new();
    params.insert("tau".to_string(), "0.5".to_string());
    let part = Partition::new(
        "mct",
        params,
        vec![
            vec!["a".into(), "b".into()],
            vec!["c".into()],
            vec!["d".into(), "e".into(), "f".into()],
        ],
    )
    .unwrap();
    let path = dir.join("partition.json");
    write_partition_json(&path, &part).unwrap();
    let reread = read_partition_json(&path).unwrap();
    assert_eq!(part, reread);
}

#[test]
fn partition_write_is_deterministic() {
    let dir = tmpdir();
    let part = Partition::new(
        "x",
        BTreeMap::new(),
        vec![vec!["b".into(), "a".into()], vec!["c".into()]],
    )
    .unwrap();
    let p1 = dir.join("p1.json");
    let p2 = dir.join("p2.json");
    write_partition_json(&p1, &part).unwrap();
    write_partition_json(&p2, &part).unwrap();
    assert_eq!(
        std::fs::read(&p1).unwrap(),
        std::fs::read(&p2).unwrap(),
        "identical partitions must serialize byte-identically"
    );
}

#[test]
fn profiles_roundtrip_and_integer_ids() {
    let dir = tmpdir();
    let path = dir.join("profiles.json");
    // integer ids are accepted and normalized to strings
    std::fs::write(
        &path,
        r#"[{"id": 7, "indegree": 3, "outdegree": 4, "verified": true}]"#,
    )
    .unwrap();
    let profiles = read_profiles_json(&path).unwrap();
    assert_eq!(profiles[0].id, "7");
    assert_eq!(profiles[0].category, Category::Verified);

    write_profiles_json(&path, &profiles).unwrap();
    let reread = read_profiles_json(&path).unwrap();
    assert_eq!(profiles, reread);
}

#[test]
fn tweets_roundtrip() {
    let dir = tmpdir();
    let path = dir.join("tweets.jsonl");
    let mut corpora: BTreeMap<String, Vec<String>> = BTreeMap::new();
    corpora.insert(
        "u1".into(),
        vec!["first tweet".into(), "second tweet".into()],
    );
    corpora.insert("u2".into(), vec!["hello world".into()]);
    write_tweets_jsonl(&path, &corpora).unwrap();
    let reread = read_tweets_jsonl(&path).unwrap();
    assert_eq!(corpora, reread);
}

#[test]
fn tweets_accept_numeric_node_ids() {
    let dir = tmpdir();
    let path = dir.join("tweets.jsonl");
    std::fs::write(&path, "{\"node_id\": 42, \"text\": \"hi there\"}\n").unwrap();
    let corpora = read_tweets_jsonl(&path).unwrap();
    assert!(corpora.contains_key("42"));
}

#[test]
fn detect_is_pure_function_of_inputs() {
    let net = read_dataset(&data("karate.tsv"), None, None, true).unwrap();
    let cfg = MctConfig {
        mode: MctMode::StructuralOnly,
        seed: 3,
        ..Default::default()
    };
    let a = detect_mct2(
        &net,
        &cfg,
        &ReciprocityConfig::default(),
        &TextConfig::default(),
    )
    .unwrap();
    let b = detect_mct2(
        &net,
        &cfg,
        &ReciprocityConfig::default(),
        &TextConfig::default(),
    )
    .unwrap();
    assert_eq!(a, b);
    let dir = tmpdir();
    let (p1, p2) = (dir.join("a.json"), dir.join("b.json"));
    write_partition_json(&p1, &a).unwrap();
    write_partition_json(&p2, &b).unwrap();
    assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
}

#[test]
fn joint_detection_over_text_corpus() {
    // two structural blocks; text agrees within blocks and disagrees across,
    // so the joint detector keeps the blocks apart
    let mut profiles = Vec::new();
    let mut edges = Vec::new();
    let mut corpora: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let words_a = ["solar", "panel", "battery", "grid"];
    let words_b = ["guitar", "chord", "melody", "stage"];
    for b in 0..2 {
        for i in 0..4 {
            let id = format!("b{b}n{i}");
            profiles.push(NodeProfile::new(
                id.clone(),
                100 * (b as u64 + 1),
                100 * (b as u64 + 1),
                Category::Unverified,
            ));
            let words: &[&str] = if b == 0 { &words_a } else { &words_b };
            corpora.insert(
                id,
                (0..40)
                    .map(|j| {
                        format!(
                            "{} {} {}",
                            words[j % 4],
                            words[(j + 1) % 4],
                            words[(j + 2) % 4]
                        )
                    })
                    .collect(),
            );
        }
        for i in 0..4 {
            for j in (i + 1)..4 {
                edges.push((format!("b{b}n{i}"), format!("b{b}n{j}")));
                edges.push((format!("b{b}n{j}"), format!("b{b}n{i}")));
            }
        }
    }
    // one cross-block tie that textual dissimilarity must cut
    edges.push(("b0n0".into(), "b1n0".into()));
    edges.push(("b1n0".into(), "b0n0".into()));
    let net = build_network(profiles, vec![], edges, Some(corpora)).unwrap();

    let cfg = MctConfig {
        mode: MctMode::Joint,
        seed: 5,
        ..Default::default()
    };
    let text_cfg = TextConfig {
        gibbs_iters: 300,
        burn_in: 100,
        seed: 5,
        ..TextConfig::default().with_topics(2)
    };
    let part =
        mct_core::mct::detect_mct(&net, &cfg, &ReciprocityConfig::default(), &text_cfg).unwrap();
    assert_eq!(part.len(), 2, "expected the two planted blocks: {part:?}");
    let labels = part.labels();
    assert_ne!(labels["b0n0"], labels["b1n0"]);
    for i in 1..4 {
        assert_eq!(labels[format!("b0n{i}").as_str()], labels["b0n0"]);
        assert_eq!(labels[format!("b1n{i}").as_str()], labels["b1n0"]);
    }
}
