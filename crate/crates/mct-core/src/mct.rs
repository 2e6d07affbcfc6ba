//! Microcosm detection: the two-stage pipeline combining the structural
//! (reciprocity) and textual (topic) components.
//!
//! Two detectors are provided. `detect_mct` extracts the connected components
//! of the dual-threshold graph: an edge survives only when both the
//! reciprocity probability and the textual similarity of the pair reach tau.
//! `detect_mct2` grows a fixed number of clusters from random seeds by mean
//! joint similarity, then merges clusters while modularity on the structural
//! tie graph improves. The candidate pair set is the network's ties when the
//! network has edges, and the structurally related pairs otherwise, so the
//! detectors operate on sub-networks rather than on the complete pair graph.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metrics::{modularity, UndirectedGraph};
use crate::model::{tie_pairs, NetworkData, Pair, Partition};
use crate::reciprocity::{f_sim, ReciprocityConfig, StructuralResult};
use crate::textual::{text_sim, TextConfig, TextualResult};

/// Detection mode: use both modalities or the structural one alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MctMode {
    Joint,
    StructuralOnly,
}

#[derive(Debug, Clone)]
pub struct MctConfig {
    /// Shared threshold for both modalities.
    pub tau: f64,
    /// Balance between structural and textual similarity in psi.
    pub lambda: f64,
    /// Optional grid for lambda tuning.
    pub lambda_grid: Vec<f64>,
    /// Cluster count M for the seeded detector; derived from the node count
    /// when absent.
    pub max_clusters: Option<usize>,
    pub max_iters: usize,
    pub seed: u64,
    pub mode: MctMode,
    /// Require every pair inside a community to pass the thresholds instead
    /// of mere connectivity.
    pub strict_cliques: bool,
    /// Merge clusters while modularity on the tie graph improves.
    pub merge_by_modularity: bool,
}

impl Default for MctConfig {
    fn default() -> Self {
        MctConfig {
            tau: 0.5,
            lambda: 0.5,
            lambda_grid: vec![0.1, 0.3, 0.5, 0.7, 0.9],
            max_clusters: None,
            max_iters: 100,
            seed: 0,
            mode: MctMode::Joint,
            strict_cliques: false,
            merge_by_modularity: true,
        }
    }
}

impl MctConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(Error::validation("lambda must lie in (0,1)"));
        }
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(Error::validation("tau must lie in (0,1)"));
        }
        if self.max_clusters == Some(0) {
            return Err(Error::validation("max_clusters must be at least 1"));
        }
        Ok(())
    }

    /// Default cluster count: one cluster per six nodes, clamped to [2, 20].
    pub fn clusters_for(&self, n: usize) -> usize {
        self.max_clusters
            .unwrap_or_else(|| (n.div_ceil(6)).clamp(2, 20))
            .min(n.max(1))
    }
}

/// Joint similarity psi of a node pair: lambda-weighted combination of the
/// structural score (the reciprocity probability) and the textual affinity.
/// In structural-only mode psi is the structural score alone. Lambda = 1 is
/// permitted here for internal use even though configs keep it inside (0,1).
pub fn joint_similarity(
    a: &str,
    b: &str,
    structural: &StructuralResult,
    textual: Option<&TextualResult>,
    cfg: &MctConfig,
) -> Result<f64> {
    let s = structural.probability(a, b);
    match cfg.mode {
        MctMode::StructuralOnly => {
            s.ok_or_else(|| Error::validation(format!("pair ({a},{b}) not covered structurally")))
        }
        MctMode::Joint => {
            let t = textual.and_then(|t| t.similarity(a, b));
            match (s, t) {
                (Some(s), Some(t)) => Ok(cfg.lambda * s + (1.0 - cfg.lambda) * t),
                (Some(s), None) if cfg.lambda >= 1.0 => Ok(s),
                _ => Err(Error::validation(format!(
                    "pair ({a},{b}) not covered by both modalities"
                ))),
            }
        }
    }
}

/// The candidate pair set the detectors operate on: the network's undirected
/// ties when edges exist, otherwise all structurally related pairs.
fn candidate_pairs(net: &NetworkData, structural: &StructuralResult) -> BTreeSet<Pair> {
    if net.edge_count() > 0 {
        tie_pairs(net)
    } else {
        structural.related.clone()
    }
}

/// A pair passes when its reciprocity probability reaches tau and, in joint
/// mode, its textual similarity does too. Pairs with nodes excluded from the
/// textual stage fail in joint mode.
fn pair_passes(
    pair: &Pair,
    structural: &StructuralResult,
    textual: Option<&TextualResult>,
    cfg: &MctConfig,
) -> bool {
    let s = structural.probability(&pair.0, &pair.1).unwrap_or(0.0);
    if s < cfg.tau {
        return false;
    }
    match (cfg.mode, textual) {
        (MctMode::StructuralOnly, _) => true,
        (MctMode::Joint, Some(t)) => t.similarity(&pair.0, &pair.1).unwrap_or(0.0) >= cfg.tau,
        (MctMode::Joint, None) => false,
    }
}

fn run_pipeline(
    net: &NetworkData,
    cfg: &MctConfig,
    recip_cfg: &ReciprocityConfig,
    text_cfg: &TextConfig,
) -> Result<(StructuralResult, Option<TextualResult>)> {
    cfg.validate()?;
    let structural = f_sim(net, recip_cfg)?;
    let textual = match cfg.mode {
        MctMode::StructuralOnly => None,
        MctMode::Joint => {
            if !net.has_corpora() {
                return Err(Error::validation(
                    "corpora required unless --structural-only",
                ));
            }
            let mut candidates: Vec<String> = structural.related_nodes().into_iter().collect();
            if candidates.is_empty() {
                candidates = net.nodes().to_vec();
            }
            let mut tc = text_cfg.clone();
            tc.tau = cfg.tau;
            Some(text_sim(&candidates, net, &tc)?)
        }
    };
    Ok((structural, textual))
}

/// Microcosm detection by dual-threshold connectivity (the pipeline of
/// f-sim followed by text-sim over the structurally related nodes). Output
/// communities are the connected components of the graph whose edges are the
/// candidate pairs passing both thresholds; in strict-clique mode components
/// are additionally split until every internal pair passes.
pub fn detect_mct(
    net: &NetworkData,
    cfg: &MctConfig,
    recip_cfg: &ReciprocityConfig,
    text_cfg: &TextConfig,
) -> Result<Partition> {
    let (structural, textual) = run_pipeline(net, cfg, recip_cfg, text_cfg)?;
    detect_with_results(net, &structural, textual.as_ref(), cfg)
}

/// Component extraction from precomputed modality results; exposed so callers
/// with custom structural results (or tests forcing a pair set) can reuse it.
pub fn detect_with_results(
    net: &NetworkData,
    structural: &StructuralResult,
    textual: Option<&TextualResult>,
    cfg: &MctConfig,
) -> Result<Partition> {
    cfg.validate()?;
    let pairs = candidate_pairs(net, structural);
    let passing: BTreeSet<Pair> = pairs
        .iter()
        .filter(|p| pair_passes(p, structural, textual, cfg))
        .cloned()
        .collect();
    let graph = UndirectedGraph::new(structural.nodes.clone(), &passing);
    let mut comms: Vec<Vec<String>> = graph
        .components()
        .into_iter()
        .map(|c| graph.ids_of(&c))
        .collect();
    if cfg.strict_cliques {
        comms = split_to_cliques(comms, structural, textual, cfg);
    }
    let mut params = BTreeMap::new();
    params.insert("tau".to_string(), format!("{}", cfg.tau));
    params.insert(
        "mode".to_string(),
        match cfg.mode {
            MctMode::Joint => "joint".to_string(),
            MctMode::StructuralOnly => "structural_only".to_string(),
        },
    );
    Partition::new("mct", params, comms)
}

/// Greedily peel maximal pass-complete groups out of each component.
fn split_to_cliques(
    comms: Vec<Vec<String>>,
    structural: &StructuralResult,
    textual: Option<&TextualResult>,
    cfg: &MctConfig,
) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    for comm in comms {
        let mut remaining: Vec<String> = comm;
        while !remaining.is_empty() {
            let anchor = remaining.remove(0);
            let mut group = vec![anchor];
            let mut rest = Vec::new();
            for node in remaining {
                let ok = group.iter().all(|m| {
                    pair_passes(
                        &Pair::new(m.clone(), node.clone()),
                        structural,
                        textual,
                        cfg,
                    )
                });
                if ok {
                    group.push(node);
                } else {
                    rest.push(node);
                }
            }
            out.push(group);
            remaining = rest;
        }
    }
    out
}

/// Seeded intra-cluster similarity detection: initialize up to M clusters
/// from rounds of four random seeds (seeds whose pairwise psi reaches tau
/// share a cluster), then sweep the nodes in sorted order, assigning each to
/// the cluster with the highest mean psi to its members, updating means after
/// each assignment, until a sweep changes nothing or max_iters is reached.
/// Nodes with zero similarity to every cluster stay unassigned and come out
/// as singleton communities. A final greedy pass merges clusters while
/// modularity on the structural tie graph improves (when enabled).
pub fn detect_mct2(
    net: &NetworkData,
    cfg: &MctConfig,
    recip_cfg: &ReciprocityConfig,
    text_cfg: &TextConfig,
) -> Result<Partition> {
    let (structural, textual) = run_pipeline(net, cfg, recip_cfg, text_cfg)?;
    detect_mct2_with_results(net, &structural, textual.as_ref(), cfg)
}

/// MCT-2 from precomputed modality results.
#[allow(clippy::needless_range_loop)]
pub fn detect_mct2_with_results(
    net: &NetworkData,
    structural: &StructuralResult,
    textual: Option<&TextualResult>,
    cfg: &MctConfig,
) -> Result<Partition> {
    cfg.validate()?;
    let pairs = candidate_pairs(net, structural);
    let nodes = structural.nodes.clone();
    let index: BTreeMap<&str, usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let n = nodes.len();
    if let Some(m) = cfg.max_clusters {
        if m > n {
            return Err(Error::validation(format!(
                "max_clusters {m} exceeds candidate count {n}"
            )));
        }
    }
    let m = cfg.clusters_for(n);

    // psi over candidate pairs only; everything else scores zero, so the
    // detector grows communities along the (sub-)network rather than the
    // complete profile-similarity graph
    let mut psi: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for pair in &pairs {
        let (i, j) = (index[pair.0.as_str()], index[pair.1.as_str()]);
        let s = structural.probability(&pair.0, &pair.1).unwrap_or(0.0);
        let value = match (cfg.mode, textual) {
            (MctMode::StructuralOnly, _) => s,
            (MctMode::Joint, Some(t)) => {
                let tv = t.similarity(&pair.0, &pair.1).unwrap_or(0.0);
                cfg.lambda * s + (1.0 - cfg.lambda) * tv
            }
            (MctMode::Joint, None) => s,
        };
        psi.insert((i.min(j), i.max(j)), value);
    }
    let psi_of = |a: usize, b: usize| -> f64 {
        if a == b {
            return 0.0;
        }
        psi.get(&(a.min(b), a.max(b))).copied().unwrap_or(0.0)
    };

    // cluster initialization from rounds of four random seeds
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut unclustered: Vec<usize> = (0..n).collect();
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    while clusters.len() < m && !unclustered.is_empty() {
        unclustered.shuffle(&mut rng);
        let take = unclustered.len().min(4);
        let seeds: Vec<usize> = unclustered.drain(..take).collect();
        // merge seeds whose pairwise psi reaches tau
        let mut groups: Vec<Vec<usize>> = seeds.into_iter().map(|s| vec![s]).collect();
        let mut merged = true;
        while merged {
            merged = false;
            'outer: for i in 0..groups.len() {
                for j in (i + 1)..groups.len() {
                    let close = groups[i]
                        .iter()
                        .any(|&a| groups[j].iter().any(|&b| psi_of(a, b) >= cfg.tau));
                    if close {
                        let moved = groups.remove(j);
                        groups[i].extend(moved);
                        merged = true;
                        break 'outer;
                    }
                }
            }
        }
        for g in groups {
            if clusters.len() < m {
                clusters.push(g);
            } else {
                unclustered.extend(g);
            }
        }
    }

    let mut member: Vec<Option<usize>> = vec![None; n];
    for (ci, c) in clusters.iter().enumerate() {
        for &v in c {
            member[v] = Some(ci);
        }
    }

    // assignment sweeps in sorted node order, means updated after each move
    for _ in 0..cfg.max_iters.max(1) {
        let mut changed = false;
        for v in 0..n {
            let mut best: Option<(usize, f64)> = None;
            for (ci, c) in clusters.iter().enumerate() {
                let mut sum = 0.0;
                let mut count = 0usize;
                for &u in c {
                    if u != v {
                        sum += psi_of(v, u);
                        count += 1;
                    }
                }
                if count == 0 {
                    continue;
                }
                let mean = sum / count as f64;
                if mean > 0.0 && best.is_none_or(|(_, b)| mean > b) {
                    best = Some((ci, mean));
                }
            }
            if let Some((target, _)) = best {
                if member[v] != Some(target) {
                    if let Some(cur) = member[v] {
                        clusters[cur].retain(|&u| u != v);
                    }
                    clusters[target].push(v);
                    member[v] = Some(target);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    let mut comms: Vec<Vec<String>> = clusters
        .iter()
        .filter(|c| !c.is_empty())
        .map(|c| c.iter().map(|&v| nodes[v].clone()).collect())
        .collect();
    for (v, m) in member.iter().enumerate() {
        if m.is_none() {
            comms.push(vec![nodes[v].clone()]);
        }
    }

    if cfg.merge_by_modularity && comms.len() > 1 {
        let tie_graph = UndirectedGraph::new(nodes.clone(), &pairs);
        if tie_graph.edge_count() > 0 {
            comms = merge_by_modularity(comms, &tie_graph)?;
        }
    }

    let mut params = BTreeMap::new();
    params.insert("tau".to_string(), format!("{}", cfg.tau));
    params.insert("lambda".to_string(), format!("{}", cfg.lambda));
    params.insert("M".to_string(), m.to_string());
    params.insert("seed".to_string(), cfg.seed.to_string());
    Partition::new("mct2", params, comms)
}

/// Greedy pairwise merging: repeatedly apply the merge with the largest
/// modularity gain until no merge improves.
fn merge_by_modularity(
    mut comms: Vec<Vec<String>>,
    graph: &UndirectedGraph,
) -> Result<Vec<Vec<String>>> {
    loop {
        let current = Partition::new("tmp", BTreeMap::new(), comms.clone())?;
        let base = modularity(graph, &current)?;
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..comms.len() {
            for j in (i + 1)..comms.len() {
                let mut trial = Vec::with_capacity(comms.len() - 1);
                for (k, c) in comms.iter().enumerate() {
                    if k != i && k != j {
                        trial.push(c.clone());
                    }
                }
                let mut merged = comms[i].clone();
                merged.extend(comms[j].iter().cloned());
                trial.push(merged);
                let q = modularity(graph, &Partition::new("tmp", BTreeMap::new(), trial)?)?;
                let gain = q - base;
                if gain > 1e-12 && best.is_none_or(|(g, _, _)| gain > g) {
                    best = Some((gain, i, j));
                }
            }
        }
        match best {
            Some((_, i, j)) => {
                let moved = comms.remove(j);
                comms[i].extend(moved);
            }
            None => break,
        }
    }
    Ok(comms)
}

/// Run the seeded detector for every lambda in the grid and return the lambda
/// whose partition maximizes modularity on the structural tie graph; ties
/// prefer the smaller lambda.
pub fn tune_lambda(
    net: &NetworkData,
    cfg: &MctConfig,
    recip_cfg: &ReciprocityConfig,
    text_cfg: &TextConfig,
) -> Result<(f64, Partition)> {
    if cfg.lambda_grid.is_empty() {
        return Err(Error::validation("lambda grid is empty"));
    }
    let (structural, textual) = run_pipeline(net, cfg, recip_cfg, text_cfg)?;
    let pairs = candidate_pairs(net, &structural);
    let tie_graph = UndirectedGraph::new(structural.nodes.clone(), &pairs);
    let mut grid = cfg.lambda_grid.clone();
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut best: Option<(f64, f64, Partition)> = None;
    for &lambda in &grid {
        let mut c = cfg.clone();
        c.lambda = lambda;
        let part = detect_mct2_with_results(net, &structural, textual.as_ref(), &c)?;
        let q = if tie_graph.edge_count() > 0 {
            modularity(&tie_graph, &part)?
        } else {
            0.0
        };
        if best.as_ref().is_none_or(|(bq, _, _)| q > *bq + 1e-12) {
            best = Some((q, lambda, part));
        }
    }
    let (_, lambda, part) = best.unwrap();
    Ok((lambda, part))
}
