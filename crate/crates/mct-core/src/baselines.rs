//! Reference community detectors: Girvan-Newman edge-betweenness removal and
//! asynchronous label propagation. Both operate on the undirected projection
//! of the input network.

use std::collections::{BTreeMap, VecDeque};

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metrics::{modularity, UndirectedGraph};
use crate::model::{NetworkData, Partition};

/// Target for the Girvan-Newman dendrogram cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GnTarget {
    /// Return the dendrogram level with maximal modularity.
    ModularityPeak,
    /// Return the first level with at least k components.
    FixedK(usize),
}

#[derive(Debug, Clone)]
pub struct BaselineConfig {
    pub lp_max_sweeps: usize,
    pub seed: u64,
    pub gn_target: GnTarget,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        BaselineConfig {
            lp_max_sweeps: 100,
            seed: 0,
            gn_target: GnTarget::ModularityPeak,
        }
    }
}

/// Brandes' algorithm: exact edge betweenness for all edges.
fn edge_betweenness(graph: &UndirectedGraph) -> BTreeMap<(usize, usize), f64> {
    let n = graph.node_count();
    let mut scores: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for (i, j) in graph.edges() {
        scores.insert((i, j), 0.0);
    }
    for source in 0..n {
        // BFS shortest-path counts
        let mut sigma = vec![0.0f64; n];
        let mut dist = vec![usize::MAX; n];
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut order = Vec::new();
        sigma[source] = 1.0;
        dist[source] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for w in graph.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] += sigma[v];
                    preds[w].push(v);
                }
            }
        }
        // dependency accumulation over edges
        let mut delta = vec![0.0f64; n];
        for &w in order.iter().rev() {
            for &v in &preds[w] {
                let share = sigma[v] / sigma[w] * (1.0 + delta[w]);
                let key = (v.min(w), v.max(w));
                *scores.get_mut(&key).unwrap() += share;
                delta[v] += share;
            }
        }
    }
    scores
}

/// Girvan-Newman: repeatedly remove the edge with maximal betweenness
/// (recomputed exactly after each removal, lexicographically smallest edge on
/// ties), record the component structure after each removal, and return the
/// level selected by the target. Modularity of every level is measured on the
/// original graph; ties prefer the earliest level, so a graph with no
/// positive split stays whole.
pub fn girvan_newman(net: &NetworkData, cfg: &BaselineConfig) -> Result<Partition> {
    let original = UndirectedGraph::from_network(net);
    if original.edge_count() == 0 {
        return Err(Error::validation("girvan-newman needs at least one edge"));
    }
    let mut work = original.clone();

    let components_partition = |g: &UndirectedGraph| -> Result<Partition> {
        let comms = g
            .components()
            .into_iter()
            .map(|c| g.ids_of(&c))
            .collect::<Vec<_>>();
        Partition::new("gn", BTreeMap::new(), comms)
    };

    let mut best_partition = components_partition(&work)?;
    let mut best_q = modularity(&original, &best_partition)?;
    let mut level_count = best_partition.len();

    loop {
        if work.edge_count() == 0 {
            break;
        }
        let scores = edge_betweenness(&work);
        // max betweenness, ties -> lexicographically smallest (node id order)
        let mut best_edge: Option<((usize, usize), f64)> = None;
        for (&(i, j), &s) in &scores {
            let better = match &best_edge {
                None => true,
                Some((be, bs)) => {
                    s > bs + 1e-9
                        || ((s - bs).abs() <= 1e-9
                            && (
                                crate::model::node_cmp(&work.nodes[i], &work.nodes[be.0]),
                                crate::model::node_cmp(&work.nodes[j], &work.nodes[be.1]),
                            ) < (std::cmp::Ordering::Equal, std::cmp::Ordering::Equal))
                }
            };
            if better {
                best_edge = Some(((i, j), s));
            }
        }
        let ((i, j), _) = best_edge.unwrap();
        work.remove_edge(i, j);

        let part = components_partition(&work)?;
        if part.len() != level_count {
            level_count = part.len();
            let q = modularity(&original, &part)?;
            match cfg.gn_target {
                GnTarget::ModularityPeak => {
                    if q > best_q + 1e-12 {
                        best_q = q;
                        best_partition = part;
                    }
                }
                GnTarget::FixedK(k) => {
                    if part.len() >= k {
                        let mut out = part;
                        out.params
                            .insert("target".to_string(), format!("fixed_k={k}"));
                        return Ok(out);
                    }
                    best_partition = part;
                }
            }
        }
    }

    match cfg.gn_target {
        GnTarget::ModularityPeak => {
            best_partition
                .params
                .insert("target".to_string(), "modularity_peak".to_string());
            best_partition
                .params
                .insert("Q".to_string(), format!("{best_q:.6}"));
            Ok(best_partition)
        }
        // fixed k larger than n: everything became singletons, return that
        GnTarget::FixedK(_) => Ok(best_partition),
    }
}

/// Asynchronous label propagation: every node starts with its own label and
/// repeatedly adopts the most frequent label among its neighbors, visiting
/// nodes in a seeded random order, ties broken uniformly at random. Stops at
/// a sweep with no change or after lp_max_sweeps.
pub fn label_propagation(net: &NetworkData, cfg: &BaselineConfig) -> Result<Partition> {
    let graph = UndirectedGraph::from_network(net);
    let n = graph.node_count();
    if n == 0 {
        return Err(Error::validation(
            "label propagation needs at least one node",
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut labels: Vec<usize> = (0..n).collect();
    let mut order: Vec<usize> = (0..n).collect();

    for _ in 0..cfg.lp_max_sweeps.max(1) {
        order.shuffle(&mut rng);
        let mut changed = false;
        for &v in &order {
            let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
            for w in graph.neighbors(v) {
                *counts.entry(labels[w]).or_default() += 1;
            }
            if counts.is_empty() {
                continue;
            }
            let maxc = *counts.values().max().unwrap();
            let top: Vec<usize> = counts
                .iter()
                .filter(|(_, &c)| c == maxc)
                .map(|(&l, _)| l)
                .collect();
            // keep the current label when it is already maximal; otherwise
            // pick uniformly among the most frequent
            if top.contains(&labels[v]) {
                continue;
            }
            let new = if top.len() == 1 {
                top[0]
            } else {
                top[rng.random_range(0..top.len())]
            };
            labels[v] = new;
            changed = true;
        }
        if !changed {
            break;
        }
    }

    let mut groups: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for (v, &l) in labels.iter().enumerate() {
        groups.entry(l).or_default().push(graph.nodes[v].clone());
    }
    let mut params = BTreeMap::new();
    params.insert("seed".to_string(), cfg.seed.to_string());
    Partition::new("lp", params, groups.into_values().collect())
}

/// Post-hoc check that a labeling is a local fixpoint: no node strictly
/// prefers a different label than its own.
pub fn lp_is_local_fixpoint(net: &NetworkData, partition: &Partition) -> bool {
    let graph = UndirectedGraph::from_network(net);
    let labels = partition.labels();
    for i in 0..graph.node_count() {
        let own = labels[graph.nodes[i].as_str()];
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for w in graph.neighbors(i) {
            *counts.entry(labels[graph.nodes[w].as_str()]).or_default() += 1;
        }
        if counts.is_empty() {
            continue;
        }
        let maxc = *counts.values().max().unwrap();
        if counts.get(&own).copied().unwrap_or(0) < maxc {
            return false;
        }
    }
    true
}
