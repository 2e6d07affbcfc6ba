//! Partition and network quality measures: modularity, NMI, Rand and Jaccard
//! indices, clustering coefficient, average degree, an exhaustive modularity
//! maximizer for small graphs, and ECDF tables.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::model::{tie_pairs, NetworkData, NodeId, Pair, Partition};

/// Undirected simple graph over node ids, the shared substrate for all
/// metrics and the graph baselines.
#[derive(Debug, Clone)]
pub struct UndirectedGraph {
    pub nodes: Vec<NodeId>,
    index: BTreeMap<NodeId, usize>,
    adj: Vec<BTreeSet<usize>>,
}

impl UndirectedGraph {
    pub fn new(nodes: Vec<NodeId>, pairs: &BTreeSet<Pair>) -> UndirectedGraph {
        let index: BTreeMap<NodeId, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        let mut adj = vec![BTreeSet::new(); nodes.len()];
        for Pair(a, b) in pairs {
            let (i, j) = (index[a], index[b]);
            adj[i].insert(j);
            adj[j].insert(i);
        }
        UndirectedGraph { nodes, index, adj }
    }

    /// Project a directed network onto its undirected simple graph: any edge
    /// in either direction becomes an undirected tie.
    pub fn from_network(net: &NetworkData) -> UndirectedGraph {
        UndirectedGraph::new(net.nodes().to_vec(), &tie_pairs(net))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[i].iter().copied()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(&j)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.node_count() {
            for &j in &self.adj[i] {
                if i < j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn remove_edge(&mut self, i: usize, j: usize) {
        self.adj[i].remove(&j);
        self.adj[j].remove(&i);
    }

    /// Connected components as lists of node indices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn ids_of(&self, indices: &[usize]) -> Vec<NodeId> {
        indices.iter().map(|&i| self.nodes[i].clone()).collect()
    }
}

/// Newman modularity Q of a partition on an undirected graph:
/// sum over communities of e_c/m - (d_c/2m)^2.
pub fn modularity(graph: &UndirectedGraph, partition: &Partition) -> Result<f64> {
    let m = graph.edge_count();
    if m == 0 {
        return Err(Error::validation("no edges"));
    }
    let labels = partition.labels();
    let m = m as f64;
    let mut intra = vec![0.0f64; partition.len()];
    let mut degree = vec![0.0f64; partition.len()];
    for i in 0..graph.node_count() {
        let li = labels.get(graph.nodes[i].as_str());
        if let Some(&li) = li {
            degree[li] += graph.degree(i) as f64;
        }
        for j in graph.neighbors(i) {
            if i < j {
                if let (Some(&a), Some(&b)) = (
                    labels.get(graph.nodes[i].as_str()),
                    labels.get(graph.nodes[j].as_str()),
                ) {
                    if a == b {
                        intra[a] += 1.0;
                    }
                }
            }
        }
    }
    let mut q = 0.0;
    for c in 0..partition.len() {
        q += intra[c] / m - (degree[c] / (2.0 * m)).powi(2);
    }
    Ok(q)
}

fn entropy(counts: &[usize], total: f64) -> f64 {
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.ln()
        })
        .sum()
}

/// Normalized mutual information between two partitions over the same node
/// universe; normalized by the arithmetic mean of the label entropies.
/// Two identical trivial partitions score 1.
pub fn nmi(p1: &Partition, p2: &Partition) -> Result<f64> {
    let u1 = p1.node_ids();
    let u2 = p2.node_ids();
    if u1 != u2 {
        return Err(Error::validation("partitions cover different node sets"));
    }
    let n = u1.len() as f64;
    let l1 = p1.labels();
    let l2 = p2.labels();
    let mut contingency: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut rows = vec![0usize; p1.len()];
    let mut cols = vec![0usize; p2.len()];
    for id in u1 {
        let (a, b) = (l1[id], l2[id]);
        *contingency.entry((a, b)).or_default() += 1;
        rows[a] += 1;
        cols[b] += 1;
    }
    let h1 = entropy(&rows, n);
    let h2 = entropy(&cols, n);
    if h1 == 0.0 && h2 == 0.0 {
        return Ok(1.0); // both trivial and identical
    }
    let mut mi = 0.0;
    for (&(a, b), &c) in &contingency {
        let pij = c as f64 / n;
        let pi = rows[a] as f64 / n;
        let pj = cols[b] as f64 / n;
        mi += pij * (pij / (pi * pj)).ln();
    }
    let denom = 0.5 * (h1 + h2);
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok((mi / denom).clamp(0.0, 1.0))
}

/// Rand and Jaccard indices over all node pairs. Jaccard with no co-grouped
/// pairs in either partition is defined as 1 (vacuous agreement).
pub fn rand_jaccard(p1: &Partition, p2: &Partition) -> Result<(f64, f64)> {
    let u1 = p1.node_ids();
    let u2 = p2.node_ids();
    if u1 != u2 {
        return Err(Error::validation("partitions cover different node sets"));
    }
    if u1.len() < 2 {
        return Err(Error::validation("need at least two nodes"));
    }
    let ids: Vec<&str> = u1.into_iter().collect();
    let l1 = p1.labels();
    let l2 = p2.labels();
    let (mut a, mut b, mut c, mut d) = (0u64, 0u64, 0u64, 0u64);
    for i in 0..ids.len() {
        for j in (i + 1)..ids.len() {
            let same1 = l1[ids[i]] == l1[ids[j]];
            let same2 = l2[ids[i]] == l2[ids[j]];
            match (same1, same2) {
                (true, true) => a += 1,
                (true, false) => b += 1,
                (false, true) => c += 1,
                (false, false) => d += 1,
            }
        }
    }
    let total = (a + b + c + d) as f64;
    let rand = (a + d) as f64 / total;
    let jaccard = if a + b + c == 0 {
        1.0
    } else {
        a as f64 / (a + b + c) as f64
    };
    Ok((rand, jaccard))
}

/// Local clustering coefficient of one node: 2 E_i / (k_i (k_i - 1)),
/// defined as 0 for degree below 2.
pub fn clustering_coefficient(graph: &UndirectedGraph, id: &str) -> Result<f64> {
    let i = graph
        .index_of(id)
        .ok_or_else(|| Error::validation(format!("unknown node {id}")))?;
    let neigh: Vec<usize> = graph.neighbors(i).collect();
    let k = neigh.len();
    if k < 2 {
        return Ok(0.0);
    }
    let mut links = 0usize;
    for x in 0..k {
        for y in (x + 1)..k {
            if graph.has_edge(neigh[x], neigh[y]) {
                links += 1;
            }
        }
    }
    Ok(2.0 * links as f64 / (k * (k - 1)) as f64)
}

/// Clustering coefficients for every node of the graph.
pub fn clustering_coefficients(graph: &UndirectedGraph) -> Result<BTreeMap<NodeId, f64>> {
    let mut out = BTreeMap::new();
    for id in &graph.nodes {
        out.insert(id.clone(), clustering_coefficient(graph, id)?);
    }
    Ok(out)
}

fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    // all assignments in restricted growth form (canonical set partitions)
    let mut out = Vec::new();
    let mut assign = vec![0usize; n];
    fn rec(i: usize, maxc: usize, assign: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == assign.len() {
            out.push(assign.clone());
            return;
        }
        for c in 0..=maxc {
            assign[i] = c;
            rec(i + 1, maxc.max(c + 1), assign, out);
        }
    }
    rec(0, 0, &mut assign, &mut out);
    out
}

/// Exhaustive search for the modularity-maximizing partition; the oracle used
/// by the acceptance suite. Bounded to small n (Bell-number growth).
pub fn brute_force_best_modularity(
    graph: &UndirectedGraph,
    max_nodes: usize,
) -> Result<(f64, Partition)> {
    let n = graph.node_count();
    if n > max_nodes {
        return Err(Error::validation(format!(
            "brute force limited to {max_nodes} nodes, got {n}"
        )));
    }
    if graph.edge_count() == 0 {
        return Err(Error::validation("no edges"));
    }
    let mut best: Option<(f64, Partition)> = None;
    for assign in set_partitions(n) {
        let k = assign.iter().max().map_or(0, |m| m + 1);
        let mut comms: Vec<Vec<NodeId>> = vec![Vec::new(); k];
        for (i, &c) in assign.iter().enumerate() {
            comms[c].push(graph.nodes[i].clone());
        }
        let part = Partition::new("brute-force", BTreeMap::new(), comms)?;
        let q = modularity(graph, &part)?;
        if best.as_ref().is_none_or(|(bq, _)| q > *bq + 1e-15) {
            best = Some((q, part));
        }
    }
    Ok(best.unwrap())
}

/// Average degree in both conventions: undirected 2m/n and directed
/// (in + out)/n over the directed edge set.
pub fn average_degree(net: &NetworkData) -> (f64, f64) {
    let graph = UndirectedGraph::from_network(net);
    let n = net.node_count().max(1) as f64;
    let undirected = 2.0 * graph.edge_count() as f64 / n;
    let directed = 2.0 * net.edge_count() as f64 / n;
    (undirected, directed)
}

/// One evaluation row as written to metrics.csv.
#[derive(Debug, Clone)]
pub struct MetricsReport {
    pub dataset: String,
    pub algorithm: String,
    pub params: String,
    pub modularity: Option<f64>,
    pub nmi: Option<f64>,
    pub rand: Option<f64>,
    pub jaccard: Option<f64>,
    pub num_communities: usize,
    pub avg_degree: f64,
    pub runtime_ms: u128,
}

impl MetricsReport {
    pub const CSV_HEADER: &'static str =
        "dataset,algorithm,params,Q,NMI,Rand,Jaccard,num_communities,avg_degree,runtime_ms";

    pub fn csv_row(&self) -> String {
        fn opt(v: Option<f64>) -> String {
            v.map(|x| format!("{x:.6}")).unwrap_or_default()
        }
        format!(
            "{},{},{},{},{},{},{},{},{:.4},{}",
            self.dataset,
            self.algorithm,
            self.params,
            opt(self.modularity),
            opt(self.nmi),
            opt(self.rand),
            opt(self.jaccard),
            self.num_communities,
            self.avg_degree,
            self.runtime_ms
        )
    }
}

/// Evaluate a detected partition on a network, optionally against a ground
/// truth partition.
pub fn evaluate(
    dataset: &str,
    net: &NetworkData,
    detected: &Partition,
    truth: Option<&Partition>,
    runtime_ms: u128,
) -> Result<MetricsReport> {
    let graph = UndirectedGraph::from_network(net);
    let q = if graph.edge_count() > 0 {
        Some(modularity(&graph, detected)?)
    } else {
        None
    };
    let (nmi_v, rand_v, jacc_v) = match truth {
        Some(t) => {
            let nm = nmi(detected, t)?;
            let (r, j) = rand_jaccard(detected, t)?;
            (Some(nm), Some(r), Some(j))
        }
        None => (None, None, None),
    };
    let (avg_deg, _) = average_degree(net);
    let params: Vec<String> = detected
        .params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    Ok(MetricsReport {
        dataset: dataset.to_string(),
        algorithm: detected.algorithm.clone(),
        params: params.join(";"),
        modularity: q,
        nmi: nmi_v,
        rand: rand_v,
        jaccard: jacc_v,
        num_communities: detected.len(),
        avg_degree: avg_deg,
        runtime_ms,
    })
}

/// Empirical cumulative distribution function of a sample: the sorted unique
/// values paired with P(X <= x).
pub fn ecdf(values: &[f64]) -> Vec<(f64, f64)> {
    if values.is_empty() {
        return Vec::new();
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (i, v) in sorted.iter().enumerate() {
        let p = (i + 1) as f64 / n;
        match out.last_mut() {
            Some(last) if last.0 == *v => last.1 = p,
            _ => out.push((*v, p)),
        }
    }
    out
}
