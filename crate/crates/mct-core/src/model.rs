//! Shared network, partition and matrix types.
//!
//! All types are immutable after construction and safe to share across
//! concurrent jobs. Node ids are opaque strings; integer ids from files are
//! accepted and kept as their string form. Ordering of ids is natural:
//! numeric ids sort numerically, everything else lexicographically, so
//! reports stay stable regardless of input order.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Opaque node identifier.
pub type NodeId = String;

/// Compare two node ids in natural order: both numeric -> numeric order,
/// otherwise lexicographic.
pub fn node_cmp(a: &str, b: &str) -> std::cmp::Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        _ => a.cmp(b),
    }
}

/// Sort node ids in natural order.
pub fn sort_nodes(ids: &mut [NodeId]) {
    ids.sort_by(|a, b| node_cmp(a, b));
}

/// Account category of a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Verified,
    Unverified,
}

/// Profile features of a node used for reciprocity prediction:
/// indegree, outdegree and account category.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeProfile {
    pub id: NodeId,
    pub indegree: u64,
    pub outdegree: u64,
    pub category: Category,
}

impl NodeProfile {
    pub fn new(id: impl Into<NodeId>, indegree: u64, outdegree: u64, category: Category) -> Self {
        NodeProfile {
            id: id.into(),
            indegree,
            outdegree,
            category,
        }
    }

    /// Network size of the node: indegree + outdegree.
    pub fn network_size(&self) -> u64 {
        self.indegree + self.outdegree
    }
}

/// A directed edge.
pub type Edge = (NodeId, NodeId);

/// Network data: node set, directed edge set, optional per-node profiles and
/// optional per-node text corpora.
#[derive(Debug, Clone, Default)]
pub struct NetworkData {
    nodes: Vec<NodeId>,
    edges: BTreeSet<Edge>,
    profiles: BTreeMap<NodeId, NodeProfile>,
    corpora: BTreeMap<NodeId, Vec<String>>,
}

impl NetworkData {
    /// Nodes in natural order.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    pub fn has_edge(&self, src: &str, dst: &str) -> bool {
        self.edges.contains(&(src.to_string(), dst.to_string()))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.nodes.iter().any(|n| n == id)
    }

    pub fn profile(&self, id: &str) -> Option<&NodeProfile> {
        self.profiles.get(id)
    }

    pub fn profiles(&self) -> &BTreeMap<NodeId, NodeProfile> {
        &self.profiles
    }

    pub fn has_profiles(&self) -> bool {
        !self.profiles.is_empty()
    }

    pub fn corpus(&self, id: &str) -> Option<&[String]> {
        self.corpora.get(id).map(|v| v.as_slice())
    }

    pub fn has_corpora(&self) -> bool {
        !self.corpora.is_empty()
    }

    /// Derive degree-based profiles from the edge structure, for datasets that
    /// ship no real profiles (benchmark graphs). Indegree and outdegree are
    /// counted from the directed edges; category defaults to unverified.
    pub fn derive_degree_profiles(&self) -> NetworkData {
        let mut indeg: BTreeMap<&str, u64> = BTreeMap::new();
        let mut outdeg: BTreeMap<&str, u64> = BTreeMap::new();
        for (src, dst) in &self.edges {
            *outdeg.entry(src).or_default() += 1;
            *indeg.entry(dst).or_default() += 1;
        }
        let profiles = self
            .nodes
            .iter()
            .map(|n| {
                let p = NodeProfile::new(
                    n.clone(),
                    indeg.get(n.as_str()).copied().unwrap_or(0),
                    outdeg.get(n.as_str()).copied().unwrap_or(0),
                    Category::Unverified,
                );
                (n.clone(), p)
            })
            .collect();
        NetworkData {
            nodes: self.nodes.clone(),
            edges: self.edges.clone(),
            profiles,
            corpora: self.corpora.clone(),
        }
    }

    /// Attach corpora to an existing network. Unknown node ids are rejected.
    pub fn with_corpora(mut self, corpora: BTreeMap<NodeId, Vec<String>>) -> Result<NetworkData> {
        for id in corpora.keys() {
            if !self.contains(id) {
                return Err(Error::validation(format!(
                    "corpus references unknown node {id}"
                )));
            }
        }
        self.corpora = corpora;
        Ok(self)
    }
}

/// Validate and build a network from profiles, an explicit node list, edges
/// and optional corpora. Duplicate directed edges are deduplicated; self-loops
/// and dangling endpoints are rejected.
pub fn build_network(
    profiles: Vec<NodeProfile>,
    extra_nodes: Vec<NodeId>,
    edges: Vec<Edge>,
    corpora: Option<BTreeMap<NodeId, Vec<String>>>,
) -> Result<NetworkData> {
    let mut node_set: BTreeSet<NodeId> = BTreeSet::new();
    let mut profile_map: BTreeMap<NodeId, NodeProfile> = BTreeMap::new();
    for p in profiles {
        if profile_map.contains_key(&p.id) {
            return Err(Error::validation(format!("duplicate profile for {}", p.id)));
        }
        node_set.insert(p.id.clone());
        profile_map.insert(p.id.clone(), p);
    }
    node_set.extend(extra_nodes);

    let mut edge_set: BTreeSet<Edge> = BTreeSet::new();
    for (src, dst) in edges {
        if src == dst {
            return Err(Error::validation(format!("self-loop on {src}")));
        }
        if !node_set.contains(&src) {
            return Err(Error::validation(format!("unknown endpoint {src}")));
        }
        if !node_set.contains(&dst) {
            return Err(Error::validation(format!("unknown endpoint {dst}")));
        }
        edge_set.insert((src, dst));
    }

    let mut nodes: Vec<NodeId> = node_set.into_iter().collect();
    sort_nodes(&mut nodes);

    let net = NetworkData {
        nodes,
        edges: edge_set,
        profiles: profile_map,
        corpora: BTreeMap::new(),
    };
    match corpora {
        Some(c) => net.with_corpora(c),
        None => Ok(net),
    }
}

/// Build a network from bare edges, inventing the node set from endpoints.
/// With `undirected` set, each edge is stored in both directions so every tie
/// is reciprocal.
pub fn network_from_edges(edges: &[(String, String)], undirected: bool) -> Result<NetworkData> {
    let mut nodes: BTreeSet<NodeId> = BTreeSet::new();
    let mut all = Vec::with_capacity(edges.len() * 2);
    for (a, b) in edges {
        nodes.insert(a.clone());
        nodes.insert(b.clone());
        all.push((a.clone(), b.clone()));
        if undirected {
            all.push((b.clone(), a.clone()));
        }
    }
    build_network(Vec::new(), nodes.into_iter().collect(), all, None)
}

/// Unordered node pair, stored in natural order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Pair(pub NodeId, pub NodeId);

impl Pair {
    pub fn new(a: impl Into<NodeId>, b: impl Into<NodeId>) -> Self {
        let (a, b) = (a.into(), b.into());
        if node_cmp(&a, &b) == std::cmp::Ordering::Greater {
            Pair(b, a)
        } else {
            Pair(a, b)
        }
    }
}

/// The undirected view of a directed network: mutual directed pairs collapsed
/// into reciprocal ties, plus the remaining one-directional edges.
#[derive(Debug, Clone)]
pub struct UndirectedView {
    pub reciprocal: BTreeSet<Pair>,
    pub one_edge: BTreeSet<Edge>,
}

/// Collapse mutual directed pairs into reciprocal ties and collect the
/// remaining unidirectional edges.
pub fn undirected_view(net: &NetworkData) -> UndirectedView {
    let mut reciprocal = BTreeSet::new();
    let mut one_edge = BTreeSet::new();
    for (src, dst) in net.edges() {
        if net.has_edge(dst, src) {
            reciprocal.insert(Pair::new(src.clone(), dst.clone()));
        } else {
            one_edge.insert((src.clone(), dst.clone()));
        }
    }
    UndirectedView {
        reciprocal,
        one_edge,
    }
}

/// All ties of the network projected onto unordered pairs, regardless of
/// direction. For undirected datasets (stored with both arcs) this equals the
/// reciprocal set.
pub fn tie_pairs(net: &NetworkData) -> BTreeSet<Pair> {
    net.edges()
        .map(|(a, b)| Pair::new(a.clone(), b.clone()))
        .collect()
}

/// A community assignment over node ids with provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partition {
    pub algorithm: String,
    #[serde(default)]
    pub params: BTreeMap<String, String>,
    pub communities: Vec<Vec<NodeId>>,
}

impl Partition {
    /// Build a partition from raw communities: members sorted naturally,
    /// empty communities dropped, communities ordered by their first member.
    pub fn new(
        algorithm: impl Into<String>,
        params: BTreeMap<String, String>,
        communities: Vec<Vec<NodeId>>,
    ) -> Result<Partition> {
        let mut seen: BTreeSet<NodeId> = BTreeSet::new();
        let mut comms: Vec<Vec<NodeId>> = Vec::new();
        for mut c in communities {
            if c.is_empty() {
                continue;
            }
            sort_nodes(&mut c);
            for id in &c {
                if !seen.insert(id.clone()) {
                    return Err(Error::validation(format!(
                        "node {id} appears in more than one community"
                    )));
                }
            }
            comms.push(c);
        }
        comms.sort_by(|a, b| node_cmp(&a[0], &b[0]));
        Ok(Partition {
            algorithm: algorithm.into(),
            params,
            communities: comms,
        })
    }

    pub fn len(&self) -> usize {
        self.communities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.communities.is_empty()
    }

    /// Map node id -> community index.
    pub fn labels(&self) -> BTreeMap<&str, usize> {
        let mut m = BTreeMap::new();
        for (i, c) in self.communities.iter().enumerate() {
            for id in c {
                m.insert(id.as_str(), i);
            }
        }
        m
    }

    /// All node ids covered by the partition.
    pub fn node_ids(&self) -> BTreeSet<&str> {
        self.communities
            .iter()
            .flat_map(|c| c.iter().map(|s| s.as_str()))
            .collect()
    }

    /// Check disjointness and coverage against a node universe.
    pub fn validate_over(&self, nodes: &[NodeId]) -> Result<()> {
        let universe: BTreeSet<&str> = nodes.iter().map(|s| s.as_str()).collect();
        for c in &self.communities {
            for id in c {
                if !universe.contains(id.as_str()) {
                    return Err(Error::validation(format!(
                        "partition references unknown node {id}"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Row-major dense matrix with optional row/column labels. The single numeric
/// exchange type between modules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub col_labels: Option<Vec<String>>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            entries: vec![0.0; rows * cols],
            row_labels: None,
            col_labels: None,
        }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::validation(format!(
                "matrix entries length {} does not match {rows}x{cols}",
                entries.len()
            )));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation("matrix entries must be finite"));
        }
        Ok(DenseMatrix {
            rows,
            cols,
            entries,
            row_labels: None,
            col_labels: None,
        })
    }

    pub fn with_labels(mut self, rows: Option<Vec<String>>, cols: Option<Vec<String>>) -> Self {
        self.row_labels = rows;
        self.col_labels = cols;
        self
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_sum(&self, r: usize) -> f64 {
        self.row(r).iter().sum()
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Naive matrix product; fine at the scales this library targets.
    pub fn matmul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matmul");
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    /// Largest absolute asymmetry |a_ij - a_ji|.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        if self.rows != self.cols {
            return f64::INFINITY;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}
