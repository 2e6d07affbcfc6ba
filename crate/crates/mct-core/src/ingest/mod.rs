//! On-disk formats, the file-backed network source with dyad search, and the
//! synthetic benchmark generators.
//!
//! Formats:
//! - edges.tsv: one directed edge per line, `src<TAB>dst`, `#` comments
//! - profiles.json: array of {"id", "indegree", "outdegree", "verified"}
//! - tweets.jsonl: one {"node_id", "text"} object per line
//! - partition.json: {"algorithm", "params", "communities"}
//! - snapshot.json: {"users": {id: {"friends", "followers", "profile"}}}

mod lfr;
mod ppm;

pub use lfr::{generate_lfr, LfrConfig};
pub use ppm::{generate_ppm, PpmConfig};

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{build_network, Category, NetworkData, NodeId, NodeProfile, Pair, Partition};

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Read a directed edge list. With `undirected` set every line produces both
/// arcs, which is how the plain benchmark graphs are loaded.
pub fn read_edges_tsv(path: &Path, undirected: bool) -> Result<Vec<(NodeId, NodeId)>> {
    let file = std::fs::File::open(path).map_err(|e| io_err(path, e))?;
    let reader = BufReader::new(file);
    let mut edges = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut parts = trimmed.split('\t');
        let src = parts.next().unwrap_or("").trim();
        let dst = parts.next().unwrap_or("").trim();
        if src.is_empty() || dst.is_empty() {
            return Err(Error::Parse {
                path: path.display().to_string(),
                line: lineno + 1,
                msg: "expected `src<TAB>dst`".to_string(),
            });
        }
        edges.push((src.to_string(), dst.to_string()));
        if undirected {
            edges.push((dst.to_string(), src.to_string()));
        }
    }
    Ok(edges)
}

pub fn write_edges_tsv(path: &Path, net: &NetworkData) -> Result<()> {
    let mut out = String::new();
    for (src, dst) in net.edges() {
        out.push_str(src);
        out.push('\t');
        out.push_str(dst);
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| io_err(path, e))
}

#[derive(Debug, Serialize, Deserialize)]
struct ProfileRecord {
    id: serde_json::Value,
    indegree: u64,
    outdegree: u64,
    verified: bool,
}

/// Read profiles.json. Integer and string ids are both accepted and
/// normalized to strings.
pub fn read_profiles_json(path: &Path) -> Result<Vec<NodeProfile>> {
    let data = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let records: Vec<ProfileRecord> = serde_json::from_str(&data).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line: e.line(),
        msg: e.to_string(),
    })?;
    let mut out = Vec::with_capacity(records.len());
    for r in records {
        let id = match r.id {
            serde_json::Value::String(s) => s,
            serde_json::Value::Number(n) => n.to_string(),
            other => {
                return Err(Error::validation(format!(
                    "profile id must be a string or number, got {other}"
                )))
            }
        };
        out.push(NodeProfile::new(
            id,
            r.indegree,
            r.outdegree,
            if r.verified {
                Category::Verified
            } else {
                Category::Unverified
            },
        ));
    }
    Ok(out)
}

pub fn write_profiles_json(path: &Path, profiles: &[NodeProfile]) -> Result<()> {
    let records: Vec<ProfileRecord> = profiles
        .iter()
        .map(|p| ProfileRecord {
            id: serde_json::Value::String(p.id.clone()),
            indegree: p.indegree,
            outdegree: p.outdegree,
            verified: p.category == Category::Verified,
        })
        .collect();
    let data = serde_json::to_string_pretty(&records)
        .map_err(|e| Error::numeric(format!("serialize profiles: {e}")))?;
    std::fs::write(path, data).map_err(|e| io_err(path, e))
}

#[derive(Debug, Serialize, Deserialize)]
struct TweetRecord {
    node_id: serde_json::Value,
    text: String,
}

/// Read tweets.jsonl into a node -> texts map.
pub fn read_tweets_jsonl(path: &Path) -> Result<BTreeMap<NodeId, Vec<String>>> {
    let file = std::fs::File::open(path).map_err(|e| io_err(path, e))?;
    let reader = BufReader::new(file);
    let mut out: BTreeMap<NodeId, Vec<String>> = BTreeMap::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| io_err(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: TweetRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            line: lineno + 1,
            msg: e.to_string(),
        })?;
        let id = match rec.node_id {
            serde_json::Value::String(s) => s,
            serde_json::Value::Number(n) => n.to_string(),
            other => {
                return Err(Error::Parse {
                    path: path.display().to_string(),
                    line: lineno + 1,
                    msg: format!("node_id must be a string or number, got {other}"),
                })
            }
        };
        out.entry(id).or_default().push(rec.text);
    }
    Ok(out)
}

pub fn write_tweets_jsonl(path: &Path, corpora: &BTreeMap<NodeId, Vec<String>>) -> Result<()> {
    let mut file = std::fs::File::create(path).map_err(|e| io_err(path, e))?;
    for (id, texts) in corpora {
        for text in texts {
            let rec = TweetRecord {
                node_id: serde_json::Value::String(id.clone()),
                text: text.clone(),
            };
            let line = serde_json::to_string(&rec)
                .map_err(|e| Error::numeric(format!("serialize tweet: {e}")))?;
            writeln!(file, "{line}").map_err(|e| io_err(path, e))?;
        }
    }
    Ok(())
}

/// Read partition.json.
pub fn read_partition_json(path: &Path) -> Result<Partition> {
    let data = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let raw: Partition = serde_json::from_str(&data).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        line: e.line(),
        msg: e.to_string(),
    })?;
    // normalize ordering and re-check disjointness
    Partition::new(raw.algorithm, raw.params, raw.communities)
}

pub fn write_partition_json(path: &Path, partition: &Partition) -> Result<()> {
    let data = serde_json::to_string_pretty(partition)
        .map_err(|e| Error::numeric(format!("serialize partition: {e}")))?;
    std::fs::write(path, data).map_err(|e| io_err(path, e))
}

/// Combined dataset reader: edges plus optional profiles and tweets. When no
/// profile file is given, degree-derived profiles are attached so the
/// structural stage always has features to work with.
pub fn read_dataset(
    edges_path: &Path,
    profiles_path: Option<&Path>,
    tweets_path: Option<&Path>,
    undirected: bool,
) -> Result<NetworkData> {
    let edges = read_edges_tsv(edges_path, undirected)?;
    let mut nodes: BTreeSet<NodeId> = BTreeSet::new();
    for (a, b) in &edges {
        nodes.insert(a.clone());
        nodes.insert(b.clone());
    }
    let profiles = match profiles_path {
        Some(p) => read_profiles_json(p)?,
        None => Vec::new(),
    };
    for p in &profiles {
        nodes.insert(p.id.clone());
    }
    let corpora = match tweets_path {
        Some(p) => Some(read_tweets_jsonl(p)?),
        None => None,
    };
    let net = build_network(profiles, nodes.into_iter().collect(), edges, corpora)?;
    if net.has_profiles() {
        Ok(net)
    } else {
        Ok(net.derive_degree_profiles())
    }
}

/// Abstract query surface over a social network: friends (outgoing follows),
/// followers (incoming follows) and profiles. Implementations must be
/// deterministic: identical queries return identical answers.
pub trait NetworkSource {
    fn friends(&self, id: &str) -> Result<Vec<NodeId>>;
    fn followers(&self, id: &str) -> Result<Vec<NodeId>>;
    fn profile(&self, id: &str) -> Result<NodeProfile>;
    fn ids(&self) -> Vec<NodeId>;
}

#[derive(Debug, Serialize, Deserialize)]
struct SnapshotUser {
    #[serde(default)]
    friends: Vec<serde_json::Value>,
    #[serde(default)]
    followers: Vec<serde_json::Value>,
    profile: Option<SnapshotProfile>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SnapshotProfile {
    indegree: u64,
    outdegree: u64,
    verified: bool,
}

#[derive(Debug, Serialize, Deserialize)]
struct SnapshotFile {
    users: BTreeMap<String, SnapshotUser>,
}

/// The single shipped NetworkSource: a JSON snapshot of friend/follower lists
/// captured ahead of time.
#[derive(Debug)]
pub struct SnapshotSource {
    users: BTreeMap<String, (Vec<NodeId>, Vec<NodeId>, NodeProfile)>,
}

fn id_value(v: &serde_json::Value) -> Result<String> {
    match v {
        serde_json::Value::String(s) => Ok(s.clone()),
        serde_json::Value::Number(n) => Ok(n.to_string()),
        other => Err(Error::validation(format!(
            "id must be a string or number, got {other}"
        ))),
    }
}

impl SnapshotSource {
    pub fn from_path(path: &Path) -> Result<SnapshotSource> {
        let data = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        let parsed: SnapshotFile = serde_json::from_str(&data).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            line: e.line(),
            msg: e.to_string(),
        })?;
        let mut users = BTreeMap::new();
        for (id, u) in parsed.users {
            let friends = u.friends.iter().map(id_value).collect::<Result<Vec<_>>>()?;
            let followers = u
                .followers
                .iter()
                .map(id_value)
                .collect::<Result<Vec<_>>>()?;
            let profile = match u.profile {
                Some(p) => NodeProfile::new(
                    id.clone(),
                    p.indegree,
                    p.outdegree,
                    if p.verified {
                        Category::Verified
                    } else {
                        Category::Unverified
                    },
                ),
                None => NodeProfile::new(
                    id.clone(),
                    followers.len() as u64,
                    friends.len() as u64,
                    Category::Unverified,
                ),
            };
            users.insert(id, (friends, followers, profile));
        }
        Ok(SnapshotSource { users })
    }
}

impl NetworkSource for SnapshotSource {
    fn friends(&self, id: &str) -> Result<Vec<NodeId>> {
        self.users
            .get(id)
            .map(|(f, _, _)| f.clone())
            .ok_or_else(|| Error::validation(format!("unknown node {id}")))
    }

    fn followers(&self, id: &str) -> Result<Vec<NodeId>> {
        self.users
            .get(id)
            .map(|(_, f, _)| f.clone())
            .ok_or_else(|| Error::validation(format!("unknown node {id}")))
    }

    fn profile(&self, id: &str) -> Result<NodeProfile> {
        self.users
            .get(id)
            .map(|(_, _, p)| p.clone())
            .ok_or_else(|| Error::validation(format!("unknown node {id}")))
    }

    fn ids(&self) -> Vec<NodeId> {
        self.users.keys().cloned().collect()
    }
}

/// Reciprocal pairs and remaining one-directional edges found by a dyad
/// search.
pub type DyadSearch = (BTreeSet<Pair>, BTreeSet<(NodeId, NodeId)>);

/// Walk the source from the seed users: for each seed and each of its
/// friends, the pair is a dyad when the friendship is mutual and a
/// one-directional edge otherwise. The two output sets are disjoint.
pub fn search_dyads(source: &dyn NetworkSource, seeds: &[NodeId]) -> Result<DyadSearch> {
    if seeds.is_empty() {
        return Err(Error::validation("seed set is empty"));
    }
    let mut dyads: BTreeSet<Pair> = BTreeSet::new();
    let mut one_edge: BTreeSet<(NodeId, NodeId)> = BTreeSet::new();
    for seed in seeds {
        let friends = source
            .friends(seed)
            .map_err(|e| Error::validation(format!("querying friends of {seed}: {e}")))?;
        for friend in friends {
            if friend == *seed {
                continue;
            }
            let their_friends = source
                .friends(&friend)
                .map_err(|e| Error::validation(format!("querying friends of {friend}: {e}")))?;
            if their_friends.contains(seed) {
                dyads.insert(Pair::new(seed.clone(), friend.clone()));
            } else {
                one_edge.insert((seed.clone(), friend.clone()));
            }
        }
    }
    let one_edge = one_edge
        .into_iter()
        .filter(|(a, b)| !dyads.contains(&Pair::new(a.clone(), b.clone())))
        .collect();
    Ok((dyads, one_edge))
}

/// Derive the transitive (Simmelian) triads of a dyad set: triples whose
/// three pairwise reciprocal ties are all present.
pub fn simmelian_triads(dyads: &BTreeSet<Pair>) -> Vec<(NodeId, NodeId, NodeId)> {
    let mut neighbors: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for Pair(a, b) in dyads {
        neighbors.entry(a).or_default().insert(b);
        neighbors.entry(b).or_default().insert(a);
    }
    let mut out = Vec::new();
    let ids: Vec<&str> = neighbors.keys().copied().collect();
    for (i, &a) in ids.iter().enumerate() {
        for &b in ids.iter().skip(i + 1) {
            if !neighbors[a].contains(b) {
                continue;
            }
            for &c in ids.iter().skip(i + 1) {
                if c <= b {
                    continue;
                }
                if neighbors[a].contains(c) && neighbors[b].contains(c) {
                    out.push((a.to_string(), b.to_string(), c.to_string()));
                }
            }
        }
    }
    out
}
