//! Planted partition model generator: equal-sized groups with independent
//! intra- and inter-group edge probabilities.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{network_from_edges, NetworkData, Partition};

#[derive(Debug, Clone)]
pub struct PpmConfig {
    pub n: usize,
    pub k: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub seed: u64,
}

impl PpmConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.k == 0 || self.k > self.n {
            return Err(Error::validation("need 1 <= k <= n"));
        }
        if !(0.0..=1.0).contains(&self.p_out)
            || !(0.0..=1.0).contains(&self.p_in)
            || self.p_out > self.p_in
        {
            return Err(Error::validation("need 0 <= p_out <= p_in <= 1"));
        }
        Ok(())
    }
}

/// Generate a planted partition graph: nodes dealt round-robin into k groups
/// (so sizes differ by at most one), every intra-group pair connected with
/// p_in and every inter-group pair with p_out. Undirected; both arcs stored.
pub fn generate_ppm(cfg: &PpmConfig) -> Result<(NetworkData, Partition)> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let width = (cfg.n as f64).log10().ceil().max(1.0) as usize;
    let name = |v: usize| format!("{v:0width$}");
    let group = |v: usize| v % cfg.k;

    let mut edges: Vec<(String, String)> = Vec::new();
    for i in 0..cfg.n {
        for j in (i + 1)..cfg.n {
            let p = if group(i) == group(j) {
                cfg.p_in
            } else {
                cfg.p_out
            };
            if p > 0.0 && rng.random::<f64>() < p {
                edges.push((name(i), name(j)));
            }
        }
    }

    let mut net = network_from_edges(&edges, true)?;
    // isolated nodes still belong to the planted partition
    let mut comms: Vec<Vec<String>> = vec![Vec::new(); cfg.k];
    let mut all_nodes = Vec::with_capacity(cfg.n);
    for v in 0..cfg.n {
        comms[group(v)].push(name(v));
        all_nodes.push(name(v));
    }
    if net.node_count() < cfg.n {
        net = crate::model::build_network(vec![], all_nodes, net.edges().cloned().collect(), None)?;
    }
    let net = net.derive_degree_profiles();

    let mut params = BTreeMap::new();
    params.insert("n".into(), cfg.n.to_string());
    params.insert("k".into(), cfg.k.to_string());
    params.insert("p_in".into(), cfg.p_in.to_string());
    params.insert("p_out".into(), cfg.p_out.to_string());
    params.insert("seed".into(), cfg.seed.to_string());
    let planted = Partition::new("ppm-planted", params, comms)?;
    Ok((net, planted))
}
