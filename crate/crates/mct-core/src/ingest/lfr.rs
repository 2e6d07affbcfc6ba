//! LFR benchmark generator: power-law degrees, power-law community sizes and
//! a mixing parameter that splits each node's edges into intra- and
//! inter-community stubs.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{NetworkData, Partition};

#[derive(Debug, Clone)]
pub struct LfrConfig {
    pub n: usize,
    /// Degree power-law exponent (> 1).
    pub gamma: f64,
    /// Target mean degree.
    pub mean_degree: f64,
    /// Community-size power-law exponent.
    pub community_exponent: f64,
    pub c_min: usize,
    pub c_max: usize,
    /// Mixing parameter: the fraction of each node's edges leaving its
    /// community.
    pub mu: f64,
    /// Degree cutoff; defaults to three times the mean degree, the shape
    /// used by the common LFR benchmark configurations.
    pub max_degree: Option<usize>,
    pub seed: u64,
}

impl Default for LfrConfig {
    fn default() -> Self {
        // the synthetic-network defaults used throughout the experiments
        LfrConfig {
            n: 1000,
            gamma: 1.5,
            mean_degree: 15.0,
            community_exponent: 0.8,
            c_min: 30,
            c_max: 300,
            mu: 0.1,
            max_degree: None,
            seed: 0,
        }
    }
}

impl LfrConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::validation("n must be positive"));
        }
        if self.gamma <= 1.0 {
            return Err(Error::validation("gamma must exceed 1"));
        }
        if !(0.0..=1.0).contains(&self.mu) {
            return Err(Error::validation("mu must lie in [0,1]"));
        }
        if self.c_min > self.c_max || self.c_max > self.n {
            return Err(Error::validation("need c_min <= c_max <= n"));
        }
        if self.mean_degree <= 0.0 || self.mean_degree >= self.n as f64 {
            return Err(Error::validation("mean degree out of range"));
        }
        Ok(())
    }
}

/// Mean of the continuous truncated power law with density x^-gamma on
/// [lo, hi].
fn powerlaw_mean(gamma: f64, lo: f64, hi: f64) -> f64 {
    let a = 1.0 - gamma;
    let b = 2.0 - gamma;
    let num = if b.abs() < 1e-12 {
        (hi / lo).ln()
    } else {
        (hi.powf(b) - lo.powf(b)) / b
    };
    let den = if a.abs() < 1e-12 {
        (hi / lo).ln()
    } else {
        (hi.powf(a) - lo.powf(a)) / a
    };
    num / den
}

/// Inverse-CDF sample from the continuous truncated power law.
fn powerlaw_sample(rng: &mut ChaCha8Rng, gamma: f64, lo: f64, hi: f64) -> f64 {
    let a = 1.0 - gamma;
    let u: f64 = rng.random();
    if a.abs() < 1e-12 {
        (lo.ln() + u * (hi.ln() - lo.ln())).exp()
    } else {
        (lo.powf(a) + u * (hi.powf(a) - lo.powf(a))).powf(1.0 / a)
    }
}

/// Find degree bounds [k_min, k_max] hitting the target mean. Normally the
/// lower cutoff is solved by bisection; for heavy tails (gamma <= 2) the
/// truncated mean grows with the upper cutoff, so when even k_min = 1
/// overshoots the target the upper cutoff is lowered instead.
fn solve_degree_bounds(gamma: f64, mean: f64, k_max: f64) -> Result<(f64, f64)> {
    if powerlaw_mean(gamma, k_max, k_max) < mean {
        return Err(Error::validation(
            "mean degree unreachable: exceeds the degree cutoff",
        ));
    }
    if powerlaw_mean(gamma, 1.0, k_max) > mean {
        // lower the upper cutoff with k_min pinned at 1
        let (mut lo, mut hi) = (1.0f64, k_max);
        if powerlaw_mean(gamma, 1.0, 1.0 + 1e-9) > mean {
            return Err(Error::validation("mean degree unreachable: below 1"));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if powerlaw_mean(gamma, 1.0, mid) < mean {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return Ok((1.0, 0.5 * (lo + hi)));
    }
    let (mut lo, mut hi) = (1.0f64, k_max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if powerlaw_mean(gamma, mid, k_max) < mean {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi), k_max))
}

/// Draw community sizes summing exactly to n, each inside [c_min, c_max].
fn draw_community_sizes(cfg: &LfrConfig, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    for _ in 0..100 {
        let mut sizes: Vec<usize> = Vec::new();
        let mut total = 0usize;
        while total < cfg.n {
            let s = powerlaw_sample(
                rng,
                cfg.community_exponent,
                cfg.c_min as f64,
                cfg.c_max as f64 + 1.0,
            )
            .floor() as usize;
            let s = s.clamp(cfg.c_min, cfg.c_max);
            sizes.push(s);
            total += s;
        }
        let overshoot = total - cfg.n;
        if overshoot == 0 {
            return Ok(sizes);
        }
        // shrink the last community; fold it into the others when it gets
        // too small
        let last = *sizes.last().unwrap();
        if last > overshoot && last - overshoot >= cfg.c_min {
            *sizes.last_mut().unwrap() = last - overshoot;
            return Ok(sizes);
        }
        let mut deficit = last as i64 - overshoot as i64;
        sizes.pop();
        let mut idx = 0usize;
        let mut ok = !sizes.is_empty();
        while deficit > 0 && ok {
            let mut progressed = false;
            for s in sizes.iter_mut() {
                if deficit == 0 {
                    break;
                }
                if *s < cfg.c_max {
                    *s += 1;
                    deficit -= 1;
                    progressed = true;
                }
            }
            if !progressed {
                ok = false;
            }
            idx += 1;
            if idx > cfg.n {
                ok = false;
            }
        }
        while deficit < 0 && ok {
            let mut progressed = false;
            for s in sizes.iter_mut() {
                if deficit == 0 {
                    break;
                }
                if *s > cfg.c_min {
                    *s -= 1;
                    deficit += 1;
                    progressed = true;
                }
            }
            if !progressed {
                ok = false;
            }
        }
        if ok && deficit == 0 && sizes.iter().sum::<usize>() == cfg.n {
            return Ok(sizes);
        }
    }
    Err(Error::validation(
        "could not draw feasible community sizes after 100 attempts",
    ))
}

/// Whether matched stubs must stay inside one community or cross.
#[derive(Clone, Copy, PartialEq)]
enum StubMode {
    Within,
    Cross,
}

/// Match stubs uniformly at random into simple edges. Colliding pairs are
/// first retried by reshuffling, then absorbed by rewiring an already
/// accepted edge (which preserves all degrees); only truly stuck stubs are
/// dropped. Every edge created here, including rewired ones, respects the
/// within/cross community discipline.
fn match_stubs(
    stubs: &mut Vec<usize>,
    edges: &mut BTreeSet<(usize, usize)>,
    community: &[usize],
    mode: StubMode,
    rng: &mut ChaCha8Rng,
) {
    let valid = |a: usize, b: usize, edges: &BTreeSet<(usize, usize)>| -> bool {
        if a == b {
            return false;
        }
        if edges.contains(&(a.min(b), a.max(b))) {
            return false;
        }
        match mode {
            StubMode::Within => community[a] == community[b],
            StubMode::Cross => community[a] != community[b],
        }
    };

    stubs.shuffle(rng);
    let mut retries = 0usize;
    while stubs.len() >= 2 && retries < 50 {
        let mut leftovers = Vec::new();
        let mut i = 0;
        while i + 1 < stubs.len() {
            let (a, b) = (stubs[i], stubs[i + 1]);
            i += 2;
            if valid(a, b, edges) {
                edges.insert((a.min(b), a.max(b)));
            } else {
                leftovers.push(a);
                leftovers.push(b);
            }
        }
        if i < stubs.len() {
            leftovers.push(stubs[i]);
        }
        *stubs = leftovers;
        stubs.shuffle(rng);
        retries += 1;
    }

    // swap repair: connect the stub pair (a,b) by rewiring an accepted edge
    // (c,d) into (a,c) and (b,d); degrees of c and d are unchanged
    if stubs.len() >= 2 {
        let pool: Vec<(usize, usize)> = edges.iter().copied().collect();
        if !pool.is_empty() {
            let mut remaining = Vec::new();
            while stubs.len() >= 2 {
                let b = stubs.pop().unwrap();
                let a = stubs.pop().unwrap();
                let mut placed = false;
                for _ in 0..500 {
                    let &(c, d) = &pool[rng.random_range(0..pool.len())];
                    if !edges.contains(&(c, d)) {
                        continue; // already rewired away
                    }
                    let (x, y) = if rng.random::<bool>() { (c, d) } else { (d, c) };
                    if valid(a, x, edges) && valid(b, y, edges) {
                        edges.remove(&(c, d));
                        edges.insert((a.min(x), a.max(x)));
                        edges.insert((b.min(y), b.max(y)));
                        placed = true;
                        break;
                    }
                }
                if !placed {
                    remaining.push(a);
                    remaining.push(b);
                }
            }
            *stubs = remaining;
        }
    }
    // whatever is left is genuinely stuck; dropping it costs a negligible
    // degree deviation
    stubs.clear();
}

/// Generate an LFR benchmark graph with its planted partition. The graph is
/// undirected; both arcs are stored. Pure function of the config (seed
/// included): identical inputs give identical outputs.
pub fn generate_lfr(cfg: &LfrConfig) -> Result<(NetworkData, Partition)> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    // community sizes first: the degree cutoff must respect the largest
    // community actually drawn, or high-degree nodes have nowhere to live
    let sizes = draw_community_sizes(cfg, &mut rng)?;
    let max_size = *sizes.iter().max().unwrap();

    let degree_cutoff = cfg
        .max_degree
        .map(|k| k as f64)
        .unwrap_or(3.0 * cfg.mean_degree);
    let k_cap = (((max_size - 1) as f64) / (1.0 - cfg.mu).max(1e-9))
        .min(degree_cutoff)
        .min((cfg.n - 1) as f64)
        .max(2.0);
    let (k_min, k_max) = solve_degree_bounds(cfg.gamma, cfg.mean_degree, k_cap)?;

    let mut degrees: Vec<usize> = (0..cfg.n)
        .map(|_| powerlaw_sample(&mut rng, cfg.gamma, k_min, k_max + 1.0).round() as usize)
        .map(|k| k.clamp(1, k_max as usize))
        .collect();
    if degrees.iter().sum::<usize>() % 2 == 1 {
        degrees[0] += 1;
    }

    // assign nodes to communities so each internal degree fits; big nodes
    // first, preferring the roomiest community that can hold them
    let intra_of = |k: usize| ((1.0 - cfg.mu) * k as f64).round() as usize;
    let mut community: Vec<usize> = vec![usize::MAX; cfg.n];
    let mut assigned = false;
    for _attempt in 0..100 {
        let mut order: Vec<usize> = (0..cfg.n).collect();
        order.shuffle(&mut rng);
        order.sort_by(|&a, &b| degrees[b].cmp(&degrees[a]));
        let mut remaining: Vec<usize> = sizes.clone();
        let mut ok = true;
        for &v in &order {
            let intra = intra_of(degrees[v]);
            let mut candidates: Vec<usize> = (0..sizes.len())
                .filter(|&c| remaining[c] > 0 && sizes[c] > intra)
                .collect();
            if candidates.is_empty() {
                ok = false;
                break;
            }
            // among the fitting communities pick one of the roomiest, with
            // a seeded shuffle so ties break differently across attempts
            candidates.shuffle(&mut rng);
            candidates.sort_by(|&a, &b| remaining[b].cmp(&remaining[a]));
            let c = candidates[0];
            community[v] = c;
            remaining[c] -= 1;
        }
        if ok {
            assigned = true;
            break;
        }
    }
    if !assigned {
        return Err(Error::validation(
            "could not assign nodes to communities after 100 attempts; \
             degrees too large for the community sizes",
        ));
    }

    // split stubs into intra and inter parts
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut inter_stubs: Vec<usize> = Vec::new();
    let mut intra_stubs: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..cfg.n {
        let intra = ((1.0 - cfg.mu) * degrees[v] as f64).round() as usize;
        let intra = intra.min(sizes[community[v]] - 1).min(degrees[v]);
        let inter = degrees[v] - intra;
        for _ in 0..intra {
            intra_stubs.entry(community[v]).or_default().push(v);
        }
        for _ in 0..inter {
            inter_stubs.push(v);
        }
    }
    for stubs in intra_stubs.values_mut() {
        // an odd stub is dropped rather than rewired across communities, so
        // mu = 0 stays strictly internal
        if stubs.len() % 2 == 1 {
            stubs.pop();
        }
        match_stubs(stubs, &mut edges, &community, StubMode::Within, &mut rng);
    }
    if inter_stubs.len() % 2 == 1 {
        inter_stubs.pop();
    }
    match_stubs(
        &mut inter_stubs,
        &mut edges,
        &community,
        StubMode::Cross,
        &mut rng,
    );

    let width = (cfg.n as f64).log10().ceil() as usize;
    let name = |v: usize| format!("{v:0width$}");
    let mut arcs: Vec<(String, String)> = Vec::with_capacity(edges.len() * 2);
    for &(a, b) in &edges {
        arcs.push((name(a), name(b)));
        arcs.push((name(b), name(a)));
    }
    // nodes that lost every stub in repair still belong to the graph
    let all_nodes: Vec<String> = (0..cfg.n).map(name).collect();
    let net = crate::model::build_network(vec![], all_nodes, arcs, None)?.derive_degree_profiles();

    let mut comms: Vec<Vec<String>> = vec![Vec::new(); sizes.len()];
    for v in 0..cfg.n {
        comms[community[v]].push(name(v));
    }
    let mut params = BTreeMap::new();
    params.insert("n".into(), cfg.n.to_string());
    params.insert("gamma".into(), cfg.gamma.to_string());
    params.insert("mean_degree".into(), cfg.mean_degree.to_string());
    params.insert("mu".into(), cfg.mu.to_string());
    params.insert("seed".into(), cfg.seed.to_string());
    let planted = Partition::new("lfr-planted", params, comms)?;
    Ok((net, planted))
}
