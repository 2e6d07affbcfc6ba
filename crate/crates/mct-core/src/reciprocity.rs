//! Reciprocity prediction (f-sim): per-feature ratio tests, Jaccard index,
//! constant error term and the logistic reciprocity probability, plus the
//! structural matrices (adjacency, degree, Laplacian) built from it.
//!
//! Note that the probability is non-monotone in the Jaccard index: with the
//! default error term 1/3 it evaluates to about 0.99988, 0.99154 and 0.98211
//! for J = 1/3, 2/3 and 1, and exactly 0 for J = 0. This is the formula as
//! defined; do not "fix" it without a config flag.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::model::{DenseMatrix, NetworkData, NodeProfile, Pair};

/// Parameters of the reciprocity predictor.
#[derive(Debug, Clone)]
pub struct ReciprocityConfig {
    /// Similarity threshold tau in (0,1).
    pub tau: f64,
    /// Constant error term zeta (> 0).
    pub zeta: f64,
    /// Closed interval for the per-feature ratio test; must contain 1.
    pub ratio_band: (f64, f64),
}

impl Default for ReciprocityConfig {
    fn default() -> Self {
        ReciprocityConfig {
            tau: 0.5,
            zeta: 1.0 / 3.0,
            ratio_band: (0.75, 1.25),
        }
    }
}

impl ReciprocityConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(Error::validation("tau must lie in (0,1)"));
        }
        if self.zeta <= 0.0 {
            return Err(Error::validation("zeta must be positive"));
        }
        let (lo, hi) = self.ratio_band;
        if !(lo <= 1.0 && 1.0 <= hi) {
            return Err(Error::validation("ratio band must contain 1"));
        }
        Ok(())
    }
}

/// Ratio test for one count feature. Both counts zero compare as identical;
/// exactly one zero is dissimilar; otherwise the ratio in either direction
/// must fall inside the band, which makes the test symmetric.
fn ratio_similar(a: u64, b: u64, band: (f64, f64)) -> bool {
    if a == 0 && b == 0 {
        return true;
    }
    if a == 0 || b == 0 {
        return false;
    }
    let (lo, hi) = band;
    let r1 = a as f64 / b as f64;
    let r2 = b as f64 / a as f64;
    (lo <= r1 && r1 <= hi) || (lo <= r2 && r2 <= hi)
}

/// Jaccard index over the three profile features {indegree, outdegree,
/// category}: the fraction of features whose comparison passes. Count
/// features use the ratio band test, the category compares by equality,
/// so the result is one of {0, 1/3, 2/3, 1}.
pub fn feature_jaccard(a: &NodeProfile, b: &NodeProfile, cfg: &ReciprocityConfig) -> f64 {
    let mut matches = 0u32;
    if ratio_similar(a.indegree, b.indegree, cfg.ratio_band) {
        matches += 1;
    }
    if ratio_similar(a.outdegree, b.outdegree, cfg.ratio_band) {
        matches += 1;
    }
    if a.category == b.category {
        matches += 1;
    }
    matches as f64 / 3.0
}

/// Reciprocity probability for a Jaccard value: the error term
/// eps = 1 / (zeta * (1 + ln(J + zeta))), then p = 1 / (1 + e^phi) with
/// phi = -ln(eps + J) * (eps + J). Outside the formula's domain (the error
/// term undefined or non-positive, or eps + J non-positive) the probability
/// is defined as 0: no shared features never predict reciprocity.
pub fn prob_from_jaccard(j: f64, zeta: f64) -> f64 {
    if j + zeta <= 0.0 {
        return 0.0;
    }
    let denom = 1.0 + (j + zeta).ln();
    if denom <= 0.0 {
        return 0.0;
    }
    let eps = 1.0 / (zeta * denom);
    let x = eps + j;
    if x <= 0.0 {
        return 0.0;
    }
    let phi = -x.ln() * x;
    1.0 / (1.0 + phi.exp())
}

/// Reciprocity probability between two profiles; symmetric in its arguments.
pub fn reciprocity_prob(a: &NodeProfile, b: &NodeProfile, cfg: &ReciprocityConfig) -> f64 {
    prob_from_jaccard(feature_jaccard(a, b, cfg), cfg.zeta)
}

/// Output of f-sim: related/unrelated pair sets, the probability map and the
/// structural matrices. The adjacency is binary per the threshold; the degree
/// matrix is its diagonal row-sum; the Laplacian carries -p(R) off-diagonal
/// for pairs above the threshold with the weighted degree on the diagonal,
/// so every row sums to zero.
#[derive(Debug, Clone)]
pub struct StructuralResult {
    pub nodes: Vec<String>,
    pub related: BTreeSet<Pair>,
    pub unrelated: BTreeSet<Pair>,
    pub prob: BTreeMap<Pair, f64>,
    pub adjacency: DenseMatrix,
    pub degree: DenseMatrix,
    pub laplacian: DenseMatrix,
    pub tau: f64,
}

impl StructuralResult {
    /// Assemble a result from an explicit probability map over pairs. This is
    /// the single construction path used by f-sim, and lets tests force a
    /// given similar-pair set directly.
    pub fn from_probabilities(
        nodes: Vec<String>,
        prob: BTreeMap<Pair, f64>,
        tau: f64,
    ) -> StructuralResult {
        let n = nodes.len();
        let index: BTreeMap<&str, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, id)| (id.as_str(), i))
            .collect();
        let mut related = BTreeSet::new();
        let mut unrelated = BTreeSet::new();
        let mut adjacency = DenseMatrix::zeros(n, n);
        let mut weighted = DenseMatrix::zeros(n, n);
        for (pair, &p) in &prob {
            let (i, j) = (index[pair.0.as_str()], index[pair.1.as_str()]);
            if p >= tau {
                related.insert(pair.clone());
                adjacency.set(i, j, 1.0);
                adjacency.set(j, i, 1.0);
                weighted.set(i, j, p);
                weighted.set(j, i, p);
            } else {
                unrelated.insert(pair.clone());
            }
        }
        let mut degree = DenseMatrix::zeros(n, n);
        let mut laplacian = DenseMatrix::zeros(n, n);
        for i in 0..n {
            degree.set(i, i, adjacency.row_sum(i));
            // Diagonal accumulated from the same values as the row, so each
            // Laplacian row sums to zero exactly.
            let mut d = 0.0;
            for j in 0..n {
                let w = weighted.get(i, j);
                if w != 0.0 {
                    laplacian.set(i, j, -w);
                    d += w;
                }
            }
            laplacian.set(i, i, d);
        }
        let labels: Vec<String> = nodes.clone();
        StructuralResult {
            nodes,
            related,
            unrelated,
            prob,
            adjacency: adjacency.with_labels(Some(labels.clone()), Some(labels.clone())),
            degree: degree.with_labels(Some(labels.clone()), Some(labels.clone())),
            laplacian: laplacian.with_labels(Some(labels.clone()), Some(labels)),
            tau,
        }
    }

    pub fn probability(&self, a: &str, b: &str) -> Option<f64> {
        self.prob.get(&Pair::new(a, b)).copied()
    }

    /// Node ids that appear in at least one related pair.
    pub fn related_nodes(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for Pair(a, b) in &self.related {
            out.insert(a.clone());
            out.insert(b.clone());
        }
        out
    }
}

/// Run f-sim over all unordered node pairs of the network: compute p(R) for
/// each pair, split into related/unrelated by tau, and build the structural
/// matrices. Every node must have a profile.
pub fn f_sim(net: &NetworkData, cfg: &ReciprocityConfig) -> Result<StructuralResult> {
    cfg.validate()?;
    let nodes = net.nodes().to_vec();
    let mut profiles = Vec::with_capacity(nodes.len());
    for id in &nodes {
        match net.profile(id) {
            Some(p) => profiles.push(p),
            None => return Err(Error::validation(format!("missing profile for node {id}"))),
        }
    }
    let mut prob = BTreeMap::new();
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            let p = reciprocity_prob(profiles[i], profiles[j], cfg);
            prob.insert(Pair::new(nodes[i].clone(), nodes[j].clone()), p);
        }
    }
    Ok(StructuralResult::from_probabilities(nodes, prob, cfg.tau))
}

/// Prediction quality of a structural result against a ground-truth set of
/// reciprocal pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyReport {
    /// The recall-style accuracy: |related AND truth| / |truth|.
    pub accuracy: f64,
    pub precision: f64,
    pub f1: f64,
    pub predicted: usize,
    pub truth: usize,
    pub hits: usize,
}

/// Ratio of predicted reciprocal ties to true reciprocal ties, with precision
/// and F1 carried alongside.
pub fn prediction_accuracy(
    result: &StructuralResult,
    truth: &BTreeSet<Pair>,
) -> Result<AccuracyReport> {
    if truth.is_empty() {
        return Err(Error::validation("no ground truth"));
    }
    let hits = result.related.intersection(truth).count();
    let accuracy = hits as f64 / truth.len() as f64;
    let precision = if result.related.is_empty() {
        0.0
    } else {
        hits as f64 / result.related.len() as f64
    };
    let f1 = if precision + accuracy == 0.0 {
        0.0
    } else {
        2.0 * precision * accuracy / (precision + accuracy)
    };
    Ok(AccuracyReport {
        accuracy,
        precision,
        f1,
        predicted: result.related.len(),
        truth: truth.len(),
        hits,
    })
}
