//! Textual similarity (text-sim): tweet preprocessing into shingles, tf-idf
//! aggregation of each node's tweets into a pseudo-document, LDA topic
//! modeling by collapsed Gibbs sampling, and Jensen-Shannon similarity
//! between node topic distributions.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{DenseMatrix, NetworkData, Pair};

/// Default stopword list: articles, pronouns, auxiliaries and conjunctions.
/// Deliberately short so content-bearing adverbs ("now", "here") survive.
pub const DEFAULT_STOPWORDS: &[&str] = &[
    "a", "an", "the", "and", "or", "but", "if", "then", "else", "of", "to", "in", "on", "at",
    "for", "with", "from", "by", "as", "is", "are", "was", "were", "be", "been", "being", "am",
    "do", "does", "did", "have", "has", "had", "it", "its", "this", "that", "these", "those", "i",
    "you", "he", "she", "we", "they", "me", "him", "her", "us", "them", "my", "your", "his",
    "their", "our", "mine", "yours", "will", "would", "shall", "should", "can", "could", "may",
    "might", "must", "not", "no", "nor", "so", "than", "there", "what", "which", "who", "whom",
    "rt",
];

#[derive(Debug, Clone)]
pub struct TextConfig {
    /// Tweets aggregated per node.
    pub tweets_per_node: usize,
    /// Terms retained per node after tf-idf ranking.
    pub top_terms: usize,
    /// Number of LDA topics.
    pub topics: usize,
    /// Document-topic Dirichlet prior; defaults to 50 / topics.
    pub alpha: f64,
    /// Topic-word Dirichlet prior.
    pub beta_prior: f64,
    pub gibbs_iters: usize,
    pub burn_in: usize,
    /// n-gram size for token extraction.
    pub ngram: usize,
    pub stopwords: BTreeSet<String>,
    /// Similarity threshold shared with the structural side.
    pub tau: f64,
    pub seed: u64,
}

impl Default for TextConfig {
    fn default() -> Self {
        let topics = 20;
        TextConfig {
            tweets_per_node: 50,
            top_terms: 100,
            topics,
            alpha: 50.0 / topics as f64,
            beta_prior: 0.01,
            gibbs_iters: 1000,
            burn_in: 200,
            ngram: 1,
            stopwords: DEFAULT_STOPWORDS.iter().map(|s| s.to_string()).collect(),
            tau: 0.5,
            seed: 0,
        }
    }
}

impl TextConfig {
    pub fn with_topics(mut self, topics: usize) -> Self {
        self.topics = topics;
        self.alpha = 50.0 / topics as f64;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.topics < 1 {
            return Err(Error::validation("need at least one topic"));
        }
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(Error::validation("tau must lie in (0,1)"));
        }
        if self.burn_in >= self.gibbs_iters {
            return Err(Error::validation("burn_in must be below gibbs_iters"));
        }
        if self.ngram == 0 {
            return Err(Error::validation("ngram must be at least 1"));
        }
        Ok(())
    }
}

/// Token counts of one preprocessed document.
pub type TokenCounts = BTreeMap<String, usize>;

/// Load a stopword list: one token per line, UTF-8, blank lines ignored.
pub fn load_stopwords(path: &std::path::Path) -> Result<BTreeSet<String>> {
    let data = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        source: e,
    })?;
    Ok(data
        .lines()
        .map(|l| l.trim().to_lowercase())
        .filter(|l| !l.is_empty())
        .collect())
}

fn is_url(tok: &str) -> bool {
    tok.starts_with("http://") || tok.starts_with("https://") || tok.starts_with("www.")
}

/// Lowercase, strip URLs, @-mentions and punctuation, drop stopwords, then
/// count n-gram tokens. An empty result is allowed.
pub fn preprocess(texts: &[String], cfg: &TextConfig) -> Vec<TokenCounts> {
    texts
        .iter()
        .map(|raw| {
            let lower = raw.to_lowercase();
            let mut words: Vec<String> = Vec::new();
            for tok in lower.split_whitespace() {
                if is_url(tok) || tok.starts_with('@') {
                    continue;
                }
                let cleaned: String = tok
                    .chars()
                    .filter(|c| c.is_alphanumeric() || *c == '\'')
                    .collect();
                let cleaned = cleaned.trim_matches('\'').to_string();
                if cleaned.is_empty() || cfg.stopwords.contains(&cleaned) {
                    continue;
                }
                words.push(cleaned);
            }
            let mut counts = TokenCounts::new();
            if cfg.ngram <= 1 {
                for w in words {
                    *counts.entry(w).or_default() += 1;
                }
            } else if words.len() >= cfg.ngram {
                for gram in words.windows(cfg.ngram) {
                    *counts.entry(gram.join(" ")).or_default() += 1;
                }
            }
            counts
        })
        .collect()
}

/// One node's aggregated text: the mean of L2-normalized tf-idf vectors over
/// its tweets, truncated to the top terms, and the pooled token counts over
/// the retained vocabulary (the pseudo-document fed to LDA).
#[derive(Debug, Clone)]
pub struct NodeAggregate {
    pub mean_vector: BTreeMap<String, f64>,
    pub pseudo_doc: TokenCounts,
}

/// Build the aggregate for one node from its preprocessed tweets.
/// tf is the raw count; idf is the smoothed ln((1+N)/(1+df)) + 1 over the
/// node's own tweets; each tweet vector is L2-normalized before averaging.
pub fn aggregate_node(docs: &[TokenCounts], cfg: &TextConfig) -> Result<NodeAggregate> {
    let docs: Vec<&TokenCounts> = docs
        .iter()
        .take(cfg.tweets_per_node.max(1))
        .filter(|d| !d.is_empty())
        .collect();
    if docs.is_empty() {
        return Err(Error::validation("node has no non-empty tweets"));
    }
    let n = docs.len() as f64;
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for d in &docs {
        for term in d.keys() {
            *df.entry(term.as_str()).or_default() += 1;
        }
    }
    let idf: BTreeMap<&str, f64> = df
        .iter()
        .map(|(&t, &f)| (t, ((1.0 + n) / (1.0 + f as f64)).ln() + 1.0))
        .collect();

    let mut mean: BTreeMap<String, f64> = BTreeMap::new();
    for d in &docs {
        let mut norm2 = 0.0;
        for (t, &c) in d.iter() {
            let w = c as f64 * idf[t.as_str()];
            norm2 += w * w;
        }
        let norm = norm2.sqrt();
        for (t, &c) in d.iter() {
            let w = c as f64 * idf[t.as_str()] / norm;
            *mean.entry(t.clone()).or_default() += w / n;
        }
    }

    // retain the top terms by mean weight, ties by term
    let mut ranked: Vec<(&String, &f64)> = mean.iter().collect();
    ranked.sort_by(|a, b| b.1.partial_cmp(a.1).unwrap().then_with(|| a.0.cmp(b.0)));
    let retained: BTreeSet<String> = ranked
        .iter()
        .take(cfg.top_terms.max(1))
        .map(|(t, _)| (*t).clone())
        .collect();

    let mean_vector: BTreeMap<String, f64> = mean
        .into_iter()
        .filter(|(t, _)| retained.contains(t))
        .collect();
    let mut pseudo = TokenCounts::new();
    for d in &docs {
        for (t, &c) in d.iter() {
            if retained.contains(t) {
                *pseudo.entry(t.clone()).or_default() += c;
            }
        }
    }
    Ok(NodeAggregate {
        mean_vector,
        pseudo_doc: pseudo,
    })
}

/// Fitted LDA model: per-document topic distributions, per-topic word
/// distributions and the vocabulary.
#[derive(Debug, Clone)]
pub struct TopicModel {
    pub doc_topic: DenseMatrix,
    pub topic_word: DenseMatrix,
    pub vocabulary: Vec<String>,
}

/// Collapsed Gibbs sampling for LDA over pseudo-documents. Theta and phi are
/// averaged over the post-burn-in iterations; rows are normalized
/// distributions. Deterministic for a fixed seed.
#[allow(clippy::needless_range_loop)]
pub fn fit_lda(docs: &[(String, TokenCounts)], cfg: &TextConfig) -> Result<TopicModel> {
    cfg.validate()?;
    if docs.len() < 2 {
        return Err(Error::validation("LDA needs at least two documents"));
    }
    let mut vocab_set: BTreeSet<&str> = BTreeSet::new();
    for (_, d) in docs {
        for t in d.keys() {
            vocab_set.insert(t);
        }
    }
    if vocab_set.is_empty() {
        return Err(Error::validation("empty vocabulary"));
    }
    let vocabulary: Vec<String> = vocab_set.iter().map(|s| s.to_string()).collect();
    let vindex: BTreeMap<&str, usize> = vocabulary
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();

    let t = cfg.topics;
    let v = vocabulary.len();
    let d = docs.len();
    let alpha = cfg.alpha;
    let beta = cfg.beta_prior;

    // flatten tokens
    let mut token_doc: Vec<usize> = Vec::new();
    let mut token_word: Vec<usize> = Vec::new();
    for (di, (_, counts)) in docs.iter().enumerate() {
        for (term, &c) in counts {
            for _ in 0..c {
                token_doc.push(di);
                token_word.push(vindex[term.as_str()]);
            }
        }
    }
    let total_tokens = token_doc.len();
    if total_tokens == 0 {
        return Err(Error::validation("all documents are empty"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut z: Vec<usize> = (0..total_tokens).map(|_| rng.random_range(0..t)).collect();
    let mut n_dk = vec![0usize; d * t];
    let mut n_kw = vec![0usize; t * v];
    let mut n_k = vec![0usize; t];
    let mut n_d = vec![0usize; d];
    for i in 0..total_tokens {
        n_dk[token_doc[i] * t + z[i]] += 1;
        n_kw[z[i] * v + token_word[i]] += 1;
        n_k[z[i]] += 1;
        n_d[token_doc[i]] += 1;
    }

    let mut theta_acc = vec![0.0f64; d * t];
    let mut phi_acc = vec![0.0f64; t * v];
    let mut samples = 0usize;
    let mut weights = vec![0.0f64; t];

    for iter in 0..cfg.gibbs_iters {
        for i in 0..total_tokens {
            let (di, wi, zi) = (token_doc[i], token_word[i], z[i]);
            n_dk[di * t + zi] -= 1;
            n_kw[zi * v + wi] -= 1;
            n_k[zi] -= 1;

            let mut total = 0.0;
            for k in 0..t {
                let w = (n_dk[di * t + k] as f64 + alpha) * (n_kw[k * v + wi] as f64 + beta)
                    / (n_k[k] as f64 + beta * v as f64);
                weights[k] = w;
                total += w;
            }
            let mut target = rng.random::<f64>() * total;
            let mut new_z = t - 1;
            for (k, &w) in weights.iter().enumerate() {
                target -= w;
                if target <= 0.0 {
                    new_z = k;
                    break;
                }
            }
            z[i] = new_z;
            n_dk[di * t + new_z] += 1;
            n_kw[new_z * v + wi] += 1;
            n_k[new_z] += 1;
        }
        if iter >= cfg.burn_in {
            samples += 1;
            for di in 0..d {
                let denom = n_d[di] as f64 + alpha * t as f64;
                for k in 0..t {
                    theta_acc[di * t + k] += (n_dk[di * t + k] as f64 + alpha) / denom;
                }
            }
            for k in 0..t {
                let denom = n_k[k] as f64 + beta * v as f64;
                for w in 0..v {
                    phi_acc[k * v + w] += (n_kw[k * v + w] as f64 + beta) / denom;
                }
            }
        }
    }

    let s = samples.max(1) as f64;
    let mut doc_topic = DenseMatrix::zeros(d, t);
    for i in 0..d * t {
        doc_topic.entries[i] = theta_acc[i] / s;
    }
    let mut topic_word = DenseMatrix::zeros(t, v);
    for i in 0..t * v {
        topic_word.entries[i] = phi_acc[i] / s;
    }
    doc_topic.row_labels = Some(docs.iter().map(|(id, _)| id.clone()).collect());
    topic_word.col_labels = Some(vocabulary.clone());
    Ok(TopicModel {
        doc_topic,
        topic_word,
        vocabulary,
    })
}

/// Jensen-Shannon distance between two discrete distributions: base-2
/// divergence against the mixture, square-rooted, so both the divergence and
/// the distance live in [0, 1]. Zero-probability terms contribute nothing.
pub fn js_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::validation("distributions differ in length"));
    }
    let (sx, sy) = (x.iter().sum::<f64>(), y.iter().sum::<f64>());
    if (sx - 1.0).abs() > 1e-9 || (sy - 1.0).abs() > 1e-9 {
        return Err(Error::validation("inputs must sum to 1"));
    }
    if x.iter().chain(y.iter()).any(|&v| v < 0.0) {
        return Err(Error::validation("distributions must be non-negative"));
    }
    let mut jsd = 0.0;
    for (&a, &b) in x.iter().zip(y.iter()) {
        let m = 0.5 * (a + b);
        // one commutative term per element keeps the distance bit-exactly
        // symmetric in its arguments
        let ta = if a > 0.0 {
            0.5 * a * (a / m).log2()
        } else {
            0.0
        };
        let tb = if b > 0.0 {
            0.5 * b * (b / m).log2()
        } else {
            0.0
        };
        jsd += ta + tb;
    }
    Ok(jsd.max(0.0).sqrt().min(1.0))
}

/// Textual similarity of two distributions: 1 - JS distance.
pub fn js_similarity(x: &[f64], y: &[f64]) -> Result<f64> {
    Ok(1.0 - js_distance(x, y)?)
}

/// Output of text-sim: related/unrelated pair sets, the affinity matrix over
/// the compared nodes, the node-topic matrix and any nodes excluded for
/// having no usable text.
#[derive(Debug, Clone)]
pub struct TextualResult {
    pub nodes: Vec<String>,
    pub related: BTreeSet<Pair>,
    pub unrelated: BTreeSet<Pair>,
    pub affinity: DenseMatrix,
    pub node_topics: DenseMatrix,
    pub model: TopicModel,
    pub excluded: Vec<String>,
    pub tau: f64,
}

impl TextualResult {
    pub fn similarity(&self, a: &str, b: &str) -> Option<f64> {
        if a == b {
            return Some(1.0);
        }
        let ia = self.nodes.iter().position(|n| n == a)?;
        let ib = self.nodes.iter().position(|n| n == b)?;
        Some(self.affinity.get(ia, ib))
    }
}

/// Run text-sim over the given node set: aggregate each node's tweets, fit
/// LDA on the pseudo-documents, and compare node topic distributions with
/// Jensen-Shannon similarity. Pairs at or above tau are textually related.
/// Nodes without usable text are excluded and reported.
pub fn text_sim(
    candidates: &[String],
    net: &NetworkData,
    cfg: &TextConfig,
) -> Result<TextualResult> {
    cfg.validate()?;
    let mut docs: Vec<(String, TokenCounts)> = Vec::new();
    let mut excluded: Vec<String> = Vec::new();
    for id in candidates {
        let texts = match net.corpus(id) {
            Some(t) if !t.is_empty() => t,
            _ => {
                excluded.push(id.clone());
                continue;
            }
        };
        let counts = preprocess(texts, cfg);
        match aggregate_node(&counts, cfg) {
            Ok(agg) => docs.push((id.clone(), agg.pseudo_doc)),
            Err(_) => excluded.push(id.clone()),
        }
    }
    if docs.len() < 2 {
        return Err(Error::validation(
            "text-sim needs at least two nodes with usable text",
        ));
    }
    let model = fit_lda(&docs, cfg)?;
    let nodes: Vec<String> = docs.iter().map(|(id, _)| id.clone()).collect();
    let n = nodes.len();
    let mut affinity = DenseMatrix::zeros(n, n);
    let mut related = BTreeSet::new();
    let mut unrelated = BTreeSet::new();
    for i in 0..n {
        affinity.set(i, i, 1.0);
        for j in (i + 1)..n {
            let sim = js_similarity(model.doc_topic.row(i), model.doc_topic.row(j))?;
            affinity.set(i, j, sim);
            affinity.set(j, i, sim);
            let pair = Pair::new(nodes[i].clone(), nodes[j].clone());
            if sim >= cfg.tau {
                related.insert(pair);
            } else {
                unrelated.insert(pair);
            }
        }
    }
    let node_topics = model.doc_topic.clone();
    Ok(TextualResult {
        affinity: affinity.with_labels(Some(nodes.clone()), Some(nodes.clone())),
        nodes,
        related,
        unrelated,
        node_topics,
        model,
        excluded,
        tau: cfg.tau,
    })
}
