//! Non-negative matrix factorization of the network-communities matrix with
//! multiplicative updates, plus the affinity-constrained joint variant used
//! for microcosm detection.
//!
//! The plain objective is ||D - P Q^T||_F^2. The joint variant rewards
//! aligning the node factor P with a symmetric non-negative affinity A: the
//! P-update numerator gains lambda * (A P). Taken literally as subtracting
//! lambda * Tr(P^T A P) from the objective this is unbounded below (the
//! factorization's scale symmetry lets P grow and Q shrink without limit),
//! so the iteration also carries the degree term lambda * (D_A P) in the
//! denominator, which amounts to the bounded objective
//! ||D - P Q^T||_F^2 + lambda * Tr(P^T L_A P) with L_A the affinity
//! Laplacian. Updates keep P and Q strictly non-negative; a small guard
//! keeps denominators away from zero.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{DenseMatrix, NetworkData, Partition};

const DENOM_GUARD: f64 = 1e-12;

/// A factorization instance: the data matrix, the inner rank, the joint
/// weight and an optional affinity for the trace term.
#[derive(Debug, Clone)]
pub struct NmfProblem {
    pub data: DenseMatrix,
    pub rank: usize,
    pub lambda_joint: f64,
    pub affinity: Option<DenseMatrix>,
}

impl NmfProblem {
    pub fn new(data: DenseMatrix, rank: usize) -> Result<NmfProblem> {
        if data.entries.iter().any(|&v| v < 0.0) {
            return Err(Error::validation("data matrix must be non-negative"));
        }
        if rank == 0 || rank > data.rows.min(data.cols) {
            return Err(Error::validation(format!(
                "rank {rank} out of range for {}x{} matrix",
                data.rows, data.cols
            )));
        }
        Ok(NmfProblem {
            data,
            rank,
            lambda_joint: 0.0,
            affinity: None,
        })
    }

    pub fn with_joint(mut self, lambda: f64, affinity: DenseMatrix) -> Result<NmfProblem> {
        if lambda < 0.0 {
            return Err(Error::validation("lambda must be non-negative"));
        }
        if affinity.rows != self.data.rows || affinity.cols != self.data.rows {
            return Err(Error::validation("affinity must be n x n"));
        }
        if affinity.asymmetry() > 1e-9 {
            return Err(Error::validation("affinity must be symmetric"));
        }
        if affinity.entries.iter().any(|&v| v < 0.0) {
            return Err(Error::validation("affinity must be non-negative"));
        }
        self.lambda_joint = lambda;
        self.affinity = Some(affinity);
        Ok(self)
    }
}

/// Result of a factorization run: the factors and the objective value per
/// iteration (index 0 is the objective of the initial factors).
#[derive(Debug, Clone)]
pub struct NmfOutcome {
    pub p: DenseMatrix,
    pub q: DenseMatrix,
    pub trace: Vec<f64>,
    pub iterations: usize,
}

fn objective(problem: &NmfProblem, p: &DenseMatrix, q: &DenseMatrix) -> f64 {
    let approx = p.matmul(&q.transpose());
    let mut frob = 0.0;
    for (a, b) in problem.data.entries.iter().zip(approx.entries.iter()) {
        let d = a - b;
        frob += d * d;
    }
    let mut obj = frob;
    if let Some(aff) = &problem.affinity {
        if problem.lambda_joint > 0.0 {
            // Tr(P^T L_A P) = 1/2 sum_ij A_ij ||p_i - p_j||^2
            let mut smooth = 0.0;
            for i in 0..p.rows {
                for j in 0..p.rows {
                    let a = aff.get(i, j);
                    if a == 0.0 || i == j {
                        continue;
                    }
                    let mut dist2 = 0.0;
                    for s in 0..p.cols {
                        let d = p.get(i, s) - p.get(j, s);
                        dist2 += d * d;
                    }
                    smooth += a * dist2;
                }
            }
            obj += problem.lambda_joint * 0.5 * smooth;
        }
    }
    obj
}

/// Seeded uniform initialization with values in (0, 1].
fn init_factor(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(rows, cols);
    for v in m.entries.iter_mut() {
        *v = 1.0 - rng.random::<f64>(); // (0, 1]
    }
    m
}

fn run(
    problem: &NmfProblem,
    mut p: DenseMatrix,
    mut q: DenseMatrix,
    max_iter: usize,
    tol: f64,
) -> Result<NmfOutcome> {
    let d = &problem.data;
    let mut trace = Vec::with_capacity(max_iter + 1);
    trace.push(objective(problem, &p, &q));

    // row sums of the affinity, for the degree term in the P denominator
    let aff_degree: Option<Vec<f64>> = match (&problem.affinity, problem.lambda_joint > 0.0) {
        (Some(aff), true) => Some((0..aff.rows).map(|i| aff.row_sum(i)).collect()),
        _ => None,
    };

    let mut iterations = 0;
    for _ in 0..max_iter {
        // P update: numerator (DQ) [+ lambda * A P],
        // denominator (P Q^T Q) [+ lambda * D_A P]
        let dq = d.matmul(&q);
        let qtq = q.transpose().matmul(&q);
        let pqtq = p.matmul(&qtq);
        let ap = match (&problem.affinity, problem.lambda_joint > 0.0) {
            (Some(aff), true) => Some(aff.matmul(&p)),
            _ => None,
        };
        for i in 0..p.rows {
            for s in 0..p.cols {
                let mut num = dq.get(i, s);
                let mut den = pqtq.get(i, s) + DENOM_GUARD;
                if let Some(ap) = &ap {
                    num += problem.lambda_joint * ap.get(i, s);
                    den += problem.lambda_joint * aff_degree.as_ref().unwrap()[i] * p.get(i, s);
                }
                p.set(i, s, p.get(i, s) * num / den);
            }
        }
        // Q update: numerator (D^T P), denominator (Q P^T P)
        let dtp = d.transpose().matmul(&p);
        let ptp = p.transpose().matmul(&p);
        let qptp = q.matmul(&ptp);
        for j in 0..q.rows {
            for s in 0..q.cols {
                let num = dtp.get(j, s);
                let den = qptp.get(j, s) + DENOM_GUARD;
                q.set(j, s, q.get(j, s) * num / den);
            }
        }
        iterations += 1;
        let obj = objective(problem, &p, &q);
        if !obj.is_finite() {
            return Err(Error::numeric("NMF objective became non-finite"));
        }
        let prev = *trace.last().unwrap();
        trace.push(obj);
        let denom_rel = prev.abs().max(1e-30);
        if ((prev - obj).abs() / denom_rel) < tol {
            break;
        }
    }
    p.row_labels = problem.data.row_labels.clone();
    q.row_labels = problem.data.col_labels.clone();
    Ok(NmfOutcome {
        p,
        q,
        trace,
        iterations,
    })
}

/// Plain factorization with seeded random initialization.
pub fn nmf_factorize(
    problem: &NmfProblem,
    max_iter: usize,
    tol: f64,
    seed: u64,
) -> Result<NmfOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = init_factor(problem.data.rows, problem.rank, &mut rng);
    let q = init_factor(problem.data.cols, problem.rank, &mut rng);
    run(problem, p, q, max_iter, tol)
}

/// Factorization from explicit starting factors; used to verify fixed points.
pub fn nmf_factorize_from(
    problem: &NmfProblem,
    p0: DenseMatrix,
    q0: DenseMatrix,
    max_iter: usize,
    tol: f64,
) -> Result<NmfOutcome> {
    if p0.rows != problem.data.rows || p0.cols != problem.rank {
        return Err(Error::validation("P0 has wrong shape"));
    }
    if q0.rows != problem.data.cols || q0.cols != problem.rank {
        return Err(Error::validation("Q0 has wrong shape"));
    }
    run(problem, p0, q0, max_iter, tol)
}

/// Joint factorization with the affinity trace term; identical to
/// nmf_factorize when lambda is zero.
pub fn nmf_joint(problem: &NmfProblem, max_iter: usize, tol: f64, seed: u64) -> Result<NmfOutcome> {
    if problem.lambda_joint > 0.0 && problem.affinity.is_none() {
        return Err(Error::validation("joint factorization needs an affinity"));
    }
    nmf_factorize(problem, max_iter, tol, seed)
}

/// Bucket nodes into network-size quantile bands and return the n x bands
/// indicator matrix. Node sizes are indegree + outdegree from profiles.
pub fn build_size_matrix(net: &NetworkData, bands: usize) -> Result<DenseMatrix> {
    if bands == 0 {
        return Err(Error::validation("need at least one band"));
    }
    if !net.has_profiles() {
        return Err(Error::validation("network has no profiles"));
    }
    let nodes = net.nodes();
    let mut sizes = Vec::with_capacity(nodes.len());
    for id in nodes {
        let p = net
            .profile(id)
            .ok_or_else(|| Error::validation(format!("missing profile for node {id}")))?;
        sizes.push(p.network_size() as f64);
    }
    let mut sorted = sizes.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // quantile cut points at j/bands, linear interpolation
    let mut cuts = Vec::with_capacity(bands.saturating_sub(1));
    for j in 1..bands {
        let q = j as f64 / bands as f64;
        let pos = q * (sorted.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        let cut = sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64);
        cuts.push(cut);
    }
    let mut m = DenseMatrix::zeros(nodes.len(), bands);
    for (i, &s) in sizes.iter().enumerate() {
        let mut band = bands - 1;
        for (b, &cut) in cuts.iter().enumerate() {
            if s <= cut {
                band = b;
                break;
            }
        }
        m.set(i, band, 1.0);
    }
    Ok(m.with_labels(Some(nodes.to_vec()), None))
}

/// Argmax-row community extraction from a non-negative node-by-community
/// factor; ties go to the lowest index and empty communities are dropped.
#[allow(clippy::needless_range_loop)]
pub fn factors_to_partition(p: &DenseMatrix, algorithm: &str) -> Result<Partition> {
    if p.entries.iter().any(|&v| v < 0.0) {
        return Err(Error::validation("factor must be non-negative"));
    }
    let labels = match &p.row_labels {
        Some(l) => l.clone(),
        None => (0..p.rows).map(|i| i.to_string()).collect(),
    };
    let mut comms: Vec<Vec<String>> = vec![Vec::new(); p.cols];
    for i in 0..p.rows {
        let mut best = 0usize;
        let mut best_v = f64::NEG_INFINITY;
        for s in 0..p.cols {
            let v = p.get(i, s);
            if v > best_v {
                best_v = v;
                best = s;
            }
        }
        comms[best].push(labels[i].clone());
    }
    Partition::new(algorithm, BTreeMap::new(), comms)
}
