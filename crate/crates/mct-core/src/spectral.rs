//! Spectral clustering of the structural graph: symmetric eigendecomposition
//! of the (unnormalized) Laplacian, embedding in the bottom-k eigenvector
//! space and seeded k-means over the rows.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{DenseMatrix, Partition};
use crate::reciprocity::StructuralResult;

#[derive(Debug, Clone)]
pub struct SpectralConfig {
    /// Cluster count; picked by the largest eigengap when absent.
    pub k: Option<usize>,
    pub kmeans_restarts: usize,
    pub kmeans_max_iter: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig {
            k: None,
            kmeans_restarts: 10,
            kmeans_max_iter: 300,
            seed: 0,
            tol: 1e-9,
        }
    }
}

/// All eigenpairs of a symmetric matrix via the cyclic Jacobi method,
/// ascending by eigenvalue. Deterministic and accurate to well below the
/// tolerances used anywhere in this crate for the matrix sizes we target.
pub fn symmetric_eigen(m: &DenseMatrix) -> Result<(Vec<f64>, DenseMatrix)> {
    if m.rows != m.cols {
        return Err(Error::validation(
            "eigendecomposition needs a square matrix",
        ));
    }
    if m.asymmetry() > 1e-9 {
        return Err(Error::validation(format!(
            "matrix is not symmetric (asymmetry {:.3e})",
            m.asymmetry()
        )));
    }
    let n = m.rows;
    let mut a = m.entries.clone();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += a[i * n + j] * a[i * n + j];
            }
        }
        s
    };

    let max_sweeps = 64;
    for _ in 0..max_sweeps {
        if off(&a) <= 1e-22 * (n * n) as f64 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // rotate rows/columns p and q
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].partial_cmp(&a[j * n + j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = DenseMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors.set(row, col, v[row * n + src]);
        }
    }
    Ok((values, vectors))
}

/// The k smallest eigenpairs of a symmetric Laplacian: eigenvalues ascending,
/// eigenvectors orthonormal columns of an n-by-k matrix.
pub fn laplacian_eigen(l: &DenseMatrix, k: usize) -> Result<(Vec<f64>, DenseMatrix)> {
    if k > l.rows {
        return Err(Error::validation(format!(
            "requested {k} eigenpairs from a {}x{} matrix",
            l.rows, l.cols
        )));
    }
    let (values, vectors) = symmetric_eigen(l)?;
    let mut emb = DenseMatrix::zeros(l.rows, k);
    for r in 0..l.rows {
        for c in 0..k {
            emb.set(r, c, vectors.get(r, c));
        }
    }
    Ok((values[..k].to_vec(), emb))
}

/// Seeded k-means with k-means++ initialization; returns assignments and the
/// within-cluster sum of squares of the best restart.
#[allow(clippy::needless_range_loop)]
pub fn kmeans(
    points: &DenseMatrix,
    k: usize,
    restarts: usize,
    max_iter: usize,
    tol: f64,
    seed: u64,
) -> (Vec<usize>, f64) {
    let n = points.rows;
    let d = points.cols;
    assert!(k >= 1 && k <= n);
    let mut best: Option<(Vec<usize>, f64)> = None;

    for restart in 0..restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart as u64));
        // k-means++ seeding
        let mut centers: Vec<Vec<f64>> = Vec::with_capacity(k);
        centers.push(points.row(rng.random_range(0..n)).to_vec());
        let mut dist2 = vec![0.0f64; n];
        while centers.len() < k {
            let mut total = 0.0;
            for i in 0..n {
                let mut dmin = f64::INFINITY;
                for c in &centers {
                    let mut s = 0.0;
                    for j in 0..d {
                        let diff = points.get(i, j) - c[j];
                        s += diff * diff;
                    }
                    dmin = dmin.min(s);
                }
                dist2[i] = dmin;
                total += dmin;
            }
            if total <= 0.0 {
                // all remaining points coincide with a center
                centers.push(points.row(rng.random_range(0..n)).to_vec());
                continue;
            }
            let mut target = rng.random::<f64>() * total;
            let mut chosen = n - 1;
            for i in 0..n {
                target -= dist2[i];
                if target <= 0.0 {
                    chosen = i;
                    break;
                }
            }
            centers.push(points.row(chosen).to_vec());
        }

        let mut assign = vec![0usize; n];
        let mut wcss = f64::INFINITY;
        for _ in 0..max_iter {
            let mut changed = false;
            let mut new_wcss = 0.0;
            for i in 0..n {
                let mut bestc = 0;
                let mut bestd = f64::INFINITY;
                for (ci, c) in centers.iter().enumerate() {
                    let mut s = 0.0;
                    for j in 0..d {
                        let diff = points.get(i, j) - c[j];
                        s += diff * diff;
                    }
                    if s < bestd {
                        bestd = s;
                        bestc = ci;
                    }
                }
                if assign[i] != bestc {
                    assign[i] = bestc;
                    changed = true;
                }
                new_wcss += bestd;
            }
            // recompute centers
            let mut sums = vec![vec![0.0; d]; k];
            let mut counts = vec![0usize; k];
            for i in 0..n {
                counts[assign[i]] += 1;
                for j in 0..d {
                    sums[assign[i]][j] += points.get(i, j);
                }
            }
            for c in 0..k {
                if counts[c] > 0 {
                    for j in 0..d {
                        centers[c][j] = sums[c][j] / counts[c] as f64;
                    }
                }
            }
            let converged = !changed || (wcss - new_wcss).abs() <= tol * wcss.max(1.0);
            wcss = new_wcss;
            if converged {
                break;
            }
        }
        if best.as_ref().is_none_or(|(_, w)| wcss < *w) {
            best = Some((assign, wcss));
        }
    }
    best.unwrap()
}

/// Pick k from the largest gap among the first min(n, 20) eigenvalues.
pub fn eigengap_k(eigenvalues: &[f64]) -> usize {
    let m = eigenvalues.len().min(20);
    if m < 2 {
        return 1;
    }
    let mut best_k = 1;
    let mut best_gap = f64::NEG_INFINITY;
    for i in 0..(m - 1) {
        let gap = eigenvalues[i + 1] - eigenvalues[i];
        if gap > best_gap {
            best_gap = gap;
            best_k = i + 1;
        }
    }
    best_k
}

/// Spectral clustering of a structural result: embed the nodes in the bottom-k
/// eigenvector space of the Laplacian and cluster the rows with seeded
/// k-means. Deterministic for a fixed seed.
pub fn spectral_cluster(result: &StructuralResult, cfg: &SpectralConfig) -> Result<Partition> {
    cluster_laplacian(&result.laplacian, &result.nodes, cfg, "spectral")
}

/// Spectral clustering over an arbitrary Laplacian with node labels.
pub fn cluster_laplacian(
    laplacian: &DenseMatrix,
    nodes: &[String],
    cfg: &SpectralConfig,
    algorithm: &str,
) -> Result<Partition> {
    let n = nodes.len();
    if n == 0 {
        return Err(Error::validation("cannot cluster an empty network"));
    }
    if let Some(k) = cfg.k {
        if k < 1 {
            return Err(Error::validation("k must be at least 1"));
        }
        if k > n {
            return Err(Error::validation(format!("k = {k} exceeds node count {n}")));
        }
    }
    let (values, vectors) = symmetric_eigen(laplacian)?;
    let k = cfg.k.unwrap_or_else(|| eigengap_k(&values)).min(n);
    let mut emb = DenseMatrix::zeros(n, k);
    for r in 0..n {
        for c in 0..k {
            emb.set(r, c, vectors.get(r, c));
        }
    }
    let (assign, _) = kmeans(
        &emb,
        k,
        cfg.kmeans_restarts,
        cfg.kmeans_max_iter,
        cfg.tol,
        cfg.seed,
    );
    let mut comms: Vec<Vec<String>> = vec![Vec::new(); k];
    for (i, &c) in assign.iter().enumerate() {
        comms[c].push(nodes[i].clone());
    }
    let mut params = BTreeMap::new();
    params.insert("k".to_string(), k.to_string());
    params.insert("seed".to_string(), cfg.seed.to_string());
    Partition::new(algorithm, params, comms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Pair;
    use std::collections::BTreeSet;

    fn laplacian_from_edges(n: usize, edges: &[(usize, usize)]) -> DenseMatrix {
        let mut l = DenseMatrix::zeros(n, n);
        for &(a, b) in edges {
            l.set(a, b, -1.0);
            l.set(b, a, -1.0);
            l.set(a, a, l.get(a, a) + 1.0);
            l.set(b, b, l.get(b, b) + 1.0);
        }
        l
    }

    #[test]
    fn single_edge_eigenvalues() {
        // closed-form 2x2: eigenvalues 0 and 2
        let l = laplacian_from_edges(2, &[(0, 1)]);
        let (vals, vecs) = laplacian_eigen(&l, 2).unwrap();
        assert!((vals[0] - 0.0).abs() < 1e-10);
        assert!((vals[1] - 2.0).abs() < 1e-10);
        // orthonormality
        for c in 0..2 {
            let norm: f64 = (0..2).map(|r| vecs.get(r, c) * vecs.get(r, c)).sum();
            assert!((norm - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn path_graph_eigenvalues() {
        // characteristic polynomial of P3 gives 0, 1, 3
        let l = laplacian_from_edges(3, &[(0, 1), (1, 2)]);
        let (vals, _) = laplacian_eigen(&l, 3).unwrap();
        assert!((vals[0] - 0.0).abs() < 1e-10);
        assert!((vals[1] - 1.0).abs() < 1e-10);
        assert!((vals[2] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn zero_multiplicity_counts_components() {
        // two disjoint triangles -> eigenvalue 0 with multiplicity 2
        let l = laplacian_from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]);
        let (vals, _) = laplacian_eigen(&l, 6).unwrap();
        let zeros = vals.iter().filter(|v| v.abs() < 1e-8).count();
        assert_eq!(zeros, 2);
    }

    #[test]
    fn non_symmetric_rejected() {
        let m = DenseMatrix::from_entries(2, 2, vec![1.0, 0.5, 0.1, 1.0]).unwrap();
        assert!(symmetric_eigen(&m).is_err());
    }

    fn block_result(blocks: &[&[&str]], p_in: f64) -> StructuralResult {
        let mut nodes: Vec<String> = blocks
            .iter()
            .flat_map(|b| b.iter().map(|s| s.to_string()))
            .collect();
        nodes.sort();
        let mut prob = BTreeMap::new();
        for i in 0..nodes.len() {
            for j in (i + 1)..nodes.len() {
                let same = blocks
                    .iter()
                    .any(|b| b.contains(&nodes[i].as_str()) && b.contains(&nodes[j].as_str()));
                let p = if same { p_in } else { 0.0 };
                prob.insert(Pair::new(nodes[i].clone(), nodes[j].clone()), p);
            }
        }
        StructuralResult::from_probabilities(nodes, prob, 0.5)
    }

    #[test]
    fn disjoint_cliques_recovered() {
        let res = block_result(&[&["a", "b", "c"], &["x", "y", "z"]], 0.9);
        let cfg = SpectralConfig {
            k: Some(2),
            seed: 7,
            ..Default::default()
        };
        let part = spectral_cluster(&res, &cfg).unwrap();
        assert_eq!(part.len(), 2);
        let sets: BTreeSet<Vec<String>> = part.communities.iter().cloned().collect();
        assert!(sets.contains(&vec!["a".to_string(), "b".to_string(), "c".to_string()]));
        assert!(sets.contains(&vec!["x".to_string(), "y".to_string(), "z".to_string()]));
    }

    #[test]
    fn single_cluster_when_k1() {
        let res = block_result(&[&["a", "b", "c", "d"]], 0.9);
        let cfg = SpectralConfig {
            k: Some(1),
            ..Default::default()
        };
        let part = spectral_cluster(&res, &cfg).unwrap();
        assert_eq!(part.len(), 1);
        assert_eq!(part.communities[0].len(), 4);
    }

    #[test]
    fn k_larger_than_n_rejected() {
        let res = block_result(&[&["a", "b"]], 0.9);
        let cfg = SpectralConfig {
            k: Some(5),
            ..Default::default()
        };
        assert!(spectral_cluster(&res, &cfg).is_err());
    }

    #[test]
    fn three_planted_blocks_recovered() {
        let res = block_result(&[&["a", "b", "c"], &["d", "e", "f"], &["g", "h", "i"]], 0.9);
        let cfg = SpectralConfig {
            k: Some(3),
            seed: 11,
            ..Default::default()
        };
        let part = spectral_cluster(&res, &cfg).unwrap();
        assert_eq!(part.len(), 3);
        for c in &part.communities {
            assert_eq!(c.len(), 3);
        }
        // brute-force: the planted assignment minimizes the k-means objective
        // over all 3-colorings of the 9 embedding rows
        let (values, vectors) = symmetric_eigen(&res.laplacian).unwrap();
        assert!(values[0].abs() < 1e-9);
        let mut emb = DenseMatrix::zeros(9, 3);
        for r in 0..9 {
            for c in 0..3 {
                emb.set(r, c, vectors.get(r, c));
            }
        }
        #[allow(clippy::needless_range_loop)]
        let wcss = |assign: &[usize]| -> f64 {
            let mut sums = vec![vec![0.0; 3]; 3];
            let mut counts = [0usize; 3];
            for i in 0..9 {
                counts[assign[i]] += 1;
                for j in 0..3 {
                    sums[assign[i]][j] += emb.get(i, j);
                }
            }
            let mut total = 0.0;
            for i in 0..9 {
                for j in 0..3 {
                    let c = sums[assign[i]][j] / counts[assign[i]] as f64;
                    let d = emb.get(i, j) - c;
                    total += d * d;
                }
            }
            total
        };
        let planted = vec![0, 0, 0, 1, 1, 1, 2, 2, 2];
        let planted_wcss = wcss(&planted);
        let mut best = f64::INFINITY;
        for code in 0..3usize.pow(9) {
            let mut assign = vec![0usize; 9];
            let mut c = code;
            for item in assign.iter_mut() {
                *item = c % 3;
                c /= 3;
            }
            if (0..3).any(|k| !assign.contains(&k)) {
                continue;
            }
            best = best.min(wcss(&assign));
        }
        assert!(planted_wcss <= best + 1e-12);
    }

    #[test]
    fn fixed_seed_is_deterministic() {
        let res = block_result(&[&["a", "b", "c"], &["x", "y", "z"]], 0.9);
        let cfg = SpectralConfig {
            k: Some(2),
            seed: 3,
            ..Default::default()
        };
        let p1 = spectral_cluster(&res, &cfg).unwrap();
        let p2 = spectral_cluster(&res, &cfg).unwrap();
        assert_eq!(p1, p2);
    }

    #[test]
    fn relabeling_invariance_on_separated_blocks() {
        // renaming the nodes renames the communities but not their shapes
        let res1 = block_result(&[&["a", "b", "c"], &["x", "y", "z"]], 0.9);
        let res2 = block_result(&[&["p", "q", "r"], &["s", "t", "u"]], 0.9);
        let cfg = SpectralConfig {
            k: Some(2),
            seed: 5,
            ..Default::default()
        };
        let p1 = spectral_cluster(&res1, &cfg).unwrap();
        let p2 = spectral_cluster(&res2, &cfg).unwrap();
        let mut s1: Vec<usize> = p1.communities.iter().map(|c| c.len()).collect();
        let mut s2: Vec<usize> = p2.communities.iter().map(|c| c.len()).collect();
        s1.sort_unstable();
        s2.sort_unstable();
        assert_eq!(s1, s2);
    }

    #[test]
    fn eigengap_heuristic() {
        assert_eq!(eigengap_k(&[0.0, 0.001, 2.0, 2.1]), 2);
        assert_eq!(eigengap_k(&[0.0, 5.0, 5.5]), 1);
    }
}
