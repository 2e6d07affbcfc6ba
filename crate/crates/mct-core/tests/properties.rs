//! Property tests for the invariants that hold over random inputs.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use mct_core::metrics::{
    brute_force_best_modularity, ecdf, modularity, nmi, rand_jaccard, UndirectedGraph,
};
use mct_core::model::DenseMatrix;
use mct_core::model::{build_network, undirected_view, Category, NodeProfile, Pair, Partition};
use mct_core::nmf::{nmf_factorize, NmfProblem};
use mct_core::reciprocity::{f_sim, feature_jaccard, reciprocity_prob, ReciprocityConfig};
use mct_core::textual::js_distance;

fn arb_profile(id: usize) -> impl Strategy<Value = NodeProfile> {
    (0u64..100_000, 0u64..100_000, any::<bool>()).prop_map(move |(ind, out, v)| {
        NodeProfile::new(
            format!("n{id}"),
            ind,
            out,
            if v {
                Category::Verified
            } else {
                Category::Unverified
            },
        )
    })
}

fn arb_simplex(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(1e-6..1.0f64, dim).prop_map(|mut v| {
        let s: f64 = v.iter().sum();
        for x in v.iter_mut() {
            *x /= s;
        }
        // repair rounding so the sum is exactly 1 within validation bounds
        let s: f64 = v.iter().sum();
        v[0] += 1.0 - s;
        v
    })
}

proptest! {
    #[test]
    fn reciprocity_prob_is_symmetric(a in arb_profile(0), b in arb_profile(1)) {
        let cfg = ReciprocityConfig::default();
        prop_assert_eq!(
            reciprocity_prob(&a, &b, &cfg).to_bits(),
            reciprocity_prob(&b, &a, &cfg).to_bits()
        );
    }

    #[test]
    fn jaccard_is_quantized(a in arb_profile(0), b in arb_profile(1)) {
        let cfg = ReciprocityConfig::default();
        let j = feature_jaccard(&a, &b, &cfg);
        let scaled = j * 3.0;
        prop_assert!((scaled - scaled.round()).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&j));
    }

    #[test]
    fn threshold_consistency(
        profiles in proptest::collection::vec((0u64..10_000, 0u64..10_000, any::<bool>()), 2..12),
        tau in 0.05f64..0.95,
    ) {
        let profiles: Vec<NodeProfile> = profiles
            .into_iter()
            .enumerate()
            .map(|(i, (ind, out, v))| NodeProfile::new(
                format!("n{i}"),
                ind,
                out,
                if v { Category::Verified } else { Category::Unverified },
            ))
            .collect();
        let net = build_network(profiles, vec![], vec![], None).unwrap();
        let cfg = ReciprocityConfig { tau, ..Default::default() };
        let res = f_sim(&net, &cfg).unwrap();
        for (pair, &p) in &res.prob {
            prop_assert_eq!(res.related.contains(pair), p >= tau);
            prop_assert_eq!(res.unrelated.contains(pair), p < tau);
        }
        // Laplacian rows sum to zero
        for i in 0..res.laplacian.rows {
            prop_assert!(res.laplacian.row_sum(i).abs() < 1e-12);
        }
    }

    #[test]
    fn undirected_view_count_identity(
        edges in proptest::collection::btree_set((0usize..12, 0usize..12), 0..60)
    ) {
        let edge_list: Vec<(String, String)> = edges
            .iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (format!("v{a}"), format!("v{b}")))
            .collect();
        let nodes: Vec<String> = (0..12).map(|i| format!("v{i}")).collect();
        let net = build_network(vec![], nodes, edge_list, None).unwrap();
        let view = undirected_view(&net);
        prop_assert_eq!(
            view.one_edge.len(),
            net.edge_count() - 2 * view.reciprocal.len()
        );
        // reciprocal set at most half the directed edges
        prop_assert!(view.reciprocal.len() * 2 <= net.edge_count());
    }

    #[test]
    fn js_distance_is_a_metric(
        dim in 2usize..8,
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |dim: usize| -> Vec<f64> {
            let mut v: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() + 1e-9).collect();
            let s: f64 = v.iter().sum();
            for x in v.iter_mut() { *x /= s; }
            let s: f64 = v.iter().sum();
            v[0] += 1.0 - s;
            v
        };
        let (x, y, z) = (draw(dim), draw(dim), draw(dim));
        let dxy = js_distance(&x, &y).unwrap();
        let dyx = js_distance(&y, &x).unwrap();
        prop_assert_eq!(dxy.to_bits(), dyx.to_bits());
        prop_assert!((0.0..=1.0).contains(&dxy));
        prop_assert!(js_distance(&x, &x).unwrap() < 1e-12);
        let dxz = js_distance(&x, &z).unwrap();
        let dyz = js_distance(&y, &z).unwrap();
        prop_assert!(dxy <= dxz + dyz + 1e-9);
    }

    #[test]
    fn simplex_strategy_round_trip(x in arb_simplex(5)) {
        // the strategy itself produces valid distributions
        prop_assert!(js_distance(&x, &x).is_ok());
    }

    #[test]
    fn nmf_preserves_nonnegativity(
        seed in any::<u64>(),
        rows in 3usize..10,
        cols in 2usize..6,
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let entries: Vec<f64> = (0..rows * cols).map(|_| rng.random::<f64>()).collect();
        let d = DenseMatrix::from_entries(rows, cols, entries).unwrap();
        let k = 2.min(rows.min(cols));
        let problem = NmfProblem::new(d, k).unwrap();
        let out = nmf_factorize(&problem, 50, 0.0, seed).unwrap();
        prop_assert!(out.p.entries.iter().all(|&v| v >= 0.0));
        prop_assert!(out.q.entries.iter().all(|&v| v >= 0.0));
        for w in out.trace.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-10 * w[0].abs().max(1.0));
        }
    }

    #[test]
    fn modularity_bounded_by_bruteforce(
        edges in proptest::collection::btree_set((0usize..6, 0usize..6), 1..15),
        split in proptest::collection::vec(0usize..3, 6),
    ) {
        let edge_list: Vec<(String, String)> = edges
            .iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (format!("v{a}"), format!("v{b}")))
            .collect();
        prop_assume!(!edge_list.is_empty());
        let nodes: Vec<String> = (0..6).map(|i| format!("v{i}")).collect();
        let net = build_network(vec![], nodes.clone(), edge_list, None).unwrap();
        let graph = UndirectedGraph::from_network(&net);
        prop_assume!(graph.edge_count() > 0);
        let (best_q, _) = brute_force_best_modularity(&graph, 6).unwrap();
        let mut comms: Vec<Vec<String>> = vec![Vec::new(); 3];
        for (i, &c) in split.iter().enumerate() {
            comms[c].push(format!("v{i}"));
        }
        let part = Partition::new("x", BTreeMap::new(), comms).unwrap();
        let q = modularity(&graph, &part).unwrap();
        prop_assert!(q <= best_q + 1e-12);
    }

    #[test]
    fn nmi_and_rand_are_symmetric(
        l1 in proptest::collection::vec(0usize..3, 6),
        l2 in proptest::collection::vec(0usize..3, 6),
    ) {
        let to_part = |labels: &[usize]| {
            let mut comms: Vec<Vec<String>> = vec![Vec::new(); 3];
            for (i, &c) in labels.iter().enumerate() {
                comms[c].push(format!("v{i}"));
            }
            Partition::new("x", BTreeMap::new(), comms).unwrap()
        };
        let (p1, p2) = (to_part(&l1), to_part(&l2));
        let ab = nmi(&p1, &p2).unwrap();
        let ba = nmi(&p2, &p1).unwrap();
        prop_assert!((ab - ba).abs() < 1e-12);
        let (r1, j1) = rand_jaccard(&p1, &p2).unwrap();
        let (r2, j2) = rand_jaccard(&p2, &p1).unwrap();
        prop_assert_eq!(r1.to_bits(), r2.to_bits());
        prop_assert_eq!(j1.to_bits(), j2.to_bits());
        prop_assert!(r1 >= j1);
    }

    #[test]
    fn ecdf_matches_rank_oracle(values in proptest::collection::vec(-1000.0f64..1000.0, 1..100)) {
        let table = ecdf(&values);
        // independent rank computation: P(X <= x) = #(v <= x) / n
        let n = values.len() as f64;
        for (x, p) in &table {
            let count = values.iter().filter(|v| *v <= x).count();
            prop_assert!((p - count as f64 / n).abs() < 1e-12);
        }
        prop_assert!((table.last().unwrap().1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pair_normalizes_order(a in 0usize..30, b in 0usize..30) {
        prop_assume!(a != b);
        let p1 = Pair::new(format!("{a}"), format!("{b}"));
        let p2 = Pair::new(format!("{b}"), format!("{a}"));
        prop_assert_eq!(p1, p2);
    }
}

#[test]
fn partition_file_roundtrip_random() {
    // serde round-trips over a spread of shapes; one seeded loop instead of
    // a proptest regression file for IO
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    let dir = std::env::temp_dir().join(format!("mct-prop-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for round in 0..20 {
        let n = rng.random_range(1..20usize);
        let k = rng.random_range(1..=n);
        let mut comms: Vec<Vec<String>> = vec![Vec::new(); k];
        for i in 0..n {
            let c = rng.random_range(0..k);
            comms[c].push(format!("node-{i}"));
        }
        let part = Partition::new("rt", BTreeMap::new(), comms).unwrap();
        let path = dir.join(format!("part-{round}.json"));
        mct_core::ingest::write_partition_json(&path, &part).unwrap();
        let reread = mct_core::ingest::read_partition_json(&path).unwrap();
        assert_eq!(part, reread);
    }
}

#[test]
fn fsim_related_pairs_recoverable_from_sets() {
    // the related/unrelated split partitions the pair universe
    let profiles = vec![
        NodeProfile::new("a", 10, 10, Category::Verified),
        NodeProfile::new("b", 11, 11, Category::Verified),
        NodeProfile::new("c", 10_000, 2, Category::Unverified),
        NodeProfile::new("d", 3, 9_000, Category::Unverified),
    ];
    let net = build_network(profiles, vec![], vec![], None).unwrap();
    let res = f_sim(&net, &ReciprocityConfig::default()).unwrap();
    let mut all: BTreeSet<Pair> = BTreeSet::new();
    all.extend(res.related.iter().cloned());
    all.extend(res.unrelated.iter().cloned());
    assert_eq!(all.len(), 6);
    assert!(res.related.intersection(&res.unrelated).next().is_none());
}
