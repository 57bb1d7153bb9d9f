use std::collections::{BTreeMap, BTreeSet};

use maximin::cascade::{exact_access, prob_est, CascadeConfig};
use maximin::centrality::{closeness, harmonic, ppr, PprParams};
use maximin::eval::fit_beta;
use maximin::graph::{compute_features, generate, Graph};
use maximin::meta::forest::ForestParams;
use maximin::meta::{coverage, select_ensemble, train_meta, BetaTable, EnsembleSet, LabeledNetwork, MetaModel};
use maximin::seeders::{select_seeds, SeedError};
use maximin::{AlgorithmId, Domain, Regime, SeederParams};
use proptest::prelude::*;

fn small_graph() -> impl Strategy<Value = Graph> {
    (2usize..40, any::<u64>(), 0.0f64..1.0).prop_map(|(n, seed, density)| {
        let max_m = n * (n - 1) / 2;
        let m = ((max_m as f64 * density * 0.3) as usize).max(n - 1).min(max_m);
        generate::gnm(n, m, seed)
    })
}

fn tiny_graph() -> impl Strategy<Value = Graph> {
    (3usize..7, any::<u64>()).prop_map(|(n, seed)| {
        let m = (n + 2).min(n * (n - 1) / 2);
        generate::gnm(n, m, seed).largest_component()
    })
}

fn floyd_warshall(g: &Graph) -> Vec<Vec<u64>> {
    let n = g.node_count();
    let inf = u64::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for (u, v) in g.edges() {
        d[u][v] = 1;
        d[v][u] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

fn permute(g: &Graph, perm: &[usize]) -> Graph {
    Graph::from_edges(g.node_count(), g.edges().map(|(u, v)| (perm[u], perm[v]))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn centrality_matches_floyd_warshall(g in small_graph()) {
        let d = floyd_warshall(&g);
        let inf = u64::MAX / 4;
        let (c, h) = (closeness(&g), harmonic(&g));
        for v in 0..g.node_count() {
            let reach: Vec<u64> = d[v].iter().copied().filter(|&x| x > 0 && x < inf).collect();
            let total: u64 = reach.iter().sum();
            let want_c = if total == 0 { 0.0 } else { reach.len() as f64 / total as f64 };
            let want_h: f64 = reach.iter().map(|&x| 1.0 / x as f64).sum();
            prop_assert!((c[v] - want_c).abs() < 1e-12);
            prop_assert!((h[v] - want_h).abs() < 1e-9);
        }
    }

    #[test]
    fn ppr_is_permutation_equivariant(g in small_graph(), shuffle in any::<u64>()) {
        let n = g.node_count();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.sort_by_key(|&i| (i as u64).wrapping_mul(shuffle | 1).rotate_left(17) ^ shuffle);
        let h = permute(&g, &perm);
        let params = PprParams { tol: 1e-12, max_iters: 2000, ..PprParams::default() };
        let a = ppr(&g, &[0], params).unwrap();
        let b = ppr(&h, &[perm[0]], params).unwrap();
        for v in 0..n {
            prop_assert!((a.scores[v] - b.scores[perm[v]]).abs() < 1e-8);
        }
    }

    #[test]
    fn exact_access_grows_with_seed_set(g in tiny_graph(), alpha in 0.05f64..0.95, extra in 1usize..6) {
        let n = g.node_count();
        let small = exact_access(&g, &[0], alpha).unwrap();
        let seeds: Vec<usize> = (0..n).filter(|v| v % extra == 0 || *v == extra % n).collect();
        let big = exact_access(&g, &seeds, alpha).unwrap();
        for v in 0..n {
            prop_assert!(big.pi[v] + 1e-12 >= small.pi[v]);
            prop_assert!((0.0..=1.0).contains(&big.pi[v]));
        }
        for &s in &seeds {
            prop_assert_eq!(big.pi[s], 1.0);
        }
    }

    #[test]
    fn prob_est_is_reproducible_and_thread_independent(g in small_graph(), alpha in 0.0f64..=1.0, seed in any::<u64>()) {
        let cfg = CascadeConfig::new(alpha, 200, seed);
        let a = prob_est(&g, &[0], &cfg).unwrap();
        let b = prob_est(&g, &[0], &cfg.serial()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn beta_is_translation_invariant_and_linear(
        ys in proptest::collection::vec(0.0f64..1.0, 2..12),
        shift in -5.0f64..5.0,
        scale in 0.1f64..10.0,
    ) {
        let pts: Vec<(usize, f64)> = ys.iter().enumerate().map(|(i, &y)| (i + 1, y)).collect();
        let base = fit_beta(&pts).unwrap();
        let shifted: Vec<_> = pts.iter().map(|&(k, y)| (k, y + shift)).collect();
        let scaled: Vec<_> = pts.iter().map(|&(k, y)| (k, y * scale)).collect();
        prop_assert!((fit_beta(&shifted).unwrap() - base).abs() < 1e-9);
        prop_assert!((fit_beta(&scaled).unwrap() - base * scale).abs() < 1e-9 * scale.max(1.0));
    }

    #[test]
    fn seeders_never_repeat_or_reuse_init(g in small_graph(), init_pick in any::<usize>(), alpha in 0.05f64..0.95) {
        let init = init_pick % g.node_count();
        let k = (g.node_count() - 1).min(8);
        let params = SeederParams::new(alpha).with_rounds(30);
        for id in AlgorithmId::ALL {
            let chosen = match select_seeds(id, &g, init, k, &params) {
                Ok(seq) => seq.chosen,
                Err(SeedError::Exhausted { found }) => found,
                Err(e) => return Err(TestCaseError::fail(format!("{id}: {e}"))),
            };
            let unique: BTreeSet<_> = chosen.iter().collect();
            prop_assert_eq!(unique.len(), chosen.len());
            prop_assert!(!chosen.contains(&init));
        }
    }

    #[test]
    fn greedy_coverage_bound(
        cells in proptest::collection::vec(0.0f64..1.2, 8 * 12),
        myo in proptest::collection::vec(-0.02f64..0.1, 12),
        n_net in 1usize..=12,
    ) {
        let algs = [
            AlgorithmId::Random, AlgorithmId::Gonzalez, AlgorithmId::MyopicBfs, AlgorithmId::MyopicPpr,
            AlgorithmId::LeastCentral, AlgorithmId::MinDegreeHc, AlgorithmId::MinDegreeNd, AlgorithmId::MinDegreeNdn,
        ];
        let mut table: BetaTable = BTreeMap::new();
        let mut beta_myopic = BTreeMap::new();
        for n in 0..n_net {
            let net = format!("n{n:02}");
            beta_myopic.insert(net.clone(), myo[n]);
            for (a, &alg) in algs.iter().enumerate() {
                table.entry(net.clone()).or_default().insert(alg, cells[n * 8 + a] * myo[n].abs());
            }
        }
        let greedy = select_ensemble(&table, &beta_myopic, 5).unwrap();
        prop_assert_eq!(greedy.members.len(), 5);
        prop_assert!(!greedy.contains(AlgorithmId::Myopic) && !greedy.contains(AlgorithmId::NaiveMyopic));
        let mut best = 0;
        for mask in 0u32..256 {
            if mask.count_ones() == 5 {
                let set: Vec<_> = (0..8).filter(|i| mask & (1 << i) != 0).map(|i| algs[i]).collect();
                best = best.max(coverage(&set, &table, &beta_myopic));
            }
        }
        prop_assert!(greedy.coverage as f64 >= (1.0 - (-1.0f64).exp()) * best as f64);
    }
}

#[test]
fn meta_model_round_trip_predicts_identically() {
    let ensemble = EnsembleSet::preset(Regime::High);
    let samples: Vec<LabeledNetwork> = (0..40u64)
        .map(|i| {
            let g = generate::barabasi_albert(30 + i as usize, 1 + (i % 3) as usize, i);
            LabeledNetwork {
                name: format!("ba{i}"),
                features: compute_features(&g, Domain::ALL[(i % 6) as usize]),
                label: ensemble.members[(i % 5) as usize],
            }
        })
        .collect();
    let params = ForestParams { n_trees: 25, seed: 4, ..ForestParams::default() };
    let model = train_meta(&samples, &ensemble, 9, &params).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    model.save(&path).unwrap();
    let loaded = MetaModel::load(&path).unwrap();
    assert_eq!(loaded, model);
    for i in 0..100u64 {
        let g = generate::gnm(12 + (i % 20) as usize, 30, 1000 + i).largest_component();
        let f = compute_features(&g, Domain::ALL[(i % 6) as usize]);
        assert_eq!(model.predict_features(&f).unwrap(), loaded.predict_features(&f).unwrap());
    }
}
