use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tam_core::affinity::local_affinity;
use tam_core::ensemble::{run_variant, EnsembleConfig, Variant};
use tam_core::eval::report;
use tam_core::eval::Run;
use tam_core::inject::{inject, InjectionConfig};
use tam_core::lamnet::{forward, train, LamnetParams, TrainConfig};
use tam_core::synth::OneClassBenchmark;
use tam_core::{Adjacency, AnomalyKind, AttributedGraph};

fn small_benchmark() -> OneClassBenchmark {
    OneClassBenchmark {
        nodes_per_cluster: 50,
        num_anomalies: 5,
        ..Default::default()
    }
}

fn quick_train(lambda: f64, epochs: usize) -> TrainConfig {
    TrainConfig {
        epochs,
        learning_rate: 1e-3,
        lambda,
        hidden_dims: [16, 16],
        seed: 3,
        ..Default::default()
    }
}

#[test]
fn training_lowers_loss_and_separates_anomalies() {
    let g = small_benchmark().generate(0).unwrap();
    let cfg = TrainConfig {
        learning_rate: 1e-5,
        ..quick_train(0.0, 500)
    };
    let model = train(&g, g.adjacency(), &cfg).unwrap();
    let history = &model.loss_history;
    assert_eq!(history.len(), 501);
    assert!(history[500] < history[0], "{} !< {}", history[500], history[0]);

    let scores = model.score(&g).unwrap().scores;
    let labels = g.labels().unwrap();
    let mean = |anomalous: bool| {
        let picked: Vec<f64> = (0..g.num_nodes()).filter(|&i| labels[i] == anomalous).map(|i| scores[i]).collect();
        picked.iter().sum::<f64>() / picked.len() as f64
    };
    // Higher score means lower affinity.
    assert!(mean(true) > mean(false));
}

#[test]
fn identical_cluster_attributes_leave_nothing_to_learn() {
    // Two clusters with constant, positive attributes and only intra-cluster
    // edges: every neighbor similarity is already 1.
    let n = 12;
    let x = Array2::from_shape_fn((n, 3), |(i, j)| if i < 6 { 1.0 + j as f64 } else { 3.0 - j as f64 + 0.5 });
    let mut edges: Vec<(usize, usize)> = (0..5).map(|i| (i, i + 1)).collect();
    edges.extend((6..11).map(|i| (i, i + 1)));
    let g = AttributedGraph::new(x, Adjacency::from_edges(n, edges)).unwrap();
    let model = train(&g, g.adjacency(), &quick_train(0.0, 100)).unwrap();
    let start = model.loss_history[0];
    for (epoch, l) in model.loss_history.iter().enumerate() {
        assert!((l - start).abs() <= 1e-6, "epoch {epoch}: {l} vs {start}");
    }
}

#[test]
fn affinity_and_forward_commute_with_relabeling() {
    let g = small_benchmark().generate(2).unwrap();
    let mut perm: Vec<usize> = (0..g.num_nodes()).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(8));
    let moved = g.permute(&perm);

    let before = local_affinity(g.attributes().view(), g.adjacency()).unwrap().affinity;
    let after = local_affinity(moved.attributes().view(), moved.adjacency()).unwrap().affinity;
    for (i, &p) in perm.iter().enumerate() {
        assert!((before[i] - after[p]).abs() <= 1e-12);
    }

    let params = LamnetParams::init(g.num_attributes(), [8, 8], 4);
    let h = forward(&params, &g, g.adjacency()).unwrap();
    let h_moved = forward(&params, &moved, moved.adjacency()).unwrap();
    for (i, &p) in perm.iter().enumerate() {
        for c in 0..8 {
            assert!((h[[i, c]] - h_moved[[p, c]]).abs() <= 1e-12);
        }
    }
}

#[test]
fn injected_anomalies_are_reported_by_type() {
    let clean = small_benchmark().generate(1).unwrap();
    // Start from an unlabeled copy so only injected nodes are positives.
    let base = AttributedGraph::new(clean.attributes().clone(), clean.adjacency().clone()).unwrap();
    let cfg = InjectionConfig {
        clique_size: 5,
        num_cliques: 1,
        num_contextual: 5,
        candidate_pool: 20,
        seed: 6,
    };
    let (g, record) = inject(&base, &cfg).unwrap();
    assert_eq!(record.cliques.len(), 1);
    assert_eq!(record.swaps.len(), 5);
    let labels = g.labels().unwrap();
    assert_eq!(labels.iter().filter(|&&l| l).count(), 10);

    let ens = EnsembleConfig {
        runs: 1,
        depth: 2,
        train: quick_train(1.0, 20),
        master_seed: 0,
        jobs: 1,
    };
    let raw = run_variant(&g, Variant::RawAffinity, &ens).unwrap().scores.scores;
    let tam = run_variant(&g, Variant::Tam, &ens).unwrap().scores.scores;
    let runs = [&raw, &tam].map(|scores| Run {
        seed: 0,
        scores,
        labels,
        kinds: g.kinds(),
    });
    let rep = report(&runs).unwrap();
    assert_eq!((rep.n_pos, rep.n_neg), (10, g.num_nodes() - 10));
    let kinds: Vec<AnomalyKind> = rep.per_type.iter().map(|(k, _, _)| *k).collect();
    assert_eq!(kinds, [AnomalyKind::Structural, AnomalyKind::Contextual]);
    for run in &rep.runs {
        assert!((0.0..=1.0).contains(&run.overall.auroc));
    }
    let csv = rep.to_csv();
    assert!(csv.starts_with("metric,run,value\n"));
    assert!(csv.contains("auroc_structural"));
}
