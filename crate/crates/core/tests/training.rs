mod common;

use common::{random_costs, random_dataset, rel_close, rng};
use proptest::prelude::*;
use rand::Rng;
use rebel_core::boost::{Trainer, WeightState};
use rebel_core::eval::evaluate;
use rebel_core::loss::surrogate_loss;
use rebel_core::weak::{accumulate_split, grow_layer, stump_search, SearchContext, Tree};
use rebel_core::{train, CostMatrix, Dataset, StopReason, TrainConfig};

fn no_stop(rounds: usize, depth: usize) -> TrainConfig {
    TrainConfig { rounds, tree_depth: depth, n_tau: 40, early_stop_on_certificate: false, ..TrainConfig::default() }
}

#[test]
fn weights_match_scores_recomputed_from_model() {
    let mut r = rng(3);
    for depth in 1..=3 {
        let data = random_dataset(&mut r, 90, 3, 4);
        let costs = random_costs(&mut r, 4);
        let mut t = Trainer::new(&data, &costs, no_stop(25, depth)).unwrap();
        while t.step().unwrap().is_some() {
            let scores: Vec<f64> = data.rows().flat_map(|x| t.model().scores(x).unwrap()).collect();
            for (a, b) in scores.iter().zip(t.scores()) {
                assert!(rel_close(*a, *b, 1e-12));
            }
            let fresh = WeightState::from_scores(&data, &costs, &scores).unwrap();
            for n in 0..data.len() {
                for c in 0..4 {
                    assert!(rel_close(fresh.plus(n)[c], t.weights().plus(n)[c], 1e-9));
                    assert!(rel_close(fresh.minus(n)[c], t.weights().minus(n)[c], 1e-9));
                }
            }
            let report = surrogate_loss(t.model(), &data, &costs).unwrap();
            let rec = t.trace().rounds.last().unwrap();
            assert!(rel_close(report.surrogate, rec.loss, 1e-9));
            assert_eq!(report.risk, rec.train_risk);
        }
    }
}

#[test]
fn two_classes_uniform_costs_are_antisymmetric() {
    let mut r = rng(8);
    for fit_a0 in [true, false] {
        let data = random_dataset(&mut r, 120, 4, 2);
        let costs = CostMatrix::uniform(2);
        let mut t = Trainer::new(&data, &costs, TrainConfig { fit_a0, ..no_stop(30, 2) }).unwrap();
        while t.step().unwrap().is_some() {
            for h in t.scores().chunks(2) {
                assert!((h[0] + h[1]).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn loss_at_round_matches_split_criterion() {
    // with negligible smoothing the fitted vector is the exact minimizer
    let mut r = rng(21);
    for _ in 0..10 {
        let k = r.random_range(2..5);
        let data = random_dataset(&mut r, 80, 3, k);
        let costs = random_costs(&mut r, k);
        let cfg = TrainConfig { epsilon: Some(1e-24), fit_a0: false, ..no_stop(1, 1) };
        let (model, trace) = train(&data, &costs, &cfg).unwrap();
        let report = surrogate_loss(&model, &data, &costs).unwrap();
        let predicted = trace.rounds[0].split_loss - trace.c_star;
        assert!((report.excess - predicted).abs() <= 1e-9, "{} vs {predicted}", report.excess);
    }
}

#[test]
fn duplicated_data_picks_the_same_learners() {
    let mut r = rng(4);
    let data = random_dataset(&mut r, 60, 3, 3);
    let costs = random_costs(&mut r, 3);
    let twice = data.repeated(2);
    let cfg = TrainConfig { epsilon: Some(1e-3), ..no_stop(8, 2) };
    let (a, _) = train(&data, &costs, &cfg).unwrap();
    let (b, _) = train(&twice, &costs, &cfg).unwrap();
    for (ra, rb) in a.rounds().iter().zip(b.rounds()) {
        assert_eq!(ra.tree, rb.tree);
        for (x, y) in ra.vector.iter().zip(&rb.vector) {
            assert!((x - y).abs() <= 1e-9);
        }
    }
}

#[test]
fn prefix_of_long_run_equals_short_run() {
    let mut r = rng(12);
    let data = random_dataset(&mut r, 70, 2, 3);
    let costs = random_costs(&mut r, 3);
    let (long, _) = train(&data, &costs, &no_stop(12, 2)).unwrap();
    for t in [0, 1, 5, 12] {
        let (short, _) = train(&data, &costs, &no_stop(t.max(1), 2)).unwrap();
        let short = if t == 0 { short.truncated(0) } else { short };
        assert_eq!(long.truncated(t), short);
    }
}

#[test]
fn separable_blobs_hit_the_certificate() {
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for i in 0..30 {
        let y = i % 3;
        features.extend_from_slice(&[10.0 * y as f64 + (i as f64 * 0.37).sin(), (i as f64).cos()]);
        labels.push(y);
    }
    let data = Dataset::new(features, 2, labels, 3).unwrap();
    let costs = CostMatrix::from_rows(&[[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [4.0, 1.0, 0.0]]).unwrap();
    let (model, trace) = train(&data, &costs, &TrainConfig { rounds: 5000, ..TrainConfig::default() }).unwrap();
    assert_eq!(trace.stop, Some(StopReason::Certificate));
    assert!(trace.final_loss() < trace.l_bullet);
    assert_eq!(evaluate(&model, &data, &costs).unwrap().risk, 0.0);
}

#[test]
fn xor_needs_depth_two() {
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for (cx, cy, y, m) in [(-1.0, -1.0, 0, 9), (1.0, 1.0, 0, 7), (-1.0, 1.0, 1, 8), (1.0, -1.0, 1, 6)] {
        for i in 0..m {
            features.extend_from_slice(&[cx + 0.1 * (i % 3) as f64 - 0.1, cy + 0.1 * (i / 3) as f64 - 0.1]);
            labels.push(y);
        }
    }
    let data = Dataset::new(features, 2, labels, 2).unwrap();
    let costs = CostMatrix::uniform(2);
    let (_, stumps) = train(&data, &costs, &no_stop(50, 1)).unwrap();
    assert!(stumps.rounds.iter().all(|r| r.train_error > 0.0));
    let (_, trees) = train(&data, &costs, &no_stop(50, 2)).unwrap();
    assert!(trees.rounds.iter().any(|r| r.train_error == 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn loss_never_increases(seed in any::<u64>(), k in 2usize..6, depth in 1usize..4) {
        let mut r = rng(seed);
        let data = random_dataset(&mut r, 60, 3, k);
        let costs = random_costs(&mut r, k);
        let (_, trace) = train(&data, &costs, &no_stop(15, depth)).unwrap();
        let mut prev = trace.initial_loss;
        prop_assert!(trace.initial_loss <= trace.zero_loss);
        for rec in &trace.rounds {
            prop_assert!(rec.loss <= prev, "round {}: {} > {}", rec.round, rec.loss, prev);
            prop_assert!(rec.layer_losses.windows(2).all(|w| w[1] <= w[0]));
            if rec.loss < trace.l_bullet {
                prop_assert_eq!(rec.train_risk, 0.0);
            }
            prev = rec.loss;
        }
    }

    #[test]
    fn growth_never_hurts(seed in any::<u64>(), k in 2usize..5) {
        let mut r = rng(seed);
        let data = random_dataset(&mut r, 50, 2, k);
        let costs = random_costs(&mut r, k);
        let mut w = WeightState::init(&data, &costs).unwrap();
        // perturb the weights with a few random multiplicative updates
        for round in 1..4 {
            let f: Vec<f64> = (0..data.len()).map(|_| if r.random_bool(0.5) { 1.0 } else { -1.0 }).collect();
            let a: Vec<f64> = (0..k).map(|_| r.random_range(-0.5..0.5)).collect();
            w.apply(&f, &a, round).unwrap();
        }
        let ctx = SearchContext::new(&data, 25).unwrap();
        let eps = 1.0 / (2.0 * data.len() as f64 * k as f64);
        let root = stump_search(&ctx, &w, eps).unwrap();
        let mut tree = Tree::stump(root.stump);
        let mut a = root.a_star;
        let mut loss = root.split_loss;
        for _ in 0..3 {
            let g = grow_layer(&ctx, &tree, &a, &w, eps);
            prop_assert!(g.split_loss <= loss);
            prop_assert_eq!(accumulate_split(&g.tree, &data, &w).split_loss(), g.split_loss);
            tree = g.tree;
            a = g.a;
            loss = g.split_loss;
        }
    }
}
