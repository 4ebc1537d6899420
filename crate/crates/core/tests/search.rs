mod common;

use common::{random_costs, random_dataset, rng};
use rand::Rng;
use rebel_core::boost::WeightState;
use rebel_core::weak::{accumulate_split, first_near_min, stump_search, Polarity, SearchContext, Stump, Tree};
use rebel_core::{train, TrainConfig};

/// Every (feature, threshold) scored by routing each sample through the stump.
fn naive_search(ctx: &SearchContext<'_>, w: &WeightState) -> (usize, f64, f64) {
    let grid = ctx.grid();
    let mut candidates = Vec::new();
    for j in 0..grid.n_features() {
        for &tau in grid.thresholds(j) {
            let value = if grid.is_constant(j) {
                f64::INFINITY
            } else {
                let s = accumulate_split(&Tree::stump(Stump::new(j, tau, Polarity::Positive)), ctx.data(), w);
                s.split_loss()
            };
            candidates.push((j, tau, value));
        }
    }
    let values: Vec<f64> = candidates.iter().map(|c| c.2).collect();
    candidates[first_near_min(&values).unwrap()]
}

#[test]
fn histogram_search_matches_naive_scan() {
    let mut r = rng(11);
    for case in 0..40 {
        let k = r.random_range(2..6);
        let d = r.random_range(1..6);
        let n_tau = r.random_range(1..2000 / d);
        let n = r.random_range(k..80);
        let data = random_dataset(&mut r, n, d, k);
        let costs = random_costs(&mut r, k);
        let ctx = SearchContext::new(&data, n_tau).unwrap();
        // start from trained weights so they are far from uniform
        let cfg =
            TrainConfig { rounds: case % 4 + 1, n_tau, early_stop_on_certificate: false, ..TrainConfig::default() };
        let (model, _) = train(&data, &costs, &cfg).unwrap();
        let scores: Vec<f64> = data.rows().flat_map(|x| model.scores(x).unwrap()).collect();
        let w = WeightState::from_scores(&data, &costs, &scores).unwrap();

        let fast = stump_search(&ctx, &w, 1e-3).unwrap();
        let (j, tau, value) = naive_search(&ctx, &w);
        assert_eq!((fast.stump.feature, fast.stump.threshold), (j, tau), "case {case}");
        assert!(common::rel_close(fast.split_loss, value, 1e-12), "case {case}: {} vs {value}", fast.split_loss);
    }
}

#[test]
fn scores_conserve_mass_and_polarity_is_redundant() {
    let mut r = rng(5);
    let data = random_dataset(&mut r, 50, 3, 4);
    let costs = random_costs(&mut r, 4);
    let w = WeightState::init(&data, &costs).unwrap();
    let ctx = SearchContext::new(&data, 15).unwrap();
    let base = accumulate_split(&Tree::stump(Stump::new(0, -10.0, Polarity::Positive)), &data, &w).total();
    for j in 0..3 {
        for &tau in ctx.grid().thresholds(j) {
            let stump = Stump::new(j, tau, Polarity::Positive);
            let s = accumulate_split(&Tree::stump(stump), &data, &w);
            assert!(common::rel_close(s.total(), base, 1e-12));
            let flipped = Stump::new(j, tau, Polarity::Negative);
            let t = accumulate_split(&Tree::stump(flipped), &data, &w);
            assert_eq!(t, s.swapped());
            assert_eq!(t.split_loss(), s.split_loss());
        }
    }
}

/// With `w⁺_n = w_n(1 + y*_n)/(2K)·1` and `w⁻_n = w_n(1 − y*_n)/(2K)·1`, the
/// multi-class condition value collapses to the binary weighted correlation.
#[test]
fn weak_learning_condition_witness() {
    let mut r = rng(77);
    for _ in 0..100 {
        let k = r.random_range(2..6);
        let n = r.random_range(5..40);
        let data = random_dataset(&mut r, n.max(k), 2, k);
        let n = data.len();
        let w: Vec<f64> = (0..n).map(|_| r.random_range(0.01..2.0)).collect();
        let ystar: Vec<f64> = (0..n).map(|_| if r.random_bool(0.5) { 1.0 } else { -1.0 }).collect();
        let plus: Vec<f64> = (0..n).flat_map(|i| vec![w[i] * (1.0 + ystar[i]) / (2.0 * k as f64); k]).collect();
        let minus: Vec<f64> = (0..n).flat_map(|i| vec![w[i] * (1.0 - ystar[i]) / (2.0 * k as f64); k]).collect();
        let ws = WeightState::from_parts(n, k, plus, minus).unwrap();
        let ctx = SearchContext::new(&data, 10).unwrap();
        for j in 0..2 {
            for &tau in ctx.grid().thresholds(j) {
                let stump = Stump::new(j, tau, Polarity::Positive);
                let f: Vec<f64> = data.rows().map(|x| stump.predict(x)).collect();
                let multi: f64 =
                    (0..k).map(|c| (0..n).map(|i| (ws.plus(i)[c] - ws.minus(i)[c]) * f[i]).sum::<f64>().abs()).sum();
                let binary = (0..n).map(|i| w[i] * ystar[i] * f[i]).sum::<f64>().abs();
                assert!((multi - binary).abs() <= 1e-12 * binary.max(1.0));
            }
        }
    }
}
