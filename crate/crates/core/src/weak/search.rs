//! Exhaustive stump search over a threshold grid.
//!
//! Per feature, samples are binned once and per-bin K-vector sums of `w⁺` and
//! `w⁻` are accumulated in O(N·K); prefix sums over the bins then give the
//! split scores of every threshold in O(N_τ·K).

use alloc::vec::Vec;

use crate::boost::WeightState;
use crate::error::{invalid, Result};

use super::{
    accumulate_split, first_near_min, map_features, optimal_vector, Polarity, SearchContext, SplitScores, Stump, Tree,
};

#[derive(Debug, Clone, PartialEq)]
pub struct StumpChoice {
    pub stump: Stump,
    pub threshold_index: usize,
    /// Smoothed output vector paired with the stump.
    pub a_star: Vec<f64>,
    /// `2⟨sqrt(s⁺ ⊙ s⁻), 1⟩` of the chosen stump.
    pub split_loss: f64,
    pub scores: SplitScores,
}

struct FeatureHistogram {
    k: usize,
    plus: Vec<f64>,
    minus: Vec<f64>,
    total_plus: Vec<f64>,
    total_minus: Vec<f64>,
    scale: f64,
}

impl FeatureHistogram {
    fn new(ctx: &SearchContext<'_>, weights: &WeightState, feature: usize) -> Self {
        let k = weights.n_classes();
        let n_bins = ctx.grid().thresholds(feature).len() + 1;
        let mut plus = alloc::vec![0.0; n_bins * k];
        let mut minus = alloc::vec![0.0; n_bins * k];
        for (n, &bin) in ctx.feature_bins(feature).iter().enumerate() {
            let b = bin as usize * k;
            for (acc, w) in plus[b..b + k].iter_mut().zip(weights.plus(n)) {
                *acc += w;
            }
            for (acc, w) in minus[b..b + k].iter_mut().zip(weights.minus(n)) {
                *acc += w;
            }
        }
        let mut total_plus = alloc::vec![0.0; k];
        let mut total_minus = alloc::vec![0.0; k];
        for b in 0..n_bins {
            for c in 0..k {
                total_plus[c] += plus[b * k + c];
                total_minus[c] += minus[b * k + c];
            }
        }
        let scale = 1.0 / (2.0 * weights.n_samples() as f64);
        Self { k, plus, minus, total_plus, total_minus, scale }
    }

    /// Split scores of the `+1`-polarity stump on every threshold, in order.
    fn for_each_threshold(&self, n_thresholds: usize, mut visit: impl FnMut(usize, &[f64], &[f64])) {
        let k = self.k;
        let mut below_plus = alloc::vec![0.0; k];
        let mut below_minus = alloc::vec![0.0; k];
        let mut s_plus = alloc::vec![0.0; k];
        let mut s_minus = alloc::vec![0.0; k];
        for i in 0..n_thresholds {
            for c in 0..k {
                below_plus[c] += self.plus[i * k + c];
                below_minus[c] += self.minus[i * k + c];
                // above the threshold f = +1 keeps (w⁺, w⁻); below it swaps them
                s_plus[c] = ((self.total_plus[c] - below_plus[c]) + below_minus[c]) * self.scale;
                s_minus[c] = ((self.total_minus[c] - below_minus[c]) + below_plus[c]) * self.scale;
            }
            visit(i, &s_plus, &s_minus);
        }
    }

    #[cfg(test)]
    fn scores_at(&self, threshold_index: usize) -> SplitScores {
        let mut out = None;
        self.for_each_threshold(threshold_index + 1, |i, p, m| {
            if i == threshold_index {
                out = Some(SplitScores { s_plus: p.to_vec(), s_minus: m.to_vec() });
            }
        });
        out.expect("threshold index in range")
    }
}

fn split_loss(s_plus: &[f64], s_minus: &[f64]) -> f64 {
    2.0 * crate::math::sqrt_product_sum(s_plus, s_minus)
}

/// The `+1`-polarity stump minimizing `2⟨sqrt(s⁺ ⊙ s⁻), 1⟩` over the whole
/// grid, paired with its smoothed optimal vector.
///
/// Polarity is not searched: with a free vector, `−f` reaches the same loss
/// with `−a`. Constant features are skipped. Ties go to the lowest feature,
/// then the lowest threshold.
pub fn stump_search(ctx: &SearchContext<'_>, weights: &WeightState, epsilon: f64) -> Result<StumpChoice> {
    let grid = ctx.grid();
    if grid.all_constant() {
        return Err(invalid("every feature is constant; no informative stump exists"));
    }
    let per_feature: Vec<Vec<f64>> = map_features(grid.n_features(), |j| {
        let n_thr = grid.thresholds(j).len();
        if grid.is_constant(j) {
            return alloc::vec![f64::INFINITY; n_thr];
        }
        let hist = FeatureHistogram::new(ctx, weights, j);
        let mut values = Vec::with_capacity(n_thr);
        hist.for_each_threshold(n_thr, |_, p, m| values.push(split_loss(p, m)));
        values
    });

    let flat: Vec<f64> = per_feature.iter().flatten().copied().collect();
    let mut pick = first_near_min(&flat).ok_or_else(|| invalid("stump criterion is not finite"))?;
    let mut feature = 0;
    while pick >= per_feature[feature].len() {
        pick -= per_feature[feature].len();
        feature += 1;
    }

    // rescore the winner in sample order, the summation every other path uses
    let stump = Stump::new(feature, grid.thresholds(feature)[pick], Polarity::Positive);
    let scores = accumulate_split(&Tree::stump(stump), ctx.data(), weights);
    let (a_star, split_loss) = optimal_vector(&scores, epsilon);
    Ok(StumpChoice { stump, threshold_index: pick, a_star, split_loss, scores })
}
