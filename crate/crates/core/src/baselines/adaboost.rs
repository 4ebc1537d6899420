use alloc::vec::Vec;

use crate::data::Dataset;
use crate::error::{invalid, Result};
use crate::math::{exp, ln, sqrt_product};
use crate::weak::{first_near_min, Polarity, SearchContext, Stump};

#[derive(Debug, Clone, PartialEq)]
pub struct AdaBoostConfig {
    pub rounds: usize,
    pub n_tau: usize,
    /// Added to both weighted error and weighted accuracy inside the log.
    pub smoothing: f64,
}

/// One AdaBoost round and the weighted counts it was chosen from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaBoostRound {
    pub stump: Stump,
    pub alpha: f64,
    /// Weight of misclassified samples; weights start summing to 1.
    pub error: f64,
    pub correct: f64,
}

/// `h(x) = Σ α_t f_t(x)`; class 0 is `y* = +1`, class 1 is `y* = −1`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BinaryAdaBoostModel {
    pub rounds: Vec<AdaBoostRound>,
}

impl BinaryAdaBoostModel {
    pub fn score(&self, x: &[f64]) -> f64 {
        self.rounds.iter().map(|r| r.alpha * r.stump.predict(x)).sum()
    }

    /// Class 0 when `h(x) ≥ 0`.
    pub fn predict(&self, x: &[f64]) -> usize {
        usize::from(self.score(x) < 0.0)
    }
}

/// Discrete AdaBoost over `+1`-polarity stumps on the shared threshold grid.
///
/// Weights are kept unnormalized so they follow `D_n = e^{−y*_n h(x_n)}/N`
/// exactly. Each round picks the stump minimizing `sqrt(err·corr)` (a negative
/// `α` absorbs the polarity), with ties to the lowest feature, then threshold,
/// and sets `α = ½ ln((corr + λ)/(err + λ))`.
pub fn adaboost_train(data: &Dataset, cfg: &AdaBoostConfig) -> Result<BinaryAdaBoostModel> {
    if data.n_classes() != 2 {
        return Err(invalid("AdaBoost needs exactly two classes"));
    }
    if !(cfg.smoothing >= 0.0) {
        return Err(invalid("smoothing must be nonnegative"));
    }
    let ctx = SearchContext::new(data, cfg.n_tau)?;
    let grid = ctx.grid();
    if grid.all_constant() {
        return Err(invalid("every feature is constant; no informative stump exists"));
    }
    let n = data.len();
    let target: Vec<f64> = data.labels().iter().map(|&y| if y == 0 { 1.0 } else { -1.0 }).collect();
    let mut d = alloc::vec![1.0 / n as f64; n];
    let bins: Vec<Vec<usize>> =
        (0..data.n_features()).map(|j| data.rows().map(|x| grid.bin(j, x[j])).collect()).collect();

    let mut model = BinaryAdaBoostModel::default();
    for _ in 0..cfg.rounds {
        // (error, correct) of the stump "+1 above τ" for every grid point
        let mut counts: Vec<(usize, usize, f64, f64)> = Vec::new();
        for j in 0..data.n_features() {
            let n_thr = grid.thresholds(j).len();
            let mut pos = alloc::vec![0.0; n_thr + 1];
            let mut neg = alloc::vec![0.0; n_thr + 1];
            for i in 0..n {
                if target[i] > 0.0 {
                    pos[bins[j][i]] += d[i];
                } else {
                    neg[bins[j][i]] += d[i];
                }
            }
            let total_pos: f64 = pos.iter().sum();
            let total_neg: f64 = neg.iter().sum();
            let (mut below_pos, mut below_neg) = (0.0, 0.0);
            for t in 0..n_thr {
                below_pos += pos[t];
                below_neg += neg[t];
                // above τ predicts +1: errors are negatives above and positives below
                let err = (total_neg - below_neg) + below_pos;
                let corr = (total_pos - below_pos) + below_neg;
                counts.push((j, t, err, corr));
            }
        }
        let criterion: Vec<f64> = counts
            .iter()
            .map(|&(j, _, e, c)| if grid.is_constant(j) { f64::INFINITY } else { sqrt_product(e, c) })
            .collect();
        let pick = first_near_min(&criterion).ok_or_else(|| invalid("AdaBoost criterion is not finite"))?;
        let (j, t, error, correct) = counts[pick];
        let stump = Stump::new(j, grid.thresholds(j)[t], Polarity::Positive);
        let alpha =
            if error == correct { 0.0 } else { 0.5 * (ln(correct + cfg.smoothing) - ln(error + cfg.smoothing)) };
        for (i, x) in data.rows().enumerate() {
            d[i] *= exp(-alpha * target[i] * stump.predict(x));
        }
        model.rounds.push(AdaBoostRound { stump, alpha, error, correct });
    }
    Ok(model)
}
