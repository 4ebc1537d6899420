use alloc::vec::Vec;

use crate::boost::WeightState;
use crate::data::Dataset;
use crate::math::{ln, sqrt_product_sum};

use super::Tree;

/// Weight mass routed to each side of a binary learner `f`:
///
/// `s⁺ = 1/2N Σ [f(x_n)=+1]·w⁺_n + [f(x_n)=−1]·w⁻_n` and `s⁻` with `w⁺`/`w⁻`
/// swapped. With these, the loss after adding `f·a` is
/// `L* − c* + ⟨s⁺, e^a⟩ + ⟨s⁻, e^−a⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitScores {
    pub s_plus: Vec<f64>,
    pub s_minus: Vec<f64>,
}

impl SplitScores {
    /// Accumulate from per-sample outputs, in sample order.
    pub fn from_outputs<I>(outputs: I, weights: &WeightState) -> Self
    where
        I: IntoIterator<Item = f64>,
    {
        let k = weights.n_classes();
        let mut s_plus = alloc::vec![0.0; k];
        let mut s_minus = alloc::vec![0.0; k];
        for (n, out) in outputs.into_iter().enumerate() {
            let (wp, wm) = (weights.plus(n), weights.minus(n));
            let (to_plus, to_minus) = if out > 0.0 { (wp, wm) } else { (wm, wp) };
            for c in 0..k {
                s_plus[c] += to_plus[c];
                s_minus[c] += to_minus[c];
            }
        }
        let scale = 1.0 / (2.0 * weights.n_samples() as f64);
        s_plus.iter_mut().chain(s_minus.iter_mut()).for_each(|v| *v *= scale);
        Self { s_plus, s_minus }
    }

    /// `2⟨sqrt(s⁺ ⊙ s⁻), 1⟩`: the loss above `L* − c*` at the optimal vector.
    pub fn split_loss(&self) -> f64 {
        2.0 * sqrt_product_sum(&self.s_plus, &self.s_minus)
    }

    /// `⟨s⁺ + s⁻, 1⟩`, the same for every learner on a given weight state.
    pub fn total(&self) -> f64 {
        self.s_plus.iter().sum::<f64>() + self.s_minus.iter().sum::<f64>()
    }

    /// `⟨|s⁺ − s⁻|, 1⟩`.
    pub fn imbalance(&self) -> f64 {
        self.s_plus.iter().zip(&self.s_minus).map(|(p, m)| (p - m).abs()).sum()
    }

    pub fn swapped(&self) -> Self {
        Self { s_plus: self.s_minus.clone(), s_minus: self.s_plus.clone() }
    }
}

pub fn accumulate_split(tree: &Tree, data: &Dataset, weights: &WeightState) -> SplitScores {
    SplitScores::from_outputs(data.rows().map(|x| tree.predict(x)), weights)
}

/// Output vector `a_k = ½ ln((s⁻_k + ε)/(s⁺_k + ε))` and the unsmoothed
/// [`SplitScores::split_loss`].
///
/// With `ε = 0` and positive scores this is the exact minimizer of
/// `⟨s⁺, e^a⟩ + ⟨s⁻, e^−a⟩`; `ε > 0` keeps the vector finite on pure splits.
/// Equal sides always yield exactly zero.
pub fn optimal_vector(scores: &SplitScores, epsilon: f64) -> (Vec<f64>, f64) {
    let a = scores
        .s_plus
        .iter()
        .zip(&scores.s_minus)
        .map(|(&p, &m)| if p == m { 0.0 } else { 0.5 * (ln(m + epsilon) - ln(p + epsilon)) })
        .collect();
    (a, scores.split_loss())
}
