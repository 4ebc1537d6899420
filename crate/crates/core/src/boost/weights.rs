use alloc::vec::Vec;

use crate::costs::CostMatrix;
use crate::data::Dataset;
use crate::error::{invalid, Error, Result};
use crate::math::exp;
use crate::weak::{optimal_vector, SplitScores, Tree};

/// Largest weight entry an update may produce before training aborts.
pub const WEIGHT_LIMIT: f64 = 1e300;

/// Per-sample, per-class weight pairs `w⁺_n = c⁺_n ⊙ e^{H(x_n)}` and
/// `w⁻_n = c⁻_n ⊙ e^{−H(x_n)}`, stored row-major `N×K`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightState {
    n: usize,
    k: usize,
    plus: Vec<f64>,
    minus: Vec<f64>,
}

impl WeightState {
    /// Weights of the zero score function: `w± = c±`.
    pub fn init(data: &Dataset, costs: &CostMatrix) -> Result<Self> {
        let zeros = alloc::vec![0.0; data.len() * costs.n_classes()];
        Self::from_scores(data, costs, &zeros)
    }

    /// Weights recomputed from scratch for the given `N×K` scores.
    pub fn from_scores(data: &Dataset, costs: &CostMatrix, scores: &[f64]) -> Result<Self> {
        let k = costs.n_classes();
        if data.n_classes() != k {
            return Err(Error::DimensionMismatch { expected: k, found: data.n_classes() });
        }
        if scores.len() != data.len() * k {
            return Err(Error::DimensionMismatch { expected: data.len() * k, found: scores.len() });
        }
        let terms = costs.class_terms();
        let mut plus = Vec::with_capacity(scores.len());
        let mut minus = Vec::with_capacity(scores.len());
        for (n, &y) in data.labels().iter().enumerate() {
            let h = &scores[n * k..(n + 1) * k];
            for c in 0..k {
                plus.push(terms[y].c_plus[c] * exp(h[c]));
                minus.push(terms[y].c_minus[c] * exp(-h[c]));
            }
        }
        Ok(Self { n: data.len(), k, plus, minus })
    }

    pub fn from_parts(n: usize, k: usize, plus: Vec<f64>, minus: Vec<f64>) -> Result<Self> {
        if plus.len() != n * k || minus.len() != n * k {
            return Err(Error::DimensionMismatch { expected: n * k, found: plus.len().min(minus.len()) });
        }
        if plus.iter().chain(&minus).any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(invalid("weights must be finite and nonnegative"));
        }
        Ok(Self { n, k, plus, minus })
    }

    pub fn n_samples(&self) -> usize {
        self.n
    }

    pub fn n_classes(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn plus(&self, n: usize) -> &[f64] {
        &self.plus[n * self.k..(n + 1) * self.k]
    }

    #[inline]
    pub fn minus(&self, n: usize) -> &[f64] {
        &self.minus[n * self.k..(n + 1) * self.k]
    }

    /// `⟨w⁺_n + w⁻_n, 1⟩` for every sample.
    pub fn sample_mass(&self) -> Vec<f64> {
        (0..self.n).map(|n| self.plus(n).iter().sum::<f64>() + self.minus(n).iter().sum::<f64>()).collect()
    }

    /// Multiply in one round: `w⁺ ← w⁺ ⊙ e^{f·a}`, `w⁻ ← w⁻ ⊙ e^{−f·a}`.
    ///
    /// `outputs` holds `f(x_n) ∈ {±1}`. Fails with [`Error::NumericRange`] if
    /// any entry leaves `[0, WEIGHT_LIMIT]`; the state is then unspecified.
    pub fn apply(&mut self, outputs: &[f64], a: &[f64], round: usize) -> Result<()> {
        if outputs.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: outputs.len() });
        }
        if a.len() != self.k {
            return Err(Error::DimensionMismatch { expected: self.k, found: a.len() });
        }
        let up: Vec<f64> = a.iter().map(|&x| exp(x)).collect();
        let down: Vec<f64> = a.iter().map(|&x| exp(-x)).collect();
        for (n, &f) in outputs.iter().enumerate() {
            let (mp, mm) = if f > 0.0 { (&up, &down) } else { (&down, &up) };
            let range = n * self.k..(n + 1) * self.k;
            for ((wp, wm), c) in self.plus[range.clone()].iter_mut().zip(&mut self.minus[range]).zip(0..self.k) {
                *wp *= mp[c];
                *wm *= mm[c];
                for w in [*wp, *wm] {
                    if !(w <= WEIGHT_LIMIT) {
                        return Err(Error::NumericRange { round, value: w });
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn init_weights(data: &Dataset, costs: &CostMatrix) -> Result<WeightState> {
    WeightState::init(data, costs)
}

/// Apply round `round`'s learner `(tree, a)` to the weights.
pub fn update_weights(weights: &mut WeightState, tree: &Tree, a: &[f64], data: &Dataset, round: usize) -> Result<()> {
    let outputs: Vec<f64> = data.rows().map(|x| tree.predict(x)).collect();
    weights.apply(&outputs, a, round)
}

/// Fit the constant vector `a0` (the closed form for the learner `f ≡ +1`)
/// and fold it into the weights.
pub fn fit_constant(weights: &mut WeightState, epsilon: f64) -> Result<Vec<f64>> {
    let scores = SplitScores::from_outputs(core::iter::repeat_n(1.0, weights.n_samples()), weights);
    let (a0, _) = optimal_vector(&scores, epsilon);
    let ones = alloc::vec![1.0; weights.n_samples()];
    weights.apply(&ones, &a0, 0)?;
    Ok(a0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn init_matches_cost_terms() {
        let d = Dataset::new(vec![0.0, 1.0], 1, vec![0, 2], 3).unwrap();
        let w = WeightState::init(&d, &CostMatrix::uniform(3)).unwrap();
        assert_eq!(w.plus(0), &[0.0, 1.0, 1.0]);
        assert_eq!(w.minus(0), &[1.0, 0.0, 0.0]);
        let costs = CostMatrix::from_rows(&[[0.0, 2.0, 6.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]]).unwrap();
        let w1 = WeightState::init(&d, &costs).unwrap();
        let w3 = WeightState::init(&d, &costs.scaled(3.0).unwrap()).unwrap();
        for n in 0..2 {
            for c in 0..3 {
                assert!((w3.plus(n)[c] - 3.0 * w1.plus(n)[c]).abs() < 1e-12);
                assert!((w3.minus(n)[c] - 3.0 * w1.minus(n)[c]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn single_sample_update() {
        let mut w = WeightState::from_parts(1, 2, vec![1.0, 1.0], vec![1.0, 1.0]).unwrap();
        let ln2 = core::f64::consts::LN_2;
        w.apply(&[1.0], &[ln2, -ln2], 1).unwrap();
        assert!((w.plus(0)[0] - 2.0).abs() < 1e-15 && (w.plus(0)[1] - 0.5).abs() < 1e-15);
        assert!((w.minus(0)[0] - 0.5).abs() < 1e-15 && (w.minus(0)[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn zero_vector_leaves_weights() {
        let mut w = WeightState::from_parts(2, 2, vec![1.0, 2.0, 3.0, 4.0], vec![0.5, 0.0, 1.5, 2.5]).unwrap();
        let before = w.clone();
        w.apply(&[1.0, -1.0], &[0.0, 0.0], 1).unwrap();
        assert_eq!(w, before);
    }

    #[test]
    fn overflow_reports_round() {
        let mut w = WeightState::from_parts(1, 2, vec![1.0, 1.0], vec![1.0, 1.0]).unwrap();
        let err = w.apply(&[1.0], &[700.0, 0.0], 7).unwrap_err();
        assert!(matches!(err, Error::NumericRange { round: 7, .. }));
    }

    #[test]
    fn constant_fit_balanced_and_imbalanced() {
        let balanced = Dataset::new(vec![0.0, 1.0, 2.0, 3.0], 1, vec![0, 1, 0, 1], 2).unwrap();
        let mut w = WeightState::init(&balanced, &CostMatrix::uniform(2)).unwrap();
        assert_eq!(fit_constant(&mut w, 0.1).unwrap(), vec![0.0, 0.0]);

        let labels: Vec<usize> = (0..10).map(|i| usize::from(i == 9)).collect();
        let features = (0..10).map(|i| i as f64).collect();
        let skewed = Dataset::new(features, 1, labels, 2).unwrap();
        let costs = CostMatrix::uniform(2);
        let mut w = WeightState::init(&skewed, &costs).unwrap();
        let eps = 1.0 / 40.0;
        let a0 = fit_constant(&mut w, eps).unwrap();
        // Σw⁻ = [9, 1], Σw⁺ = [1, 9], both over 2N = 20
        let expect = 0.5 * ((9.0f64 / 20.0 + eps).ln() - (1.0f64 / 20.0 + eps).ln());
        assert!((a0[0] - expect).abs() < 1e-14 && a0[0] > 0.0);
        assert!((a0[1] + expect).abs() < 1e-14);

        let scores: Vec<f64> = (0..10).flat_map(|_| a0.clone()).collect();
        let fresh = WeightState::from_scores(&skewed, &costs, &scores).unwrap();
        for n in 0..10 {
            for c in 0..2 {
                assert!((fresh.plus(n)[c] - w.plus(n)[c]).abs() <= 1e-12 * fresh.plus(n)[c].max(1.0));
                assert!((fresh.minus(n)[c] - w.minus(n)[c]).abs() <= 1e-12 * fresh.minus(n)[c].max(1.0));
            }
        }
    }
}
