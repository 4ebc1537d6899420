use alloc::vec::Vec;

use crate::boost::StrongClassifier;
use crate::costs::CostMatrix;
use crate::error::Result;
use crate::math::exp;

/// Estimated class posterior `p̂(k | x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorEstimate {
    pub probs: Vec<f64>,
}

/// `p̂_k = e^{H_k} / Σ_j e^{H_j}`.
///
/// For two classes trained with uniform costs `H = (h, −h)`, so this is
/// `1/(1 + e^{−2h})`, the population minimizer of the exponential loss.
pub fn posterior_from_scores(h: &[f64]) -> PosteriorEstimate {
    let top = h.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let unnorm: Vec<f64> = h.iter().map(|&v| exp(v - top)).collect();
    let z: f64 = unnorm.iter().sum();
    PosteriorEstimate { probs: unnorm.into_iter().map(|p| p / z).collect() }
}

pub fn estimate_posterior(model: &StrongClassifier, x: &[f64]) -> Result<PosteriorEstimate> {
    Ok(posterior_from_scores(&model.scores(x)?))
}

/// The class with the least expected cost under `posterior`, lowest index on ties.
pub fn two_step_predict(posterior: &PosteriorEstimate, costs: &CostMatrix) -> usize {
    let k = costs.n_classes();
    let expected: Vec<f64> =
        (0..k).map(|pred| posterior.probs.iter().enumerate().map(|(y, p)| p * costs.get(y, pred)).sum()).collect();
    let mut best = 0;
    for c in 1..k {
        if expected[c] < expected[best] {
            best = c;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn posterior_examples() {
        assert_eq!(posterior_from_scores(&[0.0, 0.0, 0.0, 0.0]).probs, vec![0.25; 4]);
        let p = posterior_from_scores(&[10.0, -10.0]).probs;
        assert!((p[1] - 2.06e-9).abs() < 1e-11 && (p[0] - 1.0).abs() < 1e-8);
        let a = posterior_from_scores(&[0.3, -1.2, 2.0]).probs;
        let b = posterior_from_scores(&[5.3, 3.8, 7.0]).probs;
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-15);
        }
    }

    #[test]
    fn expected_cost_decision() {
        let costs = CostMatrix::from_rows(&[[0.0, 1.0], [10.0, 0.0]]).unwrap();
        let p = PosteriorEstimate { probs: vec![0.5, 0.5] };
        assert_eq!(two_step_predict(&p, &costs), 1);
        let uniform = CostMatrix::uniform(3);
        assert_eq!(two_step_predict(&PosteriorEstimate { probs: vec![0.2, 0.5, 0.3] }, &uniform), 1);
        assert_eq!(two_step_predict(&PosteriorEstimate { probs: vec![0.0, 0.0, 1.0] }, &uniform), 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn posterior_on_simplex(h in prop::collection::vec(-50.0f64..50.0, 2..8)) {
            let p = posterior_from_scores(&h).probs;
            prop_assert!(p.iter().all(|&v| v >= 0.0));
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        }
    }
}
