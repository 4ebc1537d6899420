//! Test-time evaluation and validation-based choice of the round count.

use alloc::vec::Vec;

use crate::boost::StrongClassifier;
use crate::costs::CostMatrix;
use crate::data::Dataset;
use crate::error::{invalid, Error, Result};
use crate::loss::argmax;
use crate::math::pairwise_sum;

/// `counts[y][ŷ]`: samples of true class `y` predicted as `ŷ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    k: usize,
    counts: Vec<u64>,
}

impl ConfusionMatrix {
    pub fn new(k: usize) -> Self {
        Self { k, counts: alloc::vec![0; k * k] }
    }

    pub fn record(&mut self, truth: usize, predicted: usize) {
        self.counts[truth * self.k + predicted] += 1;
    }

    pub fn n_classes(&self) -> usize {
        self.k
    }

    pub fn get(&self, truth: usize, predicted: usize) -> u64 {
        self.counts[truth * self.k + predicted]
    }

    pub fn row(&self, truth: usize) -> &[u64] {
        &self.counts[truth * self.k..(truth + 1) * self.k]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn error_rate(&self) -> f64 {
        let correct: u64 = (0..self.k).map(|c| self.get(c, c)).sum();
        (self.total() - correct) as f64 / self.total() as f64
    }

    /// `(1/N) Σ_{y,k} counts[y][k]·c_{y,k}`.
    pub fn risk(&self, costs: &CostMatrix) -> f64 {
        let mut sum = 0.0;
        for y in 0..self.k {
            for p in 0..self.k {
                sum += self.get(y, p) as f64 * costs.get(y, p);
            }
        }
        sum / self.total() as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub confusion: ConfusionMatrix,
    pub error: f64,
    pub risk: f64,
}

pub fn evaluate_predictions(predictions: &[usize], labels: &[usize], costs: &CostMatrix) -> Result<Evaluation> {
    if predictions.len() != labels.len() {
        return Err(Error::DimensionMismatch { expected: labels.len(), found: predictions.len() });
    }
    if labels.is_empty() {
        return Err(invalid("cannot evaluate on an empty dataset"));
    }
    let k = costs.n_classes();
    if predictions.iter().chain(labels).any(|&c| c >= k) {
        return Err(invalid(alloc::format!("class index outside 0..{k}")));
    }
    let mut confusion = ConfusionMatrix::new(k);
    for (&y, &p) in labels.iter().zip(predictions) {
        confusion.record(y, p);
    }
    let error = confusion.error_rate();
    let risk = crate::loss::empirical_risk(predictions, labels, costs)?;
    Ok(Evaluation { confusion, error, risk })
}

pub fn predict_all(model: &StrongClassifier, data: &Dataset) -> Result<Vec<usize>> {
    check_dims(model, data)?;
    Ok(data.rows().map(|x| argmax(&model.scores_unchecked(x))).collect())
}

pub fn evaluate(model: &StrongClassifier, data: &Dataset, costs: &CostMatrix) -> Result<Evaluation> {
    if costs.n_classes() != model.n_classes() {
        return Err(Error::DimensionMismatch { expected: model.n_classes(), found: costs.n_classes() });
    }
    evaluate_predictions(&predict_all(model, data)?, data.labels(), costs)
}

/// Risk of every prefix model: entry `T` uses `a0` and the first `T` rounds.
///
/// Scores are extended one round at a time, so the whole curve costs one
/// pass over the rounds.
pub fn risk_curve(model: &StrongClassifier, data: &Dataset, costs: &CostMatrix) -> Result<Vec<f64>> {
    check_dims(model, data)?;
    if costs.n_classes() != model.n_classes() {
        return Err(Error::DimensionMismatch { expected: model.n_classes(), found: costs.n_classes() });
    }
    let k = model.n_classes();
    let mut scores: Vec<f64> = (0..data.len()).flat_map(|_| model.a0().iter().copied()).collect();
    let risk_of = |scores: &[f64]| -> f64 {
        let terms: Vec<f64> = scores.chunks(k).zip(data.labels()).map(|(h, &y)| costs.get(y, argmax(h))).collect();
        pairwise_sum(&terms) / data.len() as f64
    };
    let mut curve = Vec::with_capacity(model.n_rounds() + 1);
    curve.push(risk_of(&scores));
    for round in model.rounds() {
        for (h, x) in scores.chunks_mut(k).zip(data.rows()) {
            let f = round.tree.predict(x);
            for (hk, ak) in h.iter_mut().zip(&round.vector) {
                *hk += f * ak;
            }
        }
        curve.push(risk_of(&scores));
    }
    Ok(curve)
}

/// Index of the smallest entry, the first on ties.
pub fn best_round(curve: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (t, &v) in curve.iter().enumerate() {
        if best.is_none_or(|b| v < curve[b]) {
            best = Some(t);
        }
    }
    best
}

/// Round count in `0..=T` with the lowest validation risk, smallest on ties.
pub fn select_rounds(model: &StrongClassifier, validation: &Dataset, costs: &CostMatrix) -> Result<usize> {
    if validation.is_empty() {
        return Err(invalid("empty validation set"));
    }
    let curve = risk_curve(model, validation, costs)?;
    Ok(best_round(&curve).expect("curve has at least one entry"))
}

fn check_dims(model: &StrongClassifier, data: &Dataset) -> Result<()> {
    if model.n_features() != data.n_features() {
        return Err(Error::DimensionMismatch { expected: model.n_features(), found: data.n_features() });
    }
    if model.n_classes() != data.n_classes() {
        return Err(Error::DimensionMismatch { expected: model.n_classes(), found: data.n_classes() });
    }
    Ok(())
}
