//! The exponential surrogate, the coupled-sum bound and empirical risk.

use alloc::vec::Vec;

use crate::boost::StrongClassifier;
use crate::costs::{loss_floor, CostMatrix};
use crate::data::Dataset;
use crate::error::{invalid, Error, Result};
use crate::math::{exp, pairwise_sum};

/// Index of the largest score; the lowest index wins ties.
pub fn argmax(h: &[f64]) -> usize {
    let mut best = 0;
    for (k, &v) in h.iter().enumerate().skip(1) {
        if v > h[best] {
            best = k;
        }
    }
    best
}

/// Whether `y` fails to be the unique maximizer of `h`. Ties count as errors,
/// the direction in which the coupled sum still bounds the 0-1 loss.
pub fn misclassified_strict(h: &[f64], y: usize) -> bool {
    h.iter().enumerate().any(|(k, &v)| k != y && v >= h[y])
}

/// `σ(H; y) = ½(e^{−H_y} + Σ_{k≠y} e^{H_k})`, an upper bound on
/// `1(argmax H ≠ y)`.
pub fn coupled_sum(h: &[f64], y: usize) -> f64 {
    let wrong: f64 = h.iter().enumerate().filter(|&(k, _)| k != y).map(|(_, &v)| exp(v)).sum();
    0.5 * (exp(-h[y]) + wrong)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossReport {
    pub surrogate: f64,
    pub l_star: f64,
    pub l_bullet: f64,
    /// `surrogate − l_star`.
    pub excess: f64,
    pub error_rate: f64,
    pub risk: f64,
}

/// Surrogate loss, error rate and empirical risk of `model`, scored from
/// scratch on every sample.
pub fn surrogate_loss(model: &StrongClassifier, data: &Dataset, costs: &CostMatrix) -> Result<LossReport> {
    let k = costs.n_classes();
    if model.n_classes() != k {
        return Err(Error::DimensionMismatch { expected: k, found: model.n_classes() });
    }
    if data.n_classes() != k {
        return Err(Error::DimensionMismatch { expected: k, found: data.n_classes() });
    }
    if model.n_features() != data.n_features() {
        return Err(Error::DimensionMismatch { expected: model.n_features(), found: data.n_features() });
    }
    let floor = loss_floor(costs, data.labels())?;
    let terms = costs.class_terms();
    let n = data.len();
    let mut excess_terms = Vec::with_capacity(n);
    let mut risk_terms = Vec::with_capacity(n);
    let mut wrong = 0usize;
    for (x, &y) in data.rows().zip(data.labels()) {
        let h = model.scores_unchecked(x);
        let t = &terms[y];
        let mut value = 0.0;
        for c in 0..k {
            value += t.c_plus[c] * exp(h[c]) + t.c_minus[c] * exp(-h[c]);
        }
        excess_terms.push(value - t.c_star);
        let pred = argmax(&h);
        wrong += usize::from(pred != y);
        risk_terms.push(costs.get(y, pred));
    }
    let excess = pairwise_sum(&excess_terms) / (2.0 * n as f64);
    Ok(LossReport {
        surrogate: floor.l_star + excess,
        l_star: floor.l_star,
        l_bullet: floor.l_bullet,
        excess,
        error_rate: wrong as f64 / n as f64,
        risk: pairwise_sum(&risk_terms) / n as f64,
    })
}

/// `(1/N) Σ c_{y_n, ŷ_n}`.
pub fn empirical_risk(predictions: &[usize], labels: &[usize], costs: &CostMatrix) -> Result<f64> {
    if predictions.len() != labels.len() {
        return Err(Error::DimensionMismatch { expected: labels.len(), found: predictions.len() });
    }
    if labels.is_empty() {
        return Err(invalid("no samples"));
    }
    let k = costs.n_classes();
    if predictions.iter().chain(labels).any(|&c| c >= k) {
        return Err(invalid(alloc::format!("class index outside 0..{k}")));
    }
    let terms: Vec<f64> = labels.iter().zip(predictions).map(|(&y, &p)| costs.get(y, p)).collect();
    Ok(pairwise_sum(&terms) / labels.len() as f64)
}
