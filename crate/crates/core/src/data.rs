use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};

/// `N` samples of `d` real features with class indices in `0..K`.
///
/// Features are stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    features: Vec<f64>,
    labels: Vec<usize>,
    n_features: usize,
    n_classes: usize,
}

impl Dataset {
    pub fn new(features: Vec<f64>, n_features: usize, labels: Vec<usize>, n_classes: usize) -> Result<Self> {
        if n_features == 0 {
            return Err(invalid("dataset needs at least one feature"));
        }
        if labels.is_empty() {
            return Err(invalid("dataset is empty"));
        }
        if n_classes < 2 {
            return Err(invalid("at least two classes are required"));
        }
        if features.len() != labels.len() * n_features {
            return Err(Error::DimensionMismatch { expected: labels.len() * n_features, found: features.len() });
        }
        if let Some(pos) = features.iter().position(|v| !v.is_finite()) {
            return Err(invalid(alloc::format!(
                "non-finite feature at row {}, column {}",
                pos / n_features,
                pos % n_features
            )));
        }
        if let Some((row, &y)) = labels.iter().enumerate().find(|(_, &y)| y >= n_classes) {
            return Err(invalid(alloc::format!("label {y} at row {row} is outside 0..{n_classes}")));
        }
        Ok(Self { features, labels, n_features, n_classes })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn row(&self, n: usize) -> &[f64] {
        &self.features[n * self.n_features..(n + 1) * self.n_features]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.features.chunks_exact(self.n_features)
    }

    pub fn label(&self, n: usize) -> usize {
        self.labels[n]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn features(&self) -> &[f64] {
        &self.features
    }

    /// Value range of feature `j` over all samples.
    pub fn feature_range(&self, j: usize) -> (f64, f64) {
        self.rows().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r[j]), hi.max(r[j])))
    }

    /// Every sample repeated `times` times, in order.
    pub fn repeated(&self, times: usize) -> Self {
        let mut features = Vec::with_capacity(self.features.len() * times);
        let mut labels = Vec::with_capacity(self.labels.len() * times);
        for (row, &y) in self.rows().zip(&self.labels) {
            for _ in 0..times {
                features.extend_from_slice(row);
                labels.push(y);
            }
        }
        Self { features, labels, n_features: self.n_features, n_classes: self.n_classes }
    }
}
