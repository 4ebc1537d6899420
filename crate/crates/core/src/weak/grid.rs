use alloc::vec::Vec;

use crate::data::Dataset;
use crate::error::{invalid, Result};

/// Evenly spaced candidate thresholds per feature.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdGrid {
    thresholds: Vec<Vec<f64>>,
    constant: Vec<bool>,
}

impl ThresholdGrid {
    /// `n_tau` thresholds strictly inside `[min_j, max_j]` at
    /// `min_j + i/(n_tau + 1)·(max_j − min_j)`. A constant feature gets one
    /// threshold at its value, routing every sample to the `−1` side.
    pub fn build(data: &Dataset, n_tau: usize) -> Result<Self> {
        if n_tau == 0 {
            return Err(invalid("threshold count must be at least 1"));
        }
        if data.is_empty() {
            return Err(invalid("cannot build a threshold grid on an empty dataset"));
        }
        let mut thresholds = Vec::with_capacity(data.n_features());
        let mut constant = Vec::with_capacity(data.n_features());
        for j in 0..data.n_features() {
            let (lo, hi) = data.feature_range(j);
            if lo == hi {
                thresholds.push(alloc::vec![lo]);
                constant.push(true);
                continue;
            }
            let mut taus: Vec<f64> = Vec::with_capacity(n_tau);
            for i in 1..=n_tau {
                let t = i as f64 / (n_tau + 1) as f64;
                // convex combination, safe when hi - lo overflows
                let tau = lo * (1.0 - t) + hi * t;
                if taus.last().is_none_or(|&prev| tau > prev) && tau < hi {
                    taus.push(tau);
                }
            }
            if taus.is_empty() {
                taus.push(lo);
            }
            thresholds.push(taus);
            constant.push(false);
        }
        Ok(Self { thresholds, constant })
    }

    pub fn n_features(&self) -> usize {
        self.thresholds.len()
    }

    pub fn thresholds(&self, feature: usize) -> &[f64] {
        &self.thresholds[feature]
    }

    pub fn is_constant(&self, feature: usize) -> bool {
        self.constant[feature]
    }

    pub fn all_constant(&self) -> bool {
        self.constant.iter().all(|&c| c)
    }

    /// Number of thresholds strictly below `x`. A stump on threshold `i`
    /// sends the sample to its `+ρ` side iff `bin > i`.
    #[inline]
    pub fn bin(&self, feature: usize, x: f64) -> usize {
        self.thresholds[feature].partition_point(|&t| t < x)
    }

    pub fn index_of(&self, feature: usize, threshold: f64) -> Option<usize> {
        self.thresholds.get(feature)?.iter().position(|&t| t == threshold)
    }
}

/// A dataset with every feature value pre-binned against a threshold grid.
#[derive(Debug, Clone)]
pub struct SearchContext<'a> {
    data: &'a Dataset,
    grid: ThresholdGrid,
    /// Feature-major: `bins[j * N + n]`.
    bins: Vec<u32>,
}

impl<'a> SearchContext<'a> {
    pub fn new(data: &'a Dataset, n_tau: usize) -> Result<Self> {
        Self::with_grid(data, ThresholdGrid::build(data, n_tau)?)
    }

    pub fn with_grid(data: &'a Dataset, grid: ThresholdGrid) -> Result<Self> {
        if grid.n_features() != data.n_features() {
            return Err(crate::Error::DimensionMismatch { expected: data.n_features(), found: grid.n_features() });
        }
        let n = data.len();
        let mut bins = alloc::vec![0u32; n * data.n_features()];
        for (i, row) in data.rows().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                bins[j * n + i] = grid.bin(j, x) as u32;
            }
        }
        Ok(Self { data, grid, bins })
    }

    pub fn data(&self) -> &'a Dataset {
        self.data
    }

    pub fn grid(&self) -> &ThresholdGrid {
        &self.grid
    }

    #[inline]
    pub(crate) fn feature_bins(&self, feature: usize) -> &[u32] {
        let n = self.data.len();
        &self.bins[feature * n..(feature + 1) * n]
    }
}
