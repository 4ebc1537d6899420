use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::loss::argmax;
use crate::weak::Tree;

/// One boosting round: a binary learner and its K-vector of votes.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakRound {
    pub tree: Tree,
    pub vector: Vec<f64>,
}

/// `H(x) = a0 + Σ_t f_t(x)·a_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct StrongClassifier {
    n_classes: usize,
    n_features: usize,
    a0: Vec<f64>,
    rounds: Vec<WeakRound>,
}

impl StrongClassifier {
    /// The zero model.
    pub fn empty(n_classes: usize, n_features: usize) -> Self {
        Self { n_classes, n_features, a0: alloc::vec![0.0; n_classes], rounds: Vec::new() }
    }

    pub fn from_parts(n_classes: usize, n_features: usize, a0: Vec<f64>, rounds: Vec<WeakRound>) -> Result<Self> {
        if n_classes < 2 {
            return Err(invalid("a classifier needs at least two classes"));
        }
        if n_features == 0 {
            return Err(invalid("a classifier needs at least one feature"));
        }
        let mut model = Self::empty(n_classes, n_features);
        model.set_a0(a0)?;
        for round in rounds {
            model.push(round.tree, round.vector)?;
        }
        Ok(model)
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn a0(&self) -> &[f64] {
        &self.a0
    }

    pub fn rounds(&self) -> &[WeakRound] {
        &self.rounds
    }

    pub fn n_rounds(&self) -> usize {
        self.rounds.len()
    }

    pub fn set_a0(&mut self, a0: Vec<f64>) -> Result<()> {
        if a0.len() != self.n_classes {
            return Err(Error::DimensionMismatch { expected: self.n_classes, found: a0.len() });
        }
        if a0.iter().any(|v| !v.is_finite()) {
            return Err(invalid("a0 must be finite"));
        }
        self.a0 = a0;
        Ok(())
    }

    pub fn push(&mut self, tree: Tree, vector: Vec<f64>) -> Result<()> {
        if vector.len() != self.n_classes {
            return Err(Error::DimensionMismatch { expected: self.n_classes, found: vector.len() });
        }
        if vector.iter().any(|v| !v.is_finite()) {
            return Err(invalid("round vector must be finite"));
        }
        if let Some(node) = tree.nodes().iter().find(|s| s.feature >= self.n_features) {
            return Err(invalid(alloc::format!(
                "stump uses feature {} but the model has {}",
                node.feature,
                self.n_features
            )));
        }
        self.rounds.push(WeakRound { tree, vector });
        Ok(())
    }

    /// The model made of `a0` and the first `rounds` rounds.
    pub fn truncated(&self, rounds: usize) -> Self {
        Self {
            n_classes: self.n_classes,
            n_features: self.n_features,
            a0: self.a0.clone(),
            rounds: self.rounds[..rounds.min(self.rounds.len())].to_vec(),
        }
    }

    /// `H(x)` without a dimension check; `x` must hold `n_features` values.
    pub fn scores_unchecked(&self, x: &[f64]) -> Vec<f64> {
        let mut h = self.a0.clone();
        for round in &self.rounds {
            let f = round.tree.predict(x);
            for (hk, ak) in h.iter_mut().zip(&round.vector) {
                *hk += f * ak;
            }
        }
        h
    }

    pub fn scores(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        Ok(self.scores_unchecked(x))
    }

    /// Predicted class (lowest index on ties) and the score vector.
    pub fn predict(&self, x: &[f64]) -> Result<(usize, Vec<f64>)> {
        let h = self.scores(x)?;
        Ok((argmax(&h), h))
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n_features {
            return Err(Error::DimensionMismatch { expected: self.n_features, found: x.len() });
        }
        Ok(())
    }
}
