use alloc::string::String;
use alloc::vec::Vec;

use crate::costs::{loss_floor, CostMatrix, LossFloor};
use crate::data::Dataset;
use crate::error::{invalid, Error, Result};
use crate::loss::argmax;
use crate::math::pairwise_sum;
use crate::weak::{grow_layer, stump_search, SearchContext, SplitScores, Tree};

use super::edge::edge;
use super::model::StrongClassifier;
use super::weights::{fit_constant, WeightState};

/// Training stops once `L − L*` falls to this level.
pub const LOSS_FLOOR_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub rounds: usize,
    pub tree_depth: usize,
    pub n_tau: usize,
    /// Smoothing inside the closed-form vector; `None` means `1/(2NK)`.
    pub epsilon: Option<f64>,
    pub fit_a0: bool,
    /// Recorded for reproducibility; training itself draws no random numbers.
    pub seed: u64,
    pub early_stop_on_certificate: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            rounds: 100,
            tree_depth: 1,
            n_tau: 200,
            epsilon: None,
            fit_a0: true,
            seed: 0,
            early_stop_on_certificate: true,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(invalid("rounds must be at least 1"));
        }
        if self.tree_depth == 0 || self.tree_depth > 24 {
            return Err(invalid("tree depth must be in 1..=24"));
        }
        if self.n_tau == 0 {
            return Err(invalid("threshold count must be at least 1"));
        }
        if let Some(eps) = self.epsilon {
            if !(eps >= 0.0 && eps.is_finite()) {
                return Err(invalid("epsilon must be finite and nonnegative"));
            }
        }
        Ok(())
    }

    pub fn resolved_epsilon(&self, n_samples: usize, n_classes: usize) -> f64 {
        self.epsilon.unwrap_or(1.0 / (2.0 * n_samples as f64 * n_classes as f64))
    }

    /// Canonical one-line summary of every setting.
    pub fn fingerprint(&self) -> String {
        let eps = match self.epsilon {
            Some(e) => alloc::format!("{e:?}"),
            None => String::from("auto"),
        };
        alloc::format!(
            "rounds={};depth={};ntau={};epsilon={};a0={};seed={};certificate_stop={}",
            self.rounds,
            self.tree_depth,
            self.n_tau,
            eps,
            self.fit_a0,
            self.seed,
            self.early_stop_on_certificate
        )
    }
}

/// Diagnostics for one boosting round, measured after its update.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub round: usize,
    pub loss: f64,
    /// `loss − L*`.
    pub loss_excess: f64,
    pub gamma: Option<f64>,
    pub phi: Option<f64>,
    pub train_error: f64,
    pub train_risk: f64,
    pub root_feature: usize,
    pub root_threshold: f64,
    pub depth: usize,
    /// `2⟨sqrt(s⁺ ⊙ s⁻), 1⟩` after the root search and after each added level.
    pub layer_losses: Vec<f64>,
    pub split_loss: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    RoundBudget,
    /// The loss fell below `L•`, certifying zero training risk.
    Certificate,
    LossFloor,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainTrace {
    pub l_star: f64,
    pub l_bullet: f64,
    /// `(1/2N) Σ c*_n`.
    pub c_star: f64,
    pub epsilon: f64,
    /// Loss of the zero model.
    pub zero_loss: f64,
    /// Loss before the first round, after `a0`.
    pub initial_loss: f64,
    pub rounds: Vec<RoundRecord>,
    pub stop: Option<StopReason>,
}

impl TrainTrace {
    pub fn final_loss(&self) -> f64 {
        self.rounds.last().map_or(self.initial_loss, |r| r.loss)
    }
}

/// Round-by-round REBEL training with access to the intermediate state.
#[derive(Debug)]
pub struct Trainer<'a> {
    data: &'a Dataset,
    costs: &'a CostMatrix,
    cfg: TrainConfig,
    ctx: SearchContext<'a>,
    weights: WeightState,
    /// Incremental `H(x_n)`, row-major `N×K`.
    scores: Vec<f64>,
    model: StrongClassifier,
    trace: TrainTrace,
}

impl<'a> Trainer<'a> {
    pub fn new(data: &'a Dataset, costs: &'a CostMatrix, cfg: TrainConfig) -> Result<Self> {
        cfg.validate()?;
        let k = costs.n_classes();
        if data.n_classes() != k {
            return Err(Error::DimensionMismatch { expected: k, found: data.n_classes() });
        }
        if data.len() < 2 {
            return Err(invalid("training needs at least two samples"));
        }
        let ctx = SearchContext::new(data, cfg.n_tau)?;
        if ctx.grid().all_constant() {
            return Err(invalid("every feature is constant; no informative stump exists"));
        }
        let LossFloor { l_star, l_bullet } = loss_floor(costs, data.labels())?;
        let terms = costs.class_terms();
        let n = data.len();
        let c_star_sum: Vec<f64> = data.labels().iter().map(|&y| terms[y].c_star).collect();
        let c_star = pairwise_sum(&c_star_sum) / (2.0 * n as f64);
        let epsilon = cfg.resolved_epsilon(n, k);

        let mut weights = WeightState::init(data, costs)?;
        let mut model = StrongClassifier::empty(k, data.n_features());
        let mut scores = alloc::vec![0.0; n * k];
        let zero_loss = weight_loss(&weights, l_star, c_star);
        if cfg.fit_a0 {
            let a0 = fit_constant(&mut weights, epsilon)?;
            for row in scores.chunks_mut(k) {
                row.copy_from_slice(&a0);
            }
            model.set_a0(a0)?;
        }
        let initial_loss = weight_loss(&weights, l_star, c_star);
        let trace =
            TrainTrace { l_star, l_bullet, c_star, epsilon, zero_loss, initial_loss, rounds: Vec::new(), stop: None };
        let mut trainer = Self { data, costs, cfg, ctx, weights, scores, model, trace };
        trainer.check_stop(initial_loss);
        Ok(trainer)
    }

    pub fn weights(&self) -> &WeightState {
        &self.weights
    }

    /// Current `H(x_n)` of every training sample, row-major `N×K`.
    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn model(&self) -> &StrongClassifier {
        &self.model
    }

    pub fn trace(&self) -> &TrainTrace {
        &self.trace
    }

    pub fn config(&self) -> &TrainConfig {
        &self.cfg
    }

    pub fn is_done(&self) -> bool {
        self.trace.stop.is_some()
    }

    /// Search, grow and fit one weak learner, then fold it into the weights.
    /// Returns `None` once a stop criterion has fired.
    pub fn step(&mut self) -> Result<Option<&RoundRecord>> {
        if self.is_done() {
            return Ok(None);
        }
        let eps = self.trace.epsilon;
        let round = self.trace.rounds.len() + 1;
        let choice = stump_search(&self.ctx, &self.weights, eps)?;
        let mut tree = Tree::stump(choice.stump);
        let mut a = choice.a_star;
        let mut scores: SplitScores = choice.scores;
        let mut layer_losses = alloc::vec![choice.split_loss];
        for _ in 1..self.cfg.tree_depth {
            let grown = grow_layer(&self.ctx, &tree, &a, &self.weights, eps);
            tree = grown.tree;
            a = grown.a;
            scores = grown.scores;
            layer_losses.push(grown.split_loss);
        }
        let diag = edge(&scores, self.trace.c_star, self.trace.l_bullet - self.trace.l_star);

        let outputs: Vec<f64> = self.data.rows().map(|x| tree.predict(x)).collect();
        self.weights.apply(&outputs, &a, round)?;
        let k = a.len();
        for (row, f) in self.scores.chunks_mut(k).zip(&outputs) {
            for (h, ak) in row.iter_mut().zip(&a) {
                *h += f * ak;
            }
        }

        let loss = weight_loss(&self.weights, self.trace.l_star, self.trace.c_star);
        let (train_error, train_risk) = self.training_metrics();
        let root = *tree.root();
        let record = RoundRecord {
            round,
            loss,
            loss_excess: loss - self.trace.l_star,
            gamma: diag.gamma,
            phi: diag.phi,
            train_error,
            train_risk,
            root_feature: root.feature,
            root_threshold: root.threshold,
            depth: tree.depth(),
            split_loss: *layer_losses.last().expect("at least the root"),
            layer_losses,
        };
        self.model.push(tree, a)?;
        self.trace.rounds.push(record);
        self.check_stop(loss);
        Ok(self.trace.rounds.last())
    }

    pub fn run(&mut self) -> Result<()> {
        while self.step()?.is_some() {}
        Ok(())
    }

    pub fn finish(self) -> (StrongClassifier, TrainTrace) {
        (self.model, self.trace)
    }

    fn check_stop(&mut self, loss: f64) {
        self.trace.stop = if loss - self.trace.l_star <= LOSS_FLOOR_TOLERANCE {
            Some(StopReason::LossFloor)
        } else if self.cfg.early_stop_on_certificate && loss < self.trace.l_bullet {
            Some(StopReason::Certificate)
        } else if self.trace.rounds.len() >= self.cfg.rounds {
            Some(StopReason::RoundBudget)
        } else {
            None
        };
    }

    fn training_metrics(&self) -> (f64, f64) {
        let k = self.costs.n_classes();
        let mut wrong = 0usize;
        let mut risk = Vec::with_capacity(self.data.len());
        for (h, &y) in self.scores.chunks(k).zip(self.data.labels()) {
            let pred = argmax(h);
            wrong += usize::from(pred != y);
            risk.push(self.costs.get(y, pred));
        }
        let n = self.data.len() as f64;
        (wrong as f64 / n, pairwise_sum(&risk) / n)
    }
}

/// `L = L* − c* + (1/2N) Σ ⟨w⁺_n + w⁻_n, 1⟩`.
fn weight_loss(weights: &WeightState, l_star: f64, c_star: f64) -> f64 {
    let mass = weights.sample_mass();
    l_star - c_star + pairwise_sum(&mass) / (2.0 * weights.n_samples() as f64)
}

/// Train a REBEL classifier to completion.
pub fn train(data: &Dataset, costs: &CostMatrix, cfg: &TrainConfig) -> Result<(StrongClassifier, TrainTrace)> {
    let mut trainer = Trainer::new(data, costs, cfg.clone())?;
    trainer.run()?;
    Ok(trainer.finish())
}
