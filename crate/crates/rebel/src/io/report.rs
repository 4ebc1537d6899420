use serde::Serialize;
use sha2::{Digest, Sha256};

use rebel_core::eval::Evaluation;
use rebel_core::CostMatrix;

/// SHA-256 over `K` and the little-endian bytes of every entry, row-major.
pub fn cost_checksum(costs: &CostMatrix) -> String {
    let mut h = Sha256::new();
    h.update((costs.n_classes() as u64).to_le_bytes());
    for v in costs.entries() {
        h.update(v.to_le_bytes());
    }
    hex::encode(h.finalize())
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct EvalReport {
    pub n: usize,
    pub k: usize,
    pub classes: Vec<String>,
    pub rounds: usize,
    pub error: f64,
    pub risk: f64,
    /// `confusion[y][k]`: samples of class `y` predicted as `k`.
    pub confusion: Vec<Vec<u64>>,
    pub cost_checksum: String,
}

impl EvalReport {
    pub fn new(eval: &Evaluation, classes: &[String], rounds: usize, costs: &CostMatrix) -> Self {
        let k = eval.confusion.n_classes();
        Self {
            n: eval.confusion.total() as usize,
            k,
            classes: classes.to_vec(),
            rounds,
            error: eval.error,
            risk: eval.risk,
            confusion: (0..k).map(|y| eval.confusion.row(y).to_vec()).collect(),
            cost_checksum: cost_checksum(costs),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct TrainReport {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub classes: Vec<String>,
    pub config: String,
    pub rounds_trained: usize,
    pub stop: String,
    pub loss: f64,
    pub l_star: f64,
    pub l_bullet: f64,
    pub train_error: f64,
    pub train_risk: f64,
    pub cost_checksum: String,
    /// Round count with the lowest validation risk, when a validation set was given.
    pub best_rounds: Option<usize>,
    pub validation_risk: Option<f64>,
}
