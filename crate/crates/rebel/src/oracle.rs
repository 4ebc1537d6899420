//! Round-by-round check that two-class REBEL with uniform costs is discrete
//! AdaBoost: the same stump each round, `a_1 = α`, and `H_1 = −H_2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use rebel_core::baselines::{adaboost_train, AdaBoostConfig};
use rebel_core::boost::Trainer;
use rebel_core::{CostMatrix, Dataset, TrainConfig};

use crate::error::Result;
use crate::synth::derive_seeds;

pub const ORACLE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub trials: usize,
    pub rounds: usize,
    pub n_samples: usize,
    pub n_features: usize,
    pub n_tau: usize,
    pub seed: u64,
    /// Run AdaBoost with a smoothing term that does not correspond to
    /// REBEL's, which must make the check fail.
    pub mismatch_smoothing: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { trials: 20, rounds: 50, n_samples: 200, n_features: 5, n_tau: 200, seed: 0, mismatch_smoothing: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Divergence {
    pub trial: usize,
    pub round: usize,
    pub quantity: String,
    pub rebel: String,
    pub oracle: String,
}

impl std::fmt::Display for Divergence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "trial {} round {}: {} differs (rebel {}, adaboost {})",
            self.trial, self.round, self.quantity, self.rebel, self.oracle
        )
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OracleReport {
    pub trials: usize,
    pub rounds_checked: usize,
    pub max_alpha_gap: f64,
    pub max_antisymmetry: f64,
    pub divergence: Option<Divergence>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.divergence.is_none()
    }
}

/// Two classes split by a random hyperplane, with 10% of labels flipped.
pub fn random_binary_dataset(n: usize, d: usize, seed: u64) -> Result<Dataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal: Vec<f64> = (0..d).map(|_| rng.sample(StandardNormal)).collect();
    let mut features = Vec::with_capacity(n * d);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let x: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let side = x.iter().zip(&normal).map(|(a, b)| a * b).sum::<f64>() > 0.0;
        let flip = rng.random_bool(0.1);
        // the first two rows pin both classes
        let y = if i < 2 { i } else { usize::from(side != flip) };
        features.extend(x);
        labels.push(y);
    }
    Ok(Dataset::new(features, d, labels, 2)?)
}

pub fn run_oracle(cfg: &OracleConfig) -> Result<OracleReport> {
    let seeds = derive_seeds(cfg.seed, 2, cfg.trials);
    let costs = CostMatrix::uniform(2);
    let mut report = OracleReport::default();
    for (trial, &seed) in seeds.iter().enumerate() {
        let data = random_binary_dataset(cfg.n_samples, cfg.n_features, seed)?;
        let train_cfg = TrainConfig {
            rounds: cfg.rounds,
            tree_depth: 1,
            n_tau: cfg.n_tau,
            epsilon: None,
            fit_a0: false,
            seed,
            early_stop_on_certificate: false,
        };
        let mut trainer = Trainer::new(&data, &costs, train_cfg)?;
        // REBEL's ε sits on scores normalized by 2N, AdaBoost's on weights summing to 1
        let eps = trainer.trace().epsilon;
        let smoothing = if cfg.mismatch_smoothing { 10.0 * eps } else { 2.0 * eps };
        let ada = adaboost_train(&data, &AdaBoostConfig { rounds: cfg.rounds, n_tau: cfg.n_tau, smoothing })?;
        report.trials += 1;

        let mut round = 0;
        while trainer.step()?.is_some() {
            let oracle = &ada.rounds[round];
            round += 1;
            let fail = |quantity: &str, rebel: String, oracle: String| Divergence {
                trial,
                round,
                quantity: quantity.to_string(),
                rebel,
                oracle,
            };
            let learned = trainer.model().rounds().last().expect("one round per step");
            let stump = *learned.tree.root();
            if (stump.feature, stump.threshold, stump.polarity)
                != (oracle.stump.feature, oracle.stump.threshold, oracle.stump.polarity)
            {
                report.divergence = Some(fail("stump", format!("{stump:?}"), format!("{:?}", oracle.stump)));
                return Ok(report);
            }
            let gap = (learned.vector[0] - oracle.alpha).abs().max((learned.vector[1] + oracle.alpha).abs());
            report.max_alpha_gap = report.max_alpha_gap.max(gap);
            if !(gap <= ORACLE_TOLERANCE) {
                report.divergence = Some(fail("alpha", format!("{:?}", learned.vector), format!("{:?}", oracle.alpha)));
                return Ok(report);
            }
            let anti = trainer.scores().chunks(2).map(|h| (h[0] + h[1]).abs()).fold(0.0, f64::max);
            report.max_antisymmetry = report.max_antisymmetry.max(anti);
            if !(anti <= ORACLE_TOLERANCE) {
                report.divergence = Some(fail("H1 + H2", format!("{anti:e}"), "0".into()));
                return Ok(report);
            }
            report.rounds_checked += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes_and_mismatch_fails() {
        let cfg =
            OracleConfig { trials: 2, rounds: 10, n_samples: 60, n_features: 3, n_tau: 30, ..OracleConfig::default() };
        let ok = run_oracle(&cfg).unwrap();
        assert!(ok.passed(), "{:?}", ok.divergence);
        assert_eq!(ok.rounds_checked, 20);
        let bad = run_oracle(&OracleConfig { mismatch_smoothing: true, ..cfg }).unwrap();
        assert!(!bad.passed());
    }
}
