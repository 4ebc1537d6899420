use rayon::prelude::*;

use rebel_core::baselines::{estimate_posterior, two_step_predict};
use rebel_core::eval::{evaluate, evaluate_predictions};
use rebel_core::{train, CostMatrix, TrainConfig};

use super::{derive_seeds, gen_dataset, gen_normalized_cost_matrix, MixtureParams, MixtureSpec};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct Fig3Config {
    pub datasets: usize,
    pub matrices: usize,
    pub rounds: usize,
    pub depth: usize,
    pub n_tau: usize,
    pub fit_a0: bool,
    pub seed: u64,
    pub mixture: MixtureParams,
}

impl Default for Fig3Config {
    fn default() -> Self {
        Self {
            datasets: 10,
            matrices: 20,
            rounds: 100,
            depth: 1,
            n_tau: 200,
            fit_a0: true,
            seed: 0,
            mixture: MixtureParams::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    Rebel,
    TwoStep,
    Tie,
}

impl Winner {
    pub fn as_str(self) -> &'static str {
        match self {
            Winner::Rebel => "rebel",
            Winner::TwoStep => "twostep",
            Winner::Tie => "tie",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig3Trial {
    pub trial_id: usize,
    pub dataset_seed: u64,
    pub cost_seed: u64,
    pub rebel_risk: f64,
    pub twostep_risk: f64,
    pub winner: Winner,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig3Table {
    pub trials: Vec<Fig3Trial>,
}

impl Fig3Table {
    /// Share of trials where REBEL's test risk is strictly lower.
    pub fn win_fraction(&self) -> f64 {
        let wins = self.trials.iter().filter(|t| t.winner == Winner::Rebel).count();
        wins as f64 / self.trials.len().max(1) as f64
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial_id,dataset_seed,cost_seed,rebel_risk,twostep_risk,winner\n");
        for t in &self.trials {
            out.push_str(&format!(
                "{},{},{},{:?},{:?},{}\n",
                t.trial_id,
                t.dataset_seed,
                t.cost_seed,
                t.rebel_risk,
                t.twostep_risk,
                t.winner.as_str()
            ));
        }
        out
    }
}

/// Every dataset crossed with every cost matrix.
///
/// REBEL trains on each cost matrix directly. The two-step method trains once
/// per dataset with uniform costs, reads a posterior off the scores and picks
/// the least expected cost class at test time. Both get the same round budget
/// and tree depth, with no early stopping. Trials run in parallel; the table
/// is always in trial order.
pub fn run_fig3(cfg: &Fig3Config) -> Result<Fig3Table> {
    let dataset_seeds = derive_seeds(cfg.seed, 0, cfg.datasets);
    let cost_seeds = derive_seeds(cfg.seed, 1, cfg.matrices);
    let k = cfg.mixture.classes;
    let train_cfg = TrainConfig {
        rounds: cfg.rounds,
        tree_depth: cfg.depth,
        n_tau: cfg.n_tau,
        epsilon: None,
        fit_a0: cfg.fit_a0,
        seed: cfg.seed,
        early_stop_on_certificate: false,
    };

    let prepared = dataset_seeds
        .par_iter()
        .map(|&seed| {
            let spec = MixtureSpec::random(&cfg.mixture, seed)?;
            let (train_set, test_set) = gen_dataset(&spec)?;
            let (neutral, _) = train(&train_set, &CostMatrix::uniform(k), &train_cfg)?;
            let posteriors =
                test_set.rows().map(|x| estimate_posterior(&neutral, x)).collect::<rebel_core::Result<Vec<_>>>()?;
            Ok((train_set, test_set, posteriors))
        })
        .collect::<Result<Vec<_>>>()?;

    let jobs: Vec<(usize, usize)> = (0..cfg.datasets).flat_map(|i| (0..cfg.matrices).map(move |j| (i, j))).collect();
    let trials = jobs
        .par_iter()
        .map(|&(i, j)| {
            let (train_set, test_set, posteriors) = &prepared[i];
            let costs = gen_normalized_cost_matrix(k, cost_seeds[j], train_set.labels())?;
            let (model, _) = train(train_set, &costs, &train_cfg)?;
            let rebel_risk = evaluate(&model, test_set, &costs)?.risk;
            let two_step: Vec<usize> = posteriors.iter().map(|p| two_step_predict(p, &costs)).collect();
            let twostep_risk = evaluate_predictions(&two_step, test_set.labels(), &costs)?.risk;
            let winner = if rebel_risk < twostep_risk {
                Winner::Rebel
            } else if rebel_risk > twostep_risk {
                Winner::TwoStep
            } else {
                Winner::Tie
            };
            Ok(Fig3Trial {
                trial_id: i * cfg.matrices + j,
                dataset_seed: dataset_seeds[i],
                cost_seed: cost_seeds[j],
                rebel_risk,
                twostep_risk,
                winner,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Fig3Table { trials })
}
