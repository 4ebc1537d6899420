//! Reference methods: discrete binary AdaBoost, which REBEL reduces to for two
//! classes under uniform costs, and the cost-at-test-time two-step method.

mod adaboost;
mod two_step;

pub use adaboost::{adaboost_train, AdaBoostConfig, AdaBoostRound, BinaryAdaBoostModel};
pub use two_step::{estimate_posterior, posterior_from_scores, two_step_predict, PosteriorEstimate};
