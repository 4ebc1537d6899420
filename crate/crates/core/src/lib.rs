//! Multi-class cost-sensitive boosting that estimates the minimum-risk class
//! directly.
//!
//! A strong classifier is a score function `H(x) = a0 + Σ f_t(x) a_t` where every
//! `f_t` is a binary weak learner (a decision stump or a shallow tree) and every
//! `a_t` is an unconstrained K-vector. Training greedily minimizes an
//! exponential surrogate of the empirical misclassification cost, so the costs
//! shape which boundaries the weak learners spend their splits on.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. The `parallel` feature fans the per-feature threshold scans out
//! over a rayon pool; results are identical for any worker count.
//!
//! Class labels are zero-based indices `0..K` throughout the API.

#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod baselines;
pub mod boost;
pub mod costs;
pub mod data;
pub mod error;
pub mod eval;
pub mod loss;
pub mod math;
pub mod weak;

pub use boost::{train, RoundRecord, StopReason, StrongClassifier, TrainConfig, TrainTrace, WeakRound, WeightState};
pub use costs::{CostMatrix, LossFloor};
pub use data::Dataset;
pub use error::{Error, Result};
pub use weak::{Polarity, SearchContext, Stump, ThresholdGrid, Tree};
