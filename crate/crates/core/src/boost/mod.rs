//! The boosting loop: weights, the strong classifier, training and edge
//! diagnostics.

mod edge;
mod model;
mod train;
mod weights;

pub use edge::{edge, Edge};
pub use model::{StrongClassifier, WeakRound};
pub use train::{train, RoundRecord, StopReason, TrainConfig, TrainTrace, Trainer, LOSS_FLOOR_TOLERANCE};
pub use weights::{fit_constant, init_weights, update_weights, WeightState, WEIGHT_LIMIT};
