//! Synthetic data for the cost-sensitive comparison: planar Gaussian
//! mixtures, random cost matrices, and the trial harness pitting REBEL
//! against the two-step method.

mod costs;
mod fig3;
mod mixture;

pub use costs::{gen_cost_matrix, gen_normalized_cost_matrix};
pub use fig3::{run_fig3, Fig3Config, Fig3Table, Fig3Trial, Winner};
pub use mixture::{class_tokens, gen_dataset, Cluster, MixtureParams, MixtureSpec};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `count` seeds drawn from stream `stream` of a generator keyed by `seed`.
pub(crate) fn derive_seeds(seed: u64, stream: u64, count: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    (0..count).map(|_| rng.next_u64()).collect()
}
