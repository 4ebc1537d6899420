use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use rebel_core::costs::normalize_random_unit;
use rebel_core::CostMatrix;

use crate::error::Result;

/// Zero diagonal, off-diagonal entries `|z|` with `z` standard normal; exact
/// zero draws are redrawn.
pub fn gen_cost_matrix(k: usize, seed: u64) -> Result<CostMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = vec![0.0; k * k];
    for y in 0..k {
        for p in 0..k {
            if y == p {
                continue;
            }
            entries[y * k + p] = loop {
                let z: f64 = rng.sample(StandardNormal);
                if z != 0.0 {
                    break z.abs();
                }
            };
        }
    }
    Ok(CostMatrix::new(k, entries)?)
}

/// [`gen_cost_matrix`] scaled so uniform random guessing costs 1 on `labels`.
pub fn gen_normalized_cost_matrix(k: usize, seed: u64, labels: &[usize]) -> Result<CostMatrix> {
    Ok(normalize_random_unit(&gen_cost_matrix(k, seed)?, labels)?)
}
