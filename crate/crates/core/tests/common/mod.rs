#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rebel_core::{CostMatrix, Dataset};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Noisy class-dependent blobs in `d` dimensions, every class present.
pub fn random_dataset(rng: &mut impl Rng, n: usize, d: usize, k: usize) -> Dataset {
    let centers: Vec<Vec<f64>> = (0..k).map(|_| (0..d).map(|_| rng.random_range(-2.0..2.0)).collect()).collect();
    let mut features = Vec::with_capacity(n * d);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let y = if i < k { i } else { rng.random_range(0..k) };
        for j in 0..d {
            features.push(centers[y][j] + rng.random_range(-1.5..1.5));
        }
        labels.push(y);
    }
    Dataset::new(features, d, labels, k).unwrap()
}

pub fn random_costs(rng: &mut impl Rng, k: usize) -> CostMatrix {
    let mut entries = vec![0.0; k * k];
    for y in 0..k {
        for p in 0..k {
            if y != p {
                entries[y * k + p] = rng.random_range(0.05..3.0);
            }
        }
    }
    CostMatrix::new(k, entries).unwrap()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300) || a == b
}
