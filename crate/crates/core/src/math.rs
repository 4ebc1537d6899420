//! Transcendental functions and reductions shared by every numeric path.
//!
//! All exponentials and logarithms go through `libm` so results are
//! bit-identical between `std` and `no_std` builds and across platforms.

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

const PAIRWISE_BLOCK: usize = 32;

/// Sum with a fixed pairwise tree shape. The result depends only on the
/// slice contents and length, never on how callers scheduled the work that
/// produced it.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// `sqrt(x · y)` for nonnegative `x`, `y`, without overflow or underflow in
/// the product.
pub fn sqrt_product(x: f64, y: f64) -> f64 {
    let p = x * y;
    if p.is_normal() || p == 0.0 && (x == 0.0 || y == 0.0) {
        sqrt(p)
    } else {
        sqrt(x) * sqrt(y)
    }
}

/// `Σ_k sqrt(a_k · b_k)`.
pub fn sqrt_product_sum(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| sqrt_product(*x, *y)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn pairwise_matches_naive_on_integers() {
        let v: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 499_500.0);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }

    #[test]
    fn sqrt_product_survives_extreme_ranges() {
        assert_eq!(sqrt_product(4.0, 9.0), 6.0);
        assert_eq!(sqrt_product(0.0, 1e300), 0.0);
        assert!((sqrt_product(1e300, 1e300) / 1e300 - 1.0).abs() < 1e-15);
        assert!((sqrt_product(1e-200, 1e-200) / 1e-200 - 1.0).abs() < 1e-15);
    }
}
