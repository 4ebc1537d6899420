//! Cost matrices and the per-sample quantities derived from them.
//!
//! Row `y` of a cost matrix holds the cost of predicting each class when the
//! truth is `y`. Every row decomposes uniquely as
//! `c_y = β_y·1 + Σ_k b_k·(1 − δ_k)` with `b ≥ 0` and `Σ_k b_k` minimal; the
//! surrogate loss is built from the two nonnegative vectors
//! `c⁺ = c_y − β_y·1` and `c⁻ = max(c_y)·1 − c_y`.

use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::math::{ln, sqrt_product, sqrt_product_sum};

/// Off-diagonal tolerance for the zero-diagonal check on loaded matrices.
pub const DIAGONAL_TOLERANCE: f64 = 1e-12;

/// A validated `K×K` misclassification cost matrix.
///
/// Invariants: finite nonnegative entries, exact zeros on the diagonal, and at
/// least one strictly positive entry in every row.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    k: usize,
    entries: Vec<f64>,
}

impl CostMatrix {
    /// Validate a row-major `K×K` matrix. Diagonal entries within
    /// [`DIAGONAL_TOLERANCE`] of zero are snapped to exactly zero.
    pub fn new(k: usize, mut entries: Vec<f64>) -> Result<Self> {
        if k < 2 {
            return Err(invalid("cost matrix needs at least two classes"));
        }
        if entries.len() != k * k {
            return Err(Error::DimensionMismatch { expected: k * k, found: entries.len() });
        }
        for y in 0..k {
            for j in 0..k {
                let c = entries[y * k + j];
                if !c.is_finite() || c < 0.0 {
                    return Err(invalid(alloc::format!("cost ({y}, {j}) = {c} is not a finite nonnegative value")));
                }
            }
            let diag = &mut entries[y * k + y];
            if *diag > DIAGONAL_TOLERANCE {
                return Err(invalid(alloc::format!("diagonal cost ({y}, {y}) = {diag} is not zero")));
            }
            *diag = 0.0;
            if entries[y * k..(y + 1) * k].iter().all(|&c| c == 0.0) {
                return Err(invalid(alloc::format!("row {y} has no positive cost")));
            }
        }
        Ok(Self { k, entries })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let k = rows.len();
        let mut entries = Vec::with_capacity(k * k);
        for row in rows {
            let row = row.as_ref();
            if row.len() != k {
                return Err(Error::DimensionMismatch { expected: k, found: row.len() });
            }
            entries.extend_from_slice(row);
        }
        Self::new(k, entries)
    }

    /// The cost-neutral 0-1 matrix.
    pub fn uniform(k: usize) -> Self {
        assert!(k >= 2, "cost matrix needs at least two classes");
        let entries = (0..k * k).map(|i| if i / k == i % k { 0.0 } else { 1.0 }).collect();
        Self { k, entries }
    }

    pub fn n_classes(&self) -> usize {
        self.k
    }

    pub fn get(&self, truth: usize, predicted: usize) -> f64 {
        self.entries[truth * self.k + predicted]
    }

    pub fn row(&self, truth: usize) -> &[f64] {
        &self.entries[truth * self.k..(truth + 1) * self.k]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// `λ·C` for `λ > 0`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(invalid("scale factor must be positive and finite"));
        }
        Self::new(self.k, self.entries.iter().map(|c| c * lambda).collect())
    }

    pub fn decomposition(&self, truth: usize) -> CostDecomposition {
        decompose_row(self.row(truth)).expect("validated rows are never degenerate")
    }

    pub fn sample_terms(&self, truth: usize) -> SampleCostTerms {
        sample_terms(self, truth)
    }

    /// Per-class cost terms, indexed by class.
    pub fn class_terms(&self) -> Vec<SampleCostTerms> {
        (0..self.k).map(|y| self.sample_terms(y)).collect()
    }
}

/// The minimal decomposition of one cost row.
#[derive(Debug, Clone, PartialEq)]
pub struct CostDecomposition {
    pub beta: f64,
    pub b: Vec<f64>,
    /// `max_k c_k`.
    pub phi: f64,
}

impl CostDecomposition {
    /// Rebuild the row as `β·1 + Σ_k b_k·(1 − δ_k)`.
    pub fn reconstruct(&self) -> Vec<f64> {
        let total: f64 = self.b.iter().sum();
        self.b.iter().map(|bk| self.beta + (total - bk)).collect()
    }
}

/// Decompose a cost row. `b_k = max − c_k` is computed first so that
/// `b ≥ 0` and `β ≤ 0` hold exactly in floating point.
pub fn decompose_row(row: &[f64]) -> Result<CostDecomposition> {
    if row.is_empty() || row.iter().any(|c| !c.is_finite() || *c < 0.0) {
        return Err(invalid("cost row must be nonempty, finite and nonnegative"));
    }
    let phi = row.iter().copied().fold(0.0, f64::max);
    if phi == 0.0 {
        return Err(invalid("cost row is all zeros"));
    }
    let b: Vec<f64> = row.iter().map(|c| phi - c).collect();
    let beta = phi - b.iter().sum::<f64>();
    Ok(CostDecomposition { beta, b, phi })
}

/// Cost quantities for a sample whose true class is fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleCostTerms {
    pub beta: f64,
    pub c_plus: Vec<f64>,
    pub c_minus: Vec<f64>,
    /// `2 Σ_k sqrt(c⁺_k c⁻_k)`, the minimum of `⟨c⁺, e^H⟩ + ⟨c⁻, e^−H⟩`.
    pub c_star: f64,
    /// The minimizing score `½(ln c⁻ − ln c⁺)`; entries may be infinite.
    pub h_star: Vec<f64>,
}

pub fn sample_terms(costs: &CostMatrix, truth: usize) -> SampleCostTerms {
    let row = costs.row(truth);
    let dec = costs.decomposition(truth);
    let c_plus: Vec<f64> = row.iter().map(|c| c - dec.beta).collect();
    let c_minus = dec.b;
    let c_star = 2.0 * sqrt_product_sum(&c_plus, &c_minus);
    let h_star = c_plus.iter().zip(&c_minus).map(|(p, m)| 0.5 * (ln(*m) - ln(*p))).collect();
    SampleCostTerms { beta: dec.beta, c_plus, c_minus, c_star, h_star }
}

/// The loss floor `L*` and the certificate level `L•`.
///
/// Any model whose surrogate loss is below `l_bullet` has zero empirical risk
/// on the training set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossFloor {
    pub l_star: f64,
    pub l_bullet: f64,
}

/// Smallest extra loss a single sample can carry while some class `k` with
/// `c_{y,k} > 0` ties its true class, before the `1/2N` normalization.
fn tie_gap(terms: &SampleCostTerms, row: &[f64], truth: usize) -> Option<f64> {
    let (py, my) = (terms.c_plus[truth], terms.c_minus[truth]);
    (0..row.len())
        .filter(|&k| k != truth && row[k] > 0.0)
        .map(|k| {
            let (pk, mk) = (terms.c_plus[k], terms.c_minus[k]);
            2.0 * sqrt_product(py + pk, my + mk) - 2.0 * sqrt_product(py, my) - 2.0 * sqrt_product(pk, mk)
        })
        .reduce(f64::min)
}

pub fn loss_floor(costs: &CostMatrix, labels: &[usize]) -> Result<LossFloor> {
    let k = costs.n_classes();
    if labels.is_empty() {
        return Err(invalid("no labels"));
    }
    if let Some(&y) = labels.iter().find(|&&y| y >= k) {
        return Err(invalid(alloc::format!("label {y} outside 0..{k}")));
    }
    let terms = costs.class_terms();
    let n = labels.len() as f64;
    let l_star = labels.iter().map(|&y| terms[y].beta + terms[y].c_star / 2.0).sum::<f64>() / n;

    let mut present = alloc::vec![false; k];
    for &y in labels {
        present[y] = true;
    }
    let gap = (0..k)
        .filter(|&y| present[y])
        .filter_map(|y| tie_gap(&terms[y], costs.row(y), y))
        .reduce(f64::min)
        .expect("every row has a positive off-diagonal cost");
    Ok(LossFloor { l_star, l_bullet: l_star + gap / (2.0 * n) })
}

/// Rescale so that predicting uniformly at random costs exactly 1 on average
/// over the given labels.
pub fn normalize_random_unit(costs: &CostMatrix, labels: &[usize]) -> Result<CostMatrix> {
    let k = costs.n_classes();
    if labels.is_empty() {
        return Err(invalid("no labels"));
    }
    if let Some(&y) = labels.iter().find(|&&y| y >= k) {
        return Err(invalid(alloc::format!("label {y} outside 0..{k}")));
    }
    let expected =
        labels.iter().map(|&y| costs.row(y).iter().sum::<f64>() / k as f64).sum::<f64>() / labels.len() as f64;
    if !(expected > 0.0) {
        return Err(invalid("random guessing has zero expected cost"));
    }
    costs.scaled(1.0 / expected)
}

/// Expected cost of uniform random guessing over `labels`.
pub fn random_guess_cost(costs: &CostMatrix, labels: &[usize]) -> f64 {
    let k = costs.n_classes() as f64;
    labels.iter().map(|&y| costs.row(y).iter().sum::<f64>() / k).sum::<f64>() / labels.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn decompose_zero_one_rows() {
        let d = decompose_row(&[0.0, 1.0, 1.0]).unwrap();
        assert_eq!((d.beta, d.b.clone(), d.phi), (0.0, vec![1.0, 0.0, 0.0], 1.0));
        let d = decompose_row(&[0.0, 1.0]).unwrap();
        assert_eq!((d.beta, d.b.clone(), d.phi), (0.0, vec![1.0, 0.0], 1.0));
    }

    #[test]
    fn decompose_asymmetric_row_reconstructs() {
        let d = decompose_row(&[0.0, 2.0, 6.0]).unwrap();
        assert_eq!(d.beta, -4.0);
        assert_eq!(d.b, vec![6.0, 4.0, 0.0]);
        assert_eq!(d.phi, 6.0);
        assert_eq!(d.reconstruct(), vec![0.0, 2.0, 6.0]);
    }

    #[test]
    fn floor_stays_finite_for_huge_costs() {
        let c = CostMatrix::from_rows(&[[0.0, 1e300], [1e300, 0.0]]).unwrap();
        let f = loss_floor(&c, &[0, 1]).unwrap();
        // per sample the gap is 2·sqrt(C·C) = 2C, halved and averaged over 2
        assert_eq!(f.l_star, 0.0);
        assert!((f.l_bullet / 5e299 - 1.0).abs() < 1e-12, "{}", f.l_bullet);
    }

    #[test]
    fn degenerate_row_rejected() {
        assert!(decompose_row(&[0.0, 0.0, 0.0]).is_err());
        assert!(CostMatrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]).is_err());
    }

    #[test]
    fn diagonal_noise_is_snapped() {
        let c = CostMatrix::from_rows(&[[1e-13, 1.0], [2.0, 0.0]]).unwrap();
        assert_eq!(c.get(0, 0), 0.0);
        assert!(CostMatrix::from_rows(&[[1e-6, 1.0], [2.0, 0.0]]).is_err());
        assert!(CostMatrix::from_rows(&[[0.0, -1.0], [2.0, 0.0]]).is_err());
    }

    #[test]
    fn zero_one_terms() {
        let t = sample_terms(&CostMatrix::uniform(3), 0);
        assert_eq!(t.c_plus, vec![0.0, 1.0, 1.0]);
        assert_eq!(t.c_minus, vec![1.0, 0.0, 0.0]);
        assert_eq!(t.c_star, 0.0);
        assert_eq!(t.h_star[0], f64::INFINITY);
        assert_eq!(t.h_star[1], f64::NEG_INFINITY);
    }

    #[test]
    fn symmetric_row_has_zero_c_star() {
        let c = CostMatrix::from_rows(&[[0.0, 3.5, 3.5], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]]).unwrap();
        assert_eq!(sample_terms(&c, 0).c_star, 0.0);
    }

    /// Dense-grid minimization of `⟨c⁺, e^H⟩ + ⟨c⁻, e^−H⟩`. The objective is
    /// separable, so each coordinate is scanned on its own grid.
    fn grid_min(c_plus: &[f64], c_minus: &[f64]) -> f64 {
        c_plus
            .iter()
            .zip(c_minus)
            .map(|(&p, &m)| {
                (0..=400_000)
                    .map(|i| -20.0 + 40.0 * i as f64 / 400_000.0)
                    .map(|h: f64| p * h.exp() + m * (-h).exp())
                    .fold(f64::INFINITY, f64::min)
            })
            .sum()
    }

    #[test]
    fn asymmetric_row_terms_match_grid_oracle() {
        let c = CostMatrix::from_rows(&[[0.0, 2.0, 6.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]]).unwrap();
        let t = sample_terms(&c, 0);
        assert_eq!(t.c_plus, vec![4.0, 6.0, 10.0]);
        assert_eq!(t.c_minus, vec![6.0, 4.0, 0.0]);
        let oracle = grid_min(&t.c_plus, &t.c_minus);
        assert!(close(t.c_star, oracle, 1e-6), "{} vs {}", t.c_star, oracle);
        assert!(close(t.c_star, 19.595917942265423, 1e-12));
    }

    /// Direct scan for the certificate gap: minimize one sample's loss with
    /// `H_y = H_k = h` forced, all other coordinates free.
    fn tie_gap_scan(t: &SampleCostTerms, y: usize, k: usize) -> f64 {
        let free: f64 =
            (0..t.c_plus.len()).filter(|&j| j != y && j != k).map(|j| 2.0 * (t.c_plus[j] * t.c_minus[j]).sqrt()).sum();
        let (p, m) = (t.c_plus[y] + t.c_plus[k], t.c_minus[y] + t.c_minus[k]);
        let tied = (0..=400_000)
            .map(|i| -20.0 + 40.0 * i as f64 / 400_000.0)
            .map(|h: f64| p * h.exp() + m * (-h).exp())
            .fold(f64::INFINITY, f64::min);
        free + tied - t.c_star
    }

    #[test]
    fn loss_floor_zero_one_single_sample() {
        let f = loss_floor(&CostMatrix::uniform(2), &[0]).unwrap();
        assert_eq!(f.l_star, 0.0);
        let scan = tie_gap_scan(&sample_terms(&CostMatrix::uniform(2), 0), 0, 1) / 2.0;
        assert!(close(f.l_bullet, 1.0, 1e-15));
        assert!(close(f.l_bullet, scan, 1e-6));
    }

    #[test]
    fn loss_floor_asymmetric_single_sample() {
        let c = CostMatrix::from_rows(&[[0.0, 2.0, 6.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]]).unwrap();
        let f = loss_floor(&c, &[0]).unwrap();
        let t = sample_terms(&c, 0);
        assert!(close(f.l_star, -4.0 + t.c_star / 2.0, 1e-12));
        let scan = tie_gap_scan(&t, 0, 1).min(tie_gap_scan(&t, 0, 2)) / 2.0;
        assert!(close(f.l_bullet - f.l_star, scan, 1e-6));
        assert!(close(f.l_bullet, 6.0, 1e-12));
    }

    #[test]
    fn loss_floor_scales_linearly() {
        let c = CostMatrix::from_rows(&[[0.0, 2.0, 6.0], [1.0, 0.0, 3.0], [0.5, 1.0, 0.0]]).unwrap();
        let labels = [0, 1, 2, 2, 1];
        let a = loss_floor(&c, &labels).unwrap();
        let b = loss_floor(&c.scaled(3.0).unwrap(), &labels).unwrap();
        assert!(close(b.l_star, 3.0 * a.l_star, 1e-12));
        assert!(close(b.l_bullet - b.l_star, 3.0 * (a.l_bullet - a.l_star), 1e-12));
    }

    #[test]
    fn normalize_examples() {
        let c = CostMatrix::uniform(2);
        let n = normalize_random_unit(&c, &[0, 1, 0, 1]).unwrap();
        assert_eq!(n.get(0, 1), 2.0);
        let again = normalize_random_unit(&n, &[0, 1, 0, 1]).unwrap();
        assert_eq!(again, n);
    }

    fn arb_row(k: usize) -> impl Strategy<Value = (usize, Vec<f64>)> {
        (0..k, proptest::collection::vec(0.0f64..10.0, k)).prop_filter_map("degenerate", |(y, mut row)| {
            row[y] = 0.0;
            row.iter().any(|&c| c > 0.0).then_some((y, row))
        })
    }

    fn arb_matrix() -> impl Strategy<Value = CostMatrix> {
        (2usize..7).prop_flat_map(|k| {
            proptest::collection::vec(0.01f64..10.0, k * k).prop_map(move |mut e| {
                for y in 0..k {
                    e[y * k + y] = 0.0;
                }
                CostMatrix::new(k, e).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn decomposition_round_trip((y, row) in (2usize..8).prop_flat_map(arb_row)) {
            let d = decompose_row(&row).unwrap();
            for (r, c) in d.reconstruct().iter().zip(&row) {
                prop_assert!((r - c).abs() <= 1e-12);
            }
            prop_assert!(d.b.iter().all(|&b| b >= 0.0));
            prop_assert_eq!(d.b.iter().copied().fold(f64::INFINITY, f64::min), 0.0);
            let sum_b: f64 = d.b.iter().sum();
            prop_assert!((sum_b - (d.phi - d.beta)).abs() <= 1e-12);
            prop_assert!(d.beta <= 0.0);
            let _ = y;
        }

        #[test]
        fn terms_structure(m in arb_matrix(), pick in 0usize..64) {
            let y = pick % m.n_classes();
            let t = sample_terms(&m, y);
            let argmax = (0..m.n_classes()).fold(0, |a, k| if m.get(y, k) > m.get(y, a) { k } else { a });
            prop_assert_eq!(t.c_minus[argmax], 0.0);
            prop_assert_eq!(t.c_plus[y], -t.beta);
            prop_assert!(t.c_plus.iter().chain(&t.c_minus).all(|&v| v >= 0.0));
        }

        #[test]
        fn certificate_level_exceeds_floor(m in arb_matrix(), labels in proptest::collection::vec(0usize..64, 1..20)) {
            let labels: Vec<usize> = labels.iter().map(|l| l % m.n_classes()).collect();
            let f = loss_floor(&m, &labels).unwrap();
            prop_assert!(f.l_bullet > f.l_star);
        }
    }

    #[test]
    fn c_star_matches_grid_on_random_rows() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let k = rng.random_range(2..6);
            let entries: Vec<f64> =
                (0..k * k).map(|i| if i / k == i % k { 0.0 } else { rng.random_range(0.1..5.0) }).collect();
            let m = CostMatrix::new(k, entries).unwrap();
            for y in 0..k {
                let t = sample_terms(&m, y);
                let oracle = grid_min(&t.c_plus, &t.c_minus);
                assert!(close(t.c_star, oracle, 1e-6 * (1.0 + oracle)), "{} vs {oracle}", t.c_star);
            }
        }
    }
}
