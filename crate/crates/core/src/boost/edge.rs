use crate::weak::SplitScores;

/// Edge diagnostics of one round.
///
/// `gamma` is the largest `γ` with `⟨|s⁺ − s⁻|, 1⟩ ≥ γ(⟨s⁺ + s⁻, 1⟩ − c*)`;
/// `phi = γ(1 − c*/(L• − L* + c*))` drives the per-round bound
/// `(L_{t} − L*) ≤ sqrt(1 − φ²)(L_{t−1} − L*)`, valid while `L_t ≥ L•`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    /// `None` when `⟨s⁺ + s⁻, 1⟩ ≤ c*`, i.e. the weights already sit at the floor.
    pub gamma: Option<f64>,
    pub phi: Option<f64>,
}

/// `c_star` is `(1/2N) Σ c*_n`; `gap` is `L• − L*`.
pub fn edge(scores: &SplitScores, c_star: f64, gap: f64) -> Edge {
    let denom = scores.total() - c_star;
    if !(denom > 0.0) {
        return Edge { gamma: None, phi: None };
    }
    let gamma = scores.imbalance() / denom;
    let phi = gamma * (1.0 - c_star / (gap + c_star));
    Edge { gamma: Some(gamma), phi: Some(phi) }
}
