//! Binary weak learners and their training against multi-class weights.

use alloc::vec::Vec;

use crate::error::{invalid, Result};

mod grid;
mod grow;
mod search;
mod split;

pub use grid::{SearchContext, ThresholdGrid};
pub use grow::{grow_layer, GrownTree};
pub use search::{stump_search, StumpChoice};
pub use split::{accumulate_split, optimal_vector, SplitScores};

/// Relative slack under which two candidate objectives count as tied.
///
/// Different summation orders of the same weights agree only up to a few
/// ulps; ties inside this band go to the lowest (feature, threshold,
/// polarity) index so every search path picks the same learner.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Index of the first value within [`TIE_TOLERANCE`] of the minimum.
/// Non-finite and NaN entries are never selected.
pub fn first_near_min(values: &[f64]) -> Option<usize> {
    let min = values.iter().copied().filter(|v| v.is_finite()).reduce(f64::min)?;
    let cutoff = min + TIE_TOLERANCE * min.abs();
    values.iter().position(|&v| v.is_finite() && v <= cutoff)
}

/// Run `f` for every feature index, in parallel when the `parallel` feature
/// is on. Output order is always feature order.
pub(crate) fn map_features<T, F>(n_features: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n_features).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n_features).map(f).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn sign(self) -> f64 {
        match self {
            Polarity::Positive => 1.0,
            Polarity::Negative => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }

    pub fn from_sign(sign: i32) -> Option<Self> {
        match sign {
            1 => Some(Polarity::Positive),
            -1 => Some(Polarity::Negative),
            _ => None,
        }
    }
}

/// `ρ·sign(x_j − τ)` with `sign(0) = −1`: outputs `ρ` iff `x_j > τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stump {
    pub feature: usize,
    pub threshold: f64,
    pub polarity: Polarity,
}

impl Stump {
    pub fn new(feature: usize, threshold: f64, polarity: Polarity) -> Self {
        Self { feature, threshold, polarity }
    }

    #[inline]
    pub fn predict(&self, x: &[f64]) -> f64 {
        if x[self.feature] > self.threshold {
            self.polarity.sign()
        } else {
            -self.polarity.sign()
        }
    }
}

/// A complete binary tree of stumps, stored in heap order.
///
/// Node `i` sends a sample to child `2i + 1` when it outputs `−1` and to
/// `2i + 2` when it outputs `+1`. The output of the node reached on the last
/// level is the tree's output.
#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    depth: usize,
    nodes: Vec<Stump>,
}

impl Tree {
    pub fn stump(stump: Stump) -> Self {
        Self { depth: 1, nodes: alloc::vec![stump] }
    }

    pub fn from_nodes(depth: usize, nodes: Vec<Stump>) -> Result<Self> {
        if depth == 0 || depth > 24 {
            return Err(invalid("tree depth must be in 1..=24"));
        }
        if nodes.len() != (1 << depth) - 1 {
            return Err(invalid(alloc::format!(
                "depth-{depth} tree needs {} nodes, got {}",
                (1usize << depth) - 1,
                nodes.len()
            )));
        }
        Ok(Self { depth, nodes })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn nodes(&self) -> &[Stump] {
        &self.nodes
    }

    pub fn root(&self) -> &Stump {
        &self.nodes[0]
    }

    /// Index of the first node on the last level.
    pub fn first_leaf(&self) -> usize {
        (1 << (self.depth - 1)) - 1
    }

    /// Node reached on the last level and its output.
    #[inline]
    pub fn route(&self, x: &[f64]) -> (usize, f64) {
        let mut node = 0;
        loop {
            let out = self.nodes[node].predict(x);
            let child = 2 * node + if out > 0.0 { 2 } else { 1 };
            if child >= self.nodes.len() {
                return (node, out);
            }
            node = child;
        }
    }

    #[inline]
    pub fn predict(&self, x: &[f64]) -> f64 {
        self.route(x).1
    }

    /// Add a level whose stumps copy their parents, leaving the function
    /// unchanged.
    pub fn deepened(&self) -> Tree {
        let mut nodes = self.nodes.clone();
        nodes.reserve(1 << self.depth);
        for parent in self.first_leaf()..self.nodes.len() {
            let stump = self.nodes[parent];
            nodes.push(stump);
            nodes.push(stump);
        }
        Tree { depth: self.depth + 1, nodes }
    }

    /// The tree computing `−f`: every last-level polarity flips, routing is
    /// untouched.
    pub fn negated(&self) -> Tree {
        let mut out = self.clone();
        let first = out.first_leaf();
        for node in &mut out.nodes[first..] {
            node.polarity = node.polarity.flipped();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn stump_sign_convention() {
        let s = Stump::new(0, 1.0, Polarity::Positive);
        assert_eq!(s.predict(&[1.5]), 1.0);
        assert_eq!(s.predict(&[1.0]), -1.0);
        let s = Stump::new(0, 1.0, Polarity::Negative);
        assert_eq!(s.predict(&[1.0]), 1.0);
    }

    #[test]
    fn depth_one_tree_is_its_root() {
        let s = Stump::new(1, -0.5, Polarity::Negative);
        let t = Tree::stump(s);
        for x in [[0.0, -1.0], [0.0, 0.0], [3.0, -0.5]] {
            assert_eq!(t.predict(&x), s.predict(&x));
        }
    }

    #[test]
    fn deepened_tree_is_functionally_identical() {
        let t = Tree::from_nodes(
            2,
            vec![
                Stump::new(0, 0.0, Polarity::Positive),
                Stump::new(1, 0.5, Polarity::Negative),
                Stump::new(1, -0.5, Polarity::Positive),
            ],
        )
        .unwrap();
        let d = t.deepened();
        assert_eq!(d.depth(), 3);
        assert_eq!(d.nodes().len(), 7);
        for i in 0..100 {
            let x = [(i % 10) as f64 / 5.0 - 1.0, (i / 10) as f64 / 5.0 - 1.0];
            assert_eq!(d.predict(&x), t.predict(&x));
            assert_eq!(t.negated().predict(&x), -t.predict(&x));
        }
    }

    #[test]
    fn node_count_checked() {
        assert!(Tree::from_nodes(2, vec![Stump::new(0, 0.0, Polarity::Positive)]).is_err());
    }

    #[test]
    fn near_min_selection() {
        assert_eq!(first_near_min(&[3.0, 1.0 + 1e-14, 1.0, 0.5 + 2.0]), Some(1));
        assert_eq!(first_near_min(&[f64::INFINITY, 2.0, 1.0]), Some(2));
        assert_eq!(first_near_min(&[f64::INFINITY]), None);
        assert_eq!(first_near_min(&[0.0, 1e-300, 0.0]), Some(0));
    }
}
