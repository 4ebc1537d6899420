//! Greedy growth of a tree by one level.
//!
//! 1. Every leaf is replaced by a stump copying its parent, which leaves the
//!    tree's function unchanged.
//! 2. With the output vector `a` held fixed, every new leaf stump is
//!    re-optimized over the full (feature, threshold, polarity) grid. Leaves
//!    partition the samples, so each leaf minimizes its own
//!    `Σ_{+1 side} u_n + Σ_{−1 side} v_n` with
//!    `u_n = ⟨w⁺_n, e^a⟩ + ⟨w⁻_n, e^−a⟩` and `v_n = ⟨w⁺_n, e^−a⟩ + ⟨w⁻_n, e^a⟩`.
//!    A leaf keeps its copied stump unless a candidate strictly improves it.
//! 3. The vector is refit in closed form on the new tree.

use alloc::vec::Vec;

use crate::boost::WeightState;
use crate::math::exp;

use super::{
    accumulate_split, first_near_min, map_features, optimal_vector, Polarity, SearchContext, SplitScores, Stump, Tree,
    TIE_TOLERANCE,
};

#[derive(Debug, Clone, PartialEq)]
pub struct GrownTree {
    pub tree: Tree,
    pub a: Vec<f64>,
    pub split_loss: f64,
    pub scores: SplitScores,
    /// Leaves whose stump differs from the copied parent.
    pub leaves_changed: usize,
}

/// Per-candidate objective for one leaf: index `2i` is threshold `i` with
/// positive polarity, `2i + 1` the same threshold negated.
fn leaf_objectives(ctx: &SearchContext<'_>, feature: usize, members: &[usize], u: &[f64], v: &[f64]) -> Vec<f64> {
    let n_thr = ctx.grid().thresholds(feature).len();
    let bins = ctx.feature_bins(feature);
    let mut hist_u = alloc::vec![0.0; n_thr + 1];
    let mut hist_v = alloc::vec![0.0; n_thr + 1];
    for &n in members {
        let b = bins[n] as usize;
        hist_u[b] += u[n];
        hist_v[b] += v[n];
    }
    let total_u: f64 = hist_u.iter().sum();
    let total_v: f64 = hist_v.iter().sum();
    let (mut below_u, mut below_v) = (0.0, 0.0);
    let mut out = Vec::with_capacity(2 * n_thr);
    for i in 0..n_thr {
        below_u += hist_u[i];
        below_v += hist_v[i];
        out.push((total_u - below_u) + below_v);
        out.push((total_v - below_v) + below_u);
    }
    out
}

fn direct_objective(stump: &Stump, ctx: &SearchContext<'_>, members: &[usize], u: &[f64], v: &[f64]) -> f64 {
    let data = ctx.data();
    members.iter().map(|&n| if stump.predict(data.row(n)) > 0.0 { u[n] } else { v[n] }).sum()
}

fn best_leaf_stump(ctx: &SearchContext<'_>, init: Stump, members: &[usize], u: &[f64], v: &[f64]) -> Option<Stump> {
    if members.is_empty() {
        return None;
    }
    let grid = ctx.grid();
    let per_feature = map_features(grid.n_features(), |j| leaf_objectives(ctx, j, members, u, v));

    let init_value = match grid.index_of(init.feature, init.threshold) {
        Some(i) => per_feature[init.feature][2 * i + usize::from(init.polarity == Polarity::Negative)],
        None => direct_objective(&init, ctx, members, u, v),
    };

    let flat: Vec<f64> = per_feature.iter().flatten().copied().collect();
    let mut pick = first_near_min(&flat)?;
    if flat[pick] >= init_value - TIE_TOLERANCE * init_value.abs() {
        return None;
    }
    let mut feature = 0;
    while pick >= per_feature[feature].len() {
        pick -= per_feature[feature].len();
        feature += 1;
    }
    let polarity = if pick % 2 == 0 { Polarity::Positive } else { Polarity::Negative };
    Some(Stump::new(feature, grid.thresholds(feature)[pick / 2], polarity))
}

/// Add one level to `tree` (trained with vector `a` on `weights`) and refit
/// the vector.
///
/// The returned split loss never exceeds the input tree's: if the refit tree
/// does not improve on the copied-parent tree, the copied-parent tree is
/// returned instead.
pub fn grow_layer(ctx: &SearchContext<'_>, tree: &Tree, a: &[f64], weights: &WeightState, epsilon: f64) -> GrownTree {
    let data = ctx.data();
    let n = data.len();
    let identity = tree.deepened();
    let first_new = identity.first_leaf();
    let n_leaves = identity.nodes().len() - first_new;

    let ea: Vec<f64> = a.iter().map(|&x| exp(x)).collect();
    let ena: Vec<f64> = a.iter().map(|&x| exp(-x)).collect();
    let mut u = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    for i in 0..n {
        let (wp, wm) = (weights.plus(i), weights.minus(i));
        let mut ui = 0.0;
        let mut vi = 0.0;
        for c in 0..a.len() {
            ui += wp[c] * ea[c] + wm[c] * ena[c];
            vi += wp[c] * ena[c] + wm[c] * ea[c];
        }
        u.push(ui);
        v.push(vi);
    }

    let mut members: Vec<Vec<usize>> = alloc::vec![Vec::new(); n_leaves];
    for (i, x) in data.rows().enumerate() {
        let (leaf, out) = tree.route(x);
        let child = 2 * leaf + if out > 0.0 { 2 } else { 1 };
        members[child - first_new].push(i);
    }

    let mut nodes = identity.nodes().to_vec();
    let mut leaves_changed = 0;
    for (slot, member) in members.iter().enumerate() {
        if let Some(stump) = best_leaf_stump(ctx, nodes[first_new + slot], member, &u, &v) {
            nodes[first_new + slot] = stump;
            leaves_changed += 1;
        }
    }

    let identity_scores = accumulate_split(&identity, data, weights);
    let identity_loss = identity_scores.split_loss();
    if leaves_changed > 0 {
        let grown = Tree::from_nodes(identity.depth(), nodes).expect("shape preserved");
        let scores = accumulate_split(&grown, data, weights);
        let (a_new, split_loss) = optimal_vector(&scores, epsilon);
        if split_loss <= identity_loss {
            return GrownTree { tree: grown, a: a_new, split_loss, scores, leaves_changed };
        }
    }
    let (a_new, split_loss) = optimal_vector(&identity_scores, epsilon);
    GrownTree { tree: identity, a: a_new, split_loss, scores: identity_scores, leaves_changed: 0 }
}
