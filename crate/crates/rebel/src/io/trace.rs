use std::path::Path;

use rebel_core::TrainTrace;

use super::write_text;
use crate::error::Result;

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

/// One row per round. `gamma` and `phi` are empty when the weights already
/// sit at the loss floor; `bound_factor` is `e^{−φ²/2}`.
pub fn trace_csv(trace: &TrainTrace) -> String {
    let mut out = String::from(
        "round,loss,loss_excess,gamma,phi,bound_factor,train_error,train_risk,depth,root_feature,root_threshold,split_loss\n",
    );
    for r in &trace.rounds {
        let bound = r.phi.map(|p| (-p * p / 2.0).exp());
        out.push_str(&format!(
            "{},{:?},{:?},{},{},{},{:?},{:?},{},{},{:?},{:?}\n",
            r.round,
            r.loss,
            r.loss_excess,
            opt(r.gamma),
            opt(r.phi),
            opt(bound),
            r.train_error,
            r.train_risk,
            r.depth,
            r.root_feature,
            r.root_threshold,
            r.split_loss
        ));
    }
    out
}

pub fn write_trace(path: &Path, trace: &TrainTrace) -> Result<()> {
    write_text(path, &trace_csv(trace))
}
