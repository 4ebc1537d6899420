//! Text formats: dataset and cost CSV, the model file, traces and reports.

mod costs;
mod dataset;
mod model;
mod report;
mod trace;

pub use costs::{format_costs, load_costs, parse_costs, save_costs};
pub use dataset::{load_dataset, parse_dataset, write_dataset, DatasetOptions, LabelSpec, LoadedDataset};
pub use model::{load_model, parse_model, save_model, serialize_model, ModelFile, MODEL_FORMAT};
pub use report::{cost_checksum, EvalReport, TrainReport};
pub use trace::{trace_csv, write_trace};

use std::path::Path;

use crate::error::{Error, Result};

pub(crate) fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
