use std::fmt::Write as _;
use std::path::Path;

use rebel_core::CostMatrix;

use super::{read_text, write_text};
use crate::error::{Error, Result};

/// K lines of K comma-separated values, no header. Blank lines are ignored.
pub fn parse_costs(text: &str, origin: &Path) -> Result<CostMatrix> {
    let data_err = |line: usize, column: Option<usize>, message: String| Error::Data {
        path: origin.to_path_buf(),
        line: line as u64,
        column,
        message,
    };
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .enumerate()
            .map(|(j, field)| {
                field
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| data_err(i + 1, Some(j + 1), format!("not a number: {:?}", field.trim())))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    let k = rows.len();
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != k) {
        return Err(data_err(i + 1, None, format!("expected {k} values per row, found {}", row.len())));
    }
    Ok(CostMatrix::from_rows(&rows)?)
}

pub fn load_costs(path: &Path) -> Result<CostMatrix> {
    parse_costs(&read_text(path)?, path)
}

/// Shortest round-trip decimal for every entry.
pub fn format_costs(costs: &CostMatrix) -> String {
    let mut out = String::new();
    for y in 0..costs.n_classes() {
        let row: Vec<String> = costs.row(y).iter().map(|v| format!("{v:?}")).collect();
        writeln!(out, "{}", row.join(",")).unwrap();
    }
    out
}

pub fn save_costs(path: &Path, costs: &CostMatrix) -> Result<()> {
    write_text(path, &format_costs(costs))
}
