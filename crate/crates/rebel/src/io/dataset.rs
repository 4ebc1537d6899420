use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rebel_core::Dataset;

use super::{read_text, write_text};
use crate::error::{Error, Result};

/// Where a dataset's labels come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelSpec {
    /// The last CSV column.
    Last,
    /// The first CSV column.
    First,
    /// The 1-based column `N`.
    Column(usize),
    /// A separate file holding one label per line, in row order.
    File(PathBuf),
    /// No labels: every column is a feature.
    None,
}

impl FromStr for LabelSpec {
    type Err = Error;

    /// `last`, `first`, `col:N`, `file:PATH` or `none`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "last" => return Ok(LabelSpec::Last),
            "first" => return Ok(LabelSpec::First),
            "none" => return Ok(LabelSpec::None),
            _ => {}
        }
        if let Some(n) = s.strip_prefix("col:") {
            return match n.parse::<usize>() {
                Ok(n) if n >= 1 => Ok(LabelSpec::Column(n)),
                _ => Err(Error::Invalid(format!("label column must be a 1-based index, got {n:?}"))),
            };
        }
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(LabelSpec::File(PathBuf::from(path)));
        }
        Err(Error::Invalid(format!("unknown label spec {s:?}; expected last, first, col:N, file:PATH or none")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetOptions {
    pub labels: LabelSpec,
    pub has_header: bool,
    /// Reuse an existing token-to-class mapping instead of deriving one;
    /// tokens outside it are rejected.
    pub classes: Option<Vec<String>>,
}

impl DatasetOptions {
    pub fn new(labels: LabelSpec) -> Self {
        Self { labels, has_header: false, classes: None }
    }
}

/// A parsed CSV: features, plus labels when the spec names them.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedDataset {
    pub features: Vec<f64>,
    pub n_features: usize,
    /// Class index per row, `None` for [`LabelSpec::None`].
    pub labels: Option<Vec<usize>>,
    /// Class tokens; index `k` is the token of class `k`.
    pub classes: Vec<String>,
}

impl LoadedDataset {
    pub fn len(&self) -> usize {
        self.features.len() / self.n_features
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.features.chunks(self.n_features)
    }

    /// The labelled dataset; fails if the file had no labels.
    pub fn dataset(&self) -> Result<Dataset> {
        let labels = self.labels.clone().ok_or_else(|| Error::Invalid("the dataset has no labels".into()))?;
        Ok(Dataset::new(self.features.clone(), self.n_features, labels, self.classes.len())?)
    }
}

pub fn load_dataset(path: &Path, options: &DatasetOptions) -> Result<LoadedDataset> {
    let text = read_text(path)?;
    let label_lines = match &options.labels {
        LabelSpec::File(p) => Some((read_text(p)?, p.clone())),
        _ => None,
    };
    parse_dataset(&text, path, options, label_lines.as_ref().map(|(t, p)| (t.as_str(), p.as_path())))
}

/// Parse CSV text. `label_file` supplies the text and path of a
/// [`LabelSpec::File`] label list.
pub fn parse_dataset(
    text: &str,
    origin: &Path,
    options: &DatasetOptions,
    label_file: Option<(&str, &Path)>,
) -> Result<LoadedDataset> {
    let err = |line: u64, column: Option<usize>, message: String| Error::Data {
        path: origin.to_path_buf(),
        line,
        column,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(options.has_header)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());

    let mut width: Option<usize> = None;
    let mut features = Vec::new();
    let mut tokens: Vec<String> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            err(line, None, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        match width {
            None => width = Some(record.len()),
            Some(w) if w != record.len() => {
                return Err(err(line, None, format!("expected {w} fields, found {}", record.len())));
            }
            _ => {}
        }
        let label_col = match options.labels {
            LabelSpec::Last => Some(record.len() - 1),
            LabelSpec::First => Some(0),
            LabelSpec::Column(c) => {
                if c > record.len() {
                    return Err(err(line, None, format!("label column {c} but the row has {} fields", record.len())));
                }
                Some(c - 1)
            }
            LabelSpec::File(_) | LabelSpec::None => None,
        };
        for (j, field) in record.iter().enumerate() {
            if Some(j) == label_col {
                tokens.push(field.to_string());
                continue;
            }
            let value: f64 = field.parse().map_err(|_| err(line, Some(j + 1), format!("not a number: {field:?}")))?;
            if !value.is_finite() {
                return Err(err(line, Some(j + 1), format!("non-finite feature value {field:?}")));
            }
            features.push(value);
        }
    }
    let width = width.ok_or_else(|| err(1, None, "no data rows".into()))?;
    let n_features =
        width - usize::from(matches!(options.labels, LabelSpec::Last | LabelSpec::First | LabelSpec::Column(_)));
    if n_features == 0 {
        return Err(err(1, None, "no feature columns".into()));
    }
    let n_rows = features.len() / n_features;

    if let Some((label_text, label_path)) = label_file {
        for (i, l) in label_text.lines().enumerate() {
            let t = l.trim();
            if t.is_empty() {
                continue;
            }
            if tokens.len() == n_rows {
                return Err(Error::Data {
                    path: label_path.to_path_buf(),
                    line: i as u64 + 1,
                    column: None,
                    message: format!("more labels than the {n_rows} data rows"),
                });
            }
            tokens.push(t.to_string());
        }
        if tokens.len() != n_rows {
            return Err(Error::Data {
                path: label_path.to_path_buf(),
                line: tokens.len() as u64,
                column: None,
                message: format!("{} labels for {n_rows} data rows", tokens.len()),
            });
        }
    }

    if matches!(options.labels, LabelSpec::None) {
        let classes = options.classes.clone().unwrap_or_default();
        return Ok(LoadedDataset { features, n_features, labels: None, classes });
    }
    let classes = match &options.classes {
        Some(c) => c.clone(),
        None => tokens.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect(),
    };
    let labels = tokens
        .iter()
        .enumerate()
        .map(|(row, t)| {
            classes.binary_search(t).ok().or_else(|| classes.iter().position(|c| c == t)).ok_or_else(|| {
                Error::Invalid(format!("row {}: unknown label {t:?} (known: {})", row + 1, classes.join(", ")))
            })
        })
        .collect::<Result<Vec<usize>>>()?;
    Ok(LoadedDataset { features, n_features, labels: Some(labels), classes })
}

/// Features followed by the label token, no header.
pub fn write_dataset(path: &Path, data: &Dataset, classes: &[String]) -> Result<()> {
    let mut out = String::new();
    for (x, &y) in data.rows().zip(data.labels()) {
        for v in x {
            write!(out, "{v:?},").unwrap();
        }
        writeln!(out, "{}", classes[y]).unwrap();
    }
    write_text(path, &out)
}
