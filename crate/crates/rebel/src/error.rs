use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] rebel_core::Error),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    /// A malformed dataset or cost file. `line` is 1-based.
    #[error("{}:{line}{}: {message}", path.display(), column.map(|c| format!(", column {c}")).unwrap_or_default())]
    Data { path: PathBuf, line: u64, column: Option<usize>, message: String },

    #[error("model parse error at byte {offset}: {message}")]
    ModelParse { offset: usize, message: String },

    #[error("unsupported model format {found:?} (this build reads {expected:?})")]
    UnsupportedVersion { found: String, expected: &'static str },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code: 3 for numeric-range aborts, 2 for every input error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Core(rebel_core::Error::NumericRange { .. }) => 3,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
