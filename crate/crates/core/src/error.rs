use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input data, with the offending 1-based data row when known.
    #[error("data error (row {row}): {msg}")]
    DataRow { row: usize, msg: String },
    #[error("data error: {0}")]
    Data(String),
    /// Bad run configuration: unknown variables, invalid orders, cap violations.
    #[error("config error: {0}")]
    Config(String),
    /// Structurally invalid object passed to an operation.
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("engine error: {0}")]
    Engine(String),
    #[error("engine timed out after {0:.1}s")]
    Timeout(f64),
    /// Document parse/validation failure, with a JSON-pointer-style path.
    #[error("schema violation at {path}: {msg}")]
    Schema { path: String, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn data_row(row: usize, msg: impl Into<String>) -> Self {
        Error::DataRow {
            row,
            msg: msg.into(),
        }
    }

    pub fn schema(path: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            msg: msg.into(),
        }
    }
}
