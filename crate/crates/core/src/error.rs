use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index ({row}, {col}) out of range for a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },

    #[error("value {value} is not an element of the {domain} domain")]
    ValueOutsideDomain { value: String, domain: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("arithmetic overflow in the {0} domain")]
    Overflow(String),

    #[error("negative entry {value} at ({row}, {col}) in a nonnegative multiply")]
    NegativeEntry { row: usize, col: usize, value: String },

    #[error("row {row} of the support has {found} entries, more than the bound {bound}")]
    RowTooLarge { row: usize, found: usize, bound: usize },

    #[error("column {col} already has bucket {bucket} assigned")]
    AlreadyAssigned { col: usize, bucket: usize },

    #[error("column {col} of the light part has {found} nonzeros, above the threshold {delta}")]
    ColumnTooHeavy { col: usize, found: usize, delta: usize },

    #[error("support pair ({row}, {col}) was never isolated by the sampled hash family")]
    NotIsolated { row: usize, col: usize },

    #[error("operation not supported: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
