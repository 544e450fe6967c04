//! Statistics tables, histogram plot data, and comparison against the
//! published reference tables.

mod emit;
mod reference;

use thiserror::Error;

pub use emit::{
    emit_histogram_json, emit_stats_csv, read_histogram_json, read_stats_csv, HistogramReport, StatsRow, CLASS_POOLED,
};
pub use reference::{
    compare_to_reference, ComparisonReport, FieldCheck, ReferenceRow, ReferenceTable, TableName, Tolerances,
};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("unknown comparison {comparison:?} in {table}")]
    UnknownComparison { comparison: String, table: String },
    #[error("unknown reference table {0:?} (expected table2|table3|table4)")]
    UnknownTable(String),
    #[error("i/o error on {path}: {reason}")]
    Io { path: String, reason: String },
    #[error("malformed {what}: {reason}")]
    Parse { what: String, reason: String },
}

impl ReportError {
    pub fn kind(&self) -> &'static str {
        match self {
            ReportError::UnknownComparison { .. } => "UnknownComparison",
            ReportError::UnknownTable(_) => "UnknownTable",
            ReportError::Io { .. } => "IoError",
            ReportError::Parse { .. } => "ParseError",
        }
    }
}
