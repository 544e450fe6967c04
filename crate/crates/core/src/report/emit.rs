use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ReportError;
use crate::similarity::{DistributionStats, HistogramBin};

pub const CLASS_POOLED: &str = "pooled";

/// One line of the stats CSV:
/// `comparison,name,class,sample_size,mean,sd,skewness`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    /// Comparison identifier, e.g. `real_vs_syn`.
    pub comparison: String,
    /// Pair mode the scores came from (`within` or `cross`).
    pub name: String,
    /// `blood`, `no_blood` or `pooled`.
    pub class: String,
    pub sample_size: usize,
    pub mean: f64,
    pub sd: f64,
    pub skewness: f64,
}

impl StatsRow {
    pub fn new(comparison: &str, name: &str, class: &str, stats: &DistributionStats) -> Self {
        Self {
            comparison: comparison.to_string(),
            name: name.to_string(),
            class: class.to_string(),
            sample_size: stats.sample_size,
            mean: stats.mean,
            sd: stats.sd,
            skewness: stats.skewness,
        }
    }

    pub fn stats(&self) -> DistributionStats {
        DistributionStats {
            sample_size: self.sample_size,
            mean: self.mean,
            sd: self.sd,
            skewness: self.skewness,
            degenerate: self.sd == 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramReport {
    pub comparison: String,
    pub bins: Vec<HistogramBin>,
}

fn io(path: &Path, e: impl ToString) -> ReportError {
    ReportError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    }
}

/// Writes rows in the given order. Floats use the shortest representation
/// that parses back to the same value.
pub fn emit_stats_csv(rows: &[StatsRow], path: &Path) -> Result<(), ReportError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(["comparison", "name", "class", "sample_size", "mean", "sd", "skewness"])
        .map_err(|e| io(path, e))?;
    for r in rows {
        w.serialize(r).map_err(|e| io(path, e))?;
    }
    let bytes = w.into_inner().map_err(|e| io(path, e))?;
    std::fs::write(path, bytes).map_err(|e| io(path, e))
}

pub fn read_stats_csv(path: &Path) -> Result<Vec<StatsRow>, ReportError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| io(path, e))?;
    r.deserialize()
        .collect::<Result<Vec<StatsRow>, _>>()
        .map_err(|e| ReportError::Parse {
            what: path.display().to_string(),
            reason: e.to_string(),
        })
}

pub fn emit_histogram_json(report: &HistogramReport, path: &Path) -> Result<(), ReportError> {
    let mut json = serde_json::to_string_pretty(report).expect("histogram serializes");
    json.push('\n');
    std::fs::write(path, json).map_err(|e| io(path, e))
}

pub fn read_histogram_json(path: &Path) -> Result<HistogramReport, ReportError> {
    let bytes = std::fs::read(path).map_err(|e| io(path, e))?;
    serde_json::from_slice(&bytes).map_err(|e| ReportError::Parse {
        what: path.display().to_string(),
        reason: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::similarity::histogram;

    fn rows() -> Vec<StatsRow> {
        let s = |n, m: f64| DistributionStats {
            sample_size: n,
            mean: m,
            sd: 0.1 / 3.0,
            skewness: -0.4884,
            degenerate: false,
        };
        vec![
            StatsRow::new("real_vs_syn", "cross", "blood", &s(6400, 0.47)),
            StatsRow::new("real_vs_syn", "cross", "no_blood", &s(6400, 0.48)),
            StatsRow::new("real_vs_syn", "cross", CLASS_POOLED, &s(12800, 1.0 / 3.0)),
        ]
    }

    #[test]
    fn three_rows_plus_header() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        emit_stats_csv(&rows(), &p).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "comparison,name,class,sample_size,mean,sd,skewness");
        assert!(lines[3].starts_with("real_vs_syn,cross,pooled,12800,"));
        assert_eq!(read_stats_csv(&p).unwrap(), rows());
    }

    #[test]
    fn empty_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("e.csv");
        emit_stats_csv(&[], &p).unwrap();
        assert_eq!(
            std::fs::read_to_string(&p).unwrap(),
            "comparison,name,class,sample_size,mean,sd,skewness\n"
        );
        assert!(read_stats_csv(&p).unwrap().is_empty());
    }

    #[test]
    fn rewrite_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
        emit_stats_csv(&rows(), &a).unwrap();
        emit_stats_csv(&rows(), &b).unwrap();
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }

    #[test]
    fn histogram_json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("h.json");
        let report = HistogramReport {
            comparison: "real_vs_real".into(),
            bins: histogram(&[0.3f64, 0.6, 0.61, 0.99], 4, (0.0, 1.0)).unwrap(),
        };
        emit_histogram_json(&report, &p).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&p).unwrap()).unwrap();
        assert_eq!(v["comparison"], "real_vs_real");
        assert_eq!(v["bins"][2]["count"], 2);
        assert_eq!(v["bins"][2]["lo"], 0.5);
        assert_eq!(read_histogram_json(&p).unwrap(), report);
    }
}
