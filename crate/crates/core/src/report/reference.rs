use std::fmt;
use std::str::FromStr;

use serde::Deserialize;

use super::ReportError;
use crate::similarity::DistributionStats;

const TABLE2: &str = include_str!("../../assets/reference/v1/table2.csv");
const TABLE3: &str = include_str!("../../assets/reference/v1/table3.csv");
const TABLE4: &str = include_str!("../../assets/reference/v1/table4.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableName {
    /// Real vs real, synthetic vs synthetic, real vs synthetic.
    Table2,
    /// Real vs each synthetic batch.
    Table3,
    /// Original vs the three augmentation techniques (no sample sizes).
    Table4,
}

impl TableName {
    pub fn as_str(self) -> &'static str {
        match self {
            TableName::Table2 => "table2",
            TableName::Table3 => "table3",
            TableName::Table4 => "table4",
        }
    }
}

impl fmt::Display for TableName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TableName {
    type Err = ReportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table2" => Ok(TableName::Table2),
            "table3" => Ok(TableName::Table3),
            "table4" => Ok(TableName::Table4),
            other => Err(ReportError::UnknownTable(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ReferenceRow {
    pub comparison: String,
    pub sample_size: Option<usize>,
    pub mean: f64,
    pub sd: f64,
    pub skewness: f64,
}

/// A published summary table, loaded from the CSV assets bundled at build time.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceTable {
    pub name: TableName,
    pub rows: Vec<ReferenceRow>,
}

impl ReferenceTable {
    pub fn load(name: TableName) -> Self {
        let text = match name {
            TableName::Table2 => TABLE2,
            TableName::Table3 => TABLE3,
            TableName::Table4 => TABLE4,
        };
        let rows = csv::Reader::from_reader(text.as_bytes())
            .deserialize()
            .collect::<Result<Vec<ReferenceRow>, _>>()
            .expect("bundled reference table parses");
        Self { name, rows }
    }

    pub fn row(&self, comparison: &str) -> Result<&ReferenceRow, ReportError> {
        self.rows
            .iter()
            .find(|r| r.comparison == comparison)
            .ok_or_else(|| ReportError::UnknownComparison {
                comparison: comparison.to_string(),
                table: self.name.to_string(),
            })
    }
}

/// Absolute tolerances per statistic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub mean: f64,
    pub sd: f64,
    pub skewness: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            mean: 0.01,
            sd: 0.01,
            skewness: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldCheck {
    pub field: &'static str,
    pub computed: f64,
    pub reference: f64,
    /// `computed - reference`.
    pub delta: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub table: TableName,
    pub comparison: String,
    pub checks: Vec<FieldCheck>,
}

impl ComparisonReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, field: &str) -> Option<&FieldCheck> {
        self.checks.iter().find(|c| c.field == field)
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{}\t{}\t{}\tcomputed={}\treference={}\tdelta={:+.6}\ttol={}\t{}",
                self.table,
                self.comparison,
                c.field,
                c.computed,
                c.reference,
                c.delta,
                c.tolerance,
                if c.pass { "PASS" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

/// Compares computed statistics with one reference row. Sample sizes, when
/// the table has them, must match exactly; the rest pass within tolerance.
pub fn compare_to_reference(
    stats: &DistributionStats,
    table: &ReferenceTable,
    comparison: &str,
    tol: &Tolerances,
) -> Result<ComparisonReport, ReportError> {
    let row = table.row(comparison)?;
    let mut checks = Vec::with_capacity(4);
    if let Some(n) = row.sample_size {
        checks.push(FieldCheck {
            field: "sample_size",
            computed: stats.sample_size as f64,
            reference: n as f64,
            delta: stats.sample_size as f64 - n as f64,
            tolerance: 0.0,
            pass: stats.sample_size == n,
        });
    }
    for (field, computed, reference, tolerance) in [
        ("mean", stats.mean, row.mean, tol.mean),
        ("sd", stats.sd, row.sd, tol.sd),
        ("skewness", stats.skewness, row.skewness, tol.skewness),
    ] {
        let delta = computed - reference;
        checks.push(FieldCheck {
            field,
            computed,
            reference,
            delta,
            tolerance,
            pass: delta.abs() <= tolerance,
        });
    }
    Ok(ComparisonReport {
        table: table.name,
        comparison: comparison.to_string(),
        checks,
    })
}
