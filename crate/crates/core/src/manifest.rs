//! Dataset manifests: one JSON object per line with keys
//! `id`, `path`, `label`, `source`, `origin_id`.

use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {reason}")]
    Parse { path: PathBuf, line: usize, reason: String },
    #[error("duplicate record id {0:?}")]
    DuplicateId(String),
    #[error("record {id:?}: {reason}")]
    Lineage { id: String, reason: String },
}

impl ManifestError {
    pub fn kind(&self) -> &'static str {
        match self {
            ManifestError::Io { .. } => "IoError",
            ManifestError::Parse { .. } => "ParseError",
            ManifestError::DuplicateId(_) => "DuplicateId",
            ManifestError::Lineage { .. } => "LineageError",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Blood,
    NoBlood,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Blood, Label::NoBlood];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Blood => "blood",
            Label::NoBlood => "no_blood",
        }
    }

    /// Byte used by the feature store: 0 = no_blood, 1 = blood.
    pub fn to_byte(self) -> u8 {
        match self {
            Label::NoBlood => 0,
            Label::Blood => 1,
        }
    }

    pub fn from_byte(b: u8) -> Option<Label> {
        match b {
            0 => Some(Label::NoBlood),
            1 => Some(Label::Blood),
            _ => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where a record came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Source {
    #[serde(rename = "real")]
    Real,
    #[serde(rename = "syn_b1")]
    SynB1,
    #[serde(rename = "syn_b2")]
    SynB2,
    #[serde(rename = "syn_b3")]
    SynB3,
    #[serde(rename = "aug_rot90")]
    AugRot90,
    #[serde(rename = "aug_hflip")]
    AugHflip,
    #[serde(rename = "aug_contrast")]
    AugContrast,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Real => "real",
            Source::SynB1 => "syn_b1",
            Source::SynB2 => "syn_b2",
            Source::SynB3 => "syn_b3",
            Source::AugRot90 => "aug_rot90",
            Source::AugHflip => "aug_hflip",
            Source::AugContrast => "aug_contrast",
        }
    }

    pub fn is_augmented(self) -> bool {
        matches!(self, Source::AugRot90 | Source::AugHflip | Source::AugContrast)
    }

    pub fn is_synthetic(self) -> bool {
        matches!(self, Source::SynB1 | Source::SynB2 | Source::SynB3)
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ImageRecord {
    pub id: String,
    pub path: PathBuf,
    pub label: Label,
    pub source: Source,
    pub origin_id: Option<String>,
}

impl ImageRecord {
    pub fn new(id: impl Into<String>, path: impl Into<PathBuf>, label: Label, source: Source) -> Self {
        Self {
            id: id.into(),
            path: path.into(),
            label,
            source,
            origin_id: None,
        }
    }

    /// Checks that `origin_id` is present exactly when the source is an augmentation.
    pub fn check_lineage(&self) -> Result<(), ManifestError> {
        match (self.source.is_augmented(), self.origin_id.is_some()) {
            (true, false) => Err(ManifestError::Lineage {
                id: self.id.clone(),
                reason: format!("source {} requires origin_id", self.source),
            }),
            (false, true) => Err(ManifestError::Lineage {
                id: self.id.clone(),
                reason: format!("source {} must not carry origin_id", self.source),
            }),
            _ => Ok(()),
        }
    }
}

/// An ordered list of records with unique ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Manifest {
    records: Vec<ImageRecord>,
}

impl Manifest {
    pub fn new(records: Vec<ImageRecord>) -> Result<Self, ManifestError> {
        let mut seen = HashSet::with_capacity(records.len());
        for r in &records {
            if !seen.insert(r.id.as_str()) {
                return Err(ManifestError::DuplicateId(r.id.clone()));
            }
            r.check_lineage()?;
        }
        Ok(Self { records })
    }

    pub fn records(&self) -> &[ImageRecord] {
        &self.records
    }

    pub fn into_records(self) -> Vec<ImageRecord> {
        self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ImageRecord> {
        self.records.iter()
    }

    pub fn ids(&self) -> HashSet<&str> {
        self.records.iter().map(|r| r.id.as_str()).collect()
    }

    pub fn count_label(&self, label: Label) -> usize {
        self.records.iter().filter(|r| r.label == label).count()
    }

    /// Rewrites relative record paths as `base/path`.
    pub fn resolve_relative_to(mut self, base: &Path) -> Self {
        for r in &mut self.records {
            if r.path.is_relative() {
                r.path = base.join(&r.path);
            }
        }
        self
    }

    /// JSON Lines encoding, one record per line, trailing newline after each.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out
    }

    pub fn write_jsonl(&self, path: &Path) -> Result<(), ManifestError> {
        let io_err = |source| ManifestError::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut f = std::fs::File::create(path).map_err(io_err)?;
        f.write_all(self.to_jsonl().as_bytes()).map_err(io_err)?;
        Ok(())
    }

    pub fn read_jsonl(path: &Path) -> Result<Self, ManifestError> {
        let io_err = |source| ManifestError::Io {
            path: path.to_path_buf(),
            source,
        };
        let f = std::fs::File::open(path).map_err(io_err)?;
        let mut records = Vec::new();
        for (i, line) in BufReader::new(f).lines().enumerate() {
            let line = line.map_err(io_err)?;
            if line.trim().is_empty() {
                continue;
            }
            let rec: ImageRecord = serde_json::from_str(&line).map_err(|e| ManifestError::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                reason: e.to_string(),
            })?;
            records.push(rec);
        }
        Self::new(records)
    }
}

impl<'a> IntoIterator for &'a Manifest {
    type Item = &'a ImageRecord;
    type IntoIter = std::slice::Iter<'a, ImageRecord>;

    fn into_iter(self) -> Self::IntoIter {
        self.records.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jsonl_shape() {
        let mut aug = ImageRecord::new("r1_hflip", "out/r1_hflip.png", Label::NoBlood, Source::AugHflip);
        aug.origin_id = Some("r1".into());
        let m = Manifest::new(vec![
            ImageRecord::new("r1", "img/r1.png", Label::Blood, Source::Real),
            aug,
        ])
        .unwrap();
        let text = m.to_jsonl();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(
            lines[0],
            r#"{"id":"r1","path":"img/r1.png","label":"blood","source":"real","origin_id":null}"#
        );
        assert_eq!(
            lines[1],
            r#"{"id":"r1_hflip","path":"out/r1_hflip.png","label":"no_blood","source":"aug_hflip","origin_id":"r1"}"#
        );
    }

    #[test]
    fn read_back() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.jsonl");
        let m = Manifest::new(vec![
            ImageRecord::new("a", "a.png", Label::Blood, Source::SynB2),
            ImageRecord::new("b", "b.png", Label::NoBlood, Source::Real),
        ])
        .unwrap();
        m.write_jsonl(&p).unwrap();
        assert_eq!(Manifest::read_jsonl(&p).unwrap(), m);
    }

    #[test]
    fn duplicate_ids_rejected() {
        let r = ImageRecord::new("a", "a.png", Label::Blood, Source::Real);
        assert!(matches!(
            Manifest::new(vec![r.clone(), r]),
            Err(ManifestError::DuplicateId(_))
        ));
    }

    #[test]
    fn lineage_rules() {
        let aug = ImageRecord::new("x", "x.png", Label::Blood, Source::AugRot90);
        assert!(aug.check_lineage().is_err());
        let mut real = ImageRecord::new("y", "y.png", Label::Blood, Source::Real);
        real.origin_id = Some("z".into());
        assert!(real.check_lineage().is_err());
    }

    #[test]
    fn bad_label_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.jsonl");
        std::fs::write(
            &p,
            "{\"id\":\"a\",\"path\":\"a\",\"label\":\"blood\",\"source\":\"real\",\"origin_id\":null}\n\
             {\"id\":\"b\",\"path\":\"b\",\"label\":\"maybe\",\"source\":\"real\",\"origin_id\":null}\n",
        )
        .unwrap();
        match Manifest::read_jsonl(&p) {
            Err(ManifestError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
