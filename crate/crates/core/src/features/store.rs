//! Binary feature store.
//!
//! ```text
//! "AUGF" | version u32 LE (1) | count u32 LE | dim u32 LE (4096)
//! per record: id len u16 LE | id UTF-8 | label u8 | dim x f32 LE
//! ```

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::{FeatureError, FeatureVector, FEATURE_DIM};
use crate::manifest::Label;

const MAGIC: &[u8; 4] = b"AUGF";
const VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("bad magic: not a feature store")]
    BadMagic,
    #[error("unsupported store version {0}")]
    VersionMismatch(u32),
    #[error("store truncated: {0}")]
    TruncatedFile(String),
    #[error("store dimension {0} is not 4096")]
    BadDimension(u32),
    #[error("record {index}: {reason}")]
    BadRecord { index: usize, reason: String },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl StoreError {
    pub fn kind(&self) -> &'static str {
        match self {
            StoreError::BadMagic => "BadMagic",
            StoreError::VersionMismatch(_) => "VersionMismatch",
            StoreError::TruncatedFile(_) => "TruncatedFile",
            StoreError::BadDimension(_) => "BadDimension",
            StoreError::BadRecord { .. } => "BadRecord",
            StoreError::Io { .. } => "IoError",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledFeature {
    pub vector: FeatureVector,
    pub label: Label,
}

impl LabeledFeature {
    pub fn id(&self) -> &str {
        self.vector.id()
    }
}

pub fn encode(records: &[LabeledFeature]) -> Result<Vec<u8>, StoreError> {
    let mut buf = Vec::with_capacity(16 + records.len() * (FEATURE_DIM * 4 + 32));
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(records.len() as u32).to_le_bytes());
    buf.extend_from_slice(&(FEATURE_DIM as u32).to_le_bytes());
    for (index, rec) in records.iter().enumerate() {
        let id = rec.id().as_bytes();
        let len = u16::try_from(id.len()).map_err(|_| StoreError::BadRecord {
            index,
            reason: format!("id is {} bytes, limit is {}", id.len(), u16::MAX),
        })?;
        buf.extend_from_slice(&len.to_le_bytes());
        buf.extend_from_slice(id);
        buf.push(rec.label.to_byte());
        for v in rec.vector.values() {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    Ok(buf)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8], StoreError> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| StoreError::TruncatedFile(format!("{what} at byte {} needs {n} bytes", self.pos)))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self, what: &str) -> Result<u32, StoreError> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }
}

pub fn decode(bytes: &[u8]) -> Result<Vec<LabeledFeature>, StoreError> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(StoreError::BadMagic);
    }
    let mut cur = Cursor { bytes, pos: 4 };
    let version = cur.u32("version")?;
    if version != VERSION {
        return Err(StoreError::VersionMismatch(version));
    }
    let count = cur.u32("record count")? as usize;
    let dim = cur.u32("dimension")?;
    if dim as usize != FEATURE_DIM {
        return Err(StoreError::BadDimension(dim));
    }

    let mut out = Vec::with_capacity(count.min(1 << 16));
    for index in 0..count {
        let len = u16::from_le_bytes(cur.take(2, "id length")?.try_into().unwrap()) as usize;
        let id = std::str::from_utf8(cur.take(len, "id")?).map_err(|e| StoreError::BadRecord {
            index,
            reason: e.to_string(),
        })?;
        let label_byte = cur.take(1, "label")?[0];
        let label = Label::from_byte(label_byte).ok_or_else(|| StoreError::BadRecord {
            index,
            reason: format!("label byte {label_byte}"),
        })?;
        let values = cur
            .take(FEATURE_DIM * 4, "vector")?
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let vector = FeatureVector::new(id, values).map_err(|e: FeatureError| StoreError::BadRecord {
            index,
            reason: e.to_string(),
        })?;
        out.push(LabeledFeature { vector, label });
    }
    if cur.pos != bytes.len() {
        return Err(StoreError::BadRecord {
            index: count,
            reason: format!("{} trailing bytes", bytes.len() - cur.pos),
        });
    }
    Ok(out)
}

pub fn write_feature_store(records: &[LabeledFeature], path: &Path) -> Result<(), StoreError> {
    let bytes = encode(records)?;
    let io = |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut f = std::fs::File::create(path).map_err(io)?;
    f.write_all(&bytes).map_err(io)?;
    Ok(())
}

pub fn read_feature_store(path: &Path) -> Result<Vec<LabeledFeature>, StoreError> {
    let io = |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .map_err(io)?
        .read_to_end(&mut bytes)
        .map_err(io)?;
    decode(&bytes)
}
