//! The three deterministic augmentation techniques and their manifest lifting.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::image::{load_image, ImageBuffer, ImageError};
use crate::manifest::{ImageRecord, Manifest, ManifestError, Source};

pub const DEFAULT_CONTRAST_FACTOR: f64 = 1.5;

#[derive(Debug, Error)]
pub enum TransformError {
    #[error("contrast factor must be positive and finite, got {0}")]
    NonPositiveFactor(f64),
    #[error("record {id:?}: {source}")]
    Record {
        id: String,
        #[source]
        source: ImageError,
    },
    #[error("cannot create output directory {path}: {source}")]
    OutputDir {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Manifest(#[from] ManifestError),
}

impl TransformError {
    pub fn kind(&self) -> &'static str {
        match self {
            TransformError::NonPositiveFactor(_) => "NonPositiveFactor",
            TransformError::Record { source, .. } => source.kind(),
            TransformError::OutputDir { .. } => "IoError",
            TransformError::Manifest(_) => "ManifestError",
        }
    }
}

/// One augmentation technique. Contrast carries its factor; the
/// constructor guarantees it is positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AugmentationTechnique {
    Rotate90Cw,
    HorizontalFlip,
    ContrastEnhance { factor: f64 },
}

impl AugmentationTechnique {
    pub fn contrast(factor: f64) -> Result<Self, TransformError> {
        check_factor(factor)?;
        Ok(AugmentationTechnique::ContrastEnhance { factor })
    }

    /// Short name used in filenames and on the command line.
    pub fn kind(&self) -> &'static str {
        match self {
            AugmentationTechnique::Rotate90Cw => "rot90",
            AugmentationTechnique::HorizontalFlip => "hflip",
            AugmentationTechnique::ContrastEnhance { .. } => "contrast",
        }
    }

    pub fn source(&self) -> Source {
        match self {
            AugmentationTechnique::Rotate90Cw => Source::AugRot90,
            AugmentationTechnique::HorizontalFlip => Source::AugHflip,
            AugmentationTechnique::ContrastEnhance { .. } => Source::AugContrast,
        }
    }

    pub fn apply(&self, img: &ImageBuffer) -> Result<ImageBuffer, TransformError> {
        Ok(match *self {
            AugmentationTechnique::Rotate90Cw => rotate90cw(img),
            AugmentationTechnique::HorizontalFlip => horizontal_flip(img),
            AugmentationTechnique::ContrastEnhance { factor } => contrast_enhance(img, factor)?,
        })
    }
}

impl fmt::Display for AugmentationTechnique {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind())
    }
}

impl FromStr for AugmentationTechnique {
    type Err = String;

    /// Parses `rot90`, `hflip` or `contrast` (the latter with the default factor).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rot90" => Ok(AugmentationTechnique::Rotate90Cw),
            "hflip" => Ok(AugmentationTechnique::HorizontalFlip),
            "contrast" => Ok(AugmentationTechnique::ContrastEnhance {
                factor: DEFAULT_CONTRAST_FACTOR,
            }),
            other => Err(format!("unknown technique {other:?} (expected rot90|hflip|contrast)")),
        }
    }
}

fn check_factor(factor: f64) -> Result<(), TransformError> {
    if factor.is_finite() && factor > 0.0 {
        Ok(())
    } else {
        Err(TransformError::NonPositiveFactor(factor))
    }
}

fn rebuild(width: usize, height: usize, channels: usize, samples: Vec<u8>) -> ImageBuffer {
    ImageBuffer::new(width, height, channels, samples).expect("transform preserves sample count")
}

/// Rotates 90 degrees clockwise: input (r, c) lands at output (c, H-1-r).
pub fn rotate90cw(img: &ImageBuffer) -> ImageBuffer {
    let (w, h, ch) = (img.width(), img.height(), img.channels());
    let src = img.samples();
    let mut out = vec![0u8; src.len()];
    // Output is h wide and w tall.
    for r in 0..h {
        for c in 0..w {
            let s = (r * w + c) * ch;
            let d = (c * h + (h - 1 - r)) * ch;
            out[d..d + ch].copy_from_slice(&src[s..s + ch]);
        }
    }
    rebuild(h, w, ch, out)
}

/// Mirrors columns: output (r, c) = input (r, W-1-c).
pub fn horizontal_flip(img: &ImageBuffer) -> ImageBuffer {
    let (w, ch) = (img.width(), img.channels());
    let mut out = Vec::with_capacity(img.samples().len());
    if w > 0 {
        for row in img.samples().chunks_exact(w * ch) {
            for px in row.chunks_exact(ch).rev() {
                out.extend_from_slice(px);
            }
        }
    }
    rebuild(w, img.height(), ch, out)
}

/// Mean-anchored linear stretch `clamp(round(mean + factor * (p - mean)))`,
/// with one global mean over every sample and rounding half away from zero.
pub fn contrast_enhance(img: &ImageBuffer, factor: f64) -> Result<ImageBuffer, TransformError> {
    check_factor(factor)?;
    let samples = img.samples();
    if samples.is_empty() {
        return Ok(img.clone());
    }
    let mean = samples.iter().map(|&p| p as f64).sum::<f64>() / samples.len() as f64;
    let out = samples
        .iter()
        .map(|&p| {
            let v = (mean + factor * (p as f64 - mean)).round();
            v.clamp(0.0, 255.0) as u8
        })
        .collect();
    Ok(rebuild(img.width(), img.height(), img.channels(), out))
}

/// Applies `technique` to every record's image and writes
/// `<origin_id>_<kind>.png` into `out_dir`. The returned manifest keeps
/// input order and labels; ids are `<origin_id>_<kind>`.
pub fn augment_manifest(
    manifest: &Manifest,
    technique: AugmentationTechnique,
    out_dir: &Path,
) -> Result<Manifest, TransformError> {
    if let AugmentationTechnique::ContrastEnhance { factor } = technique {
        check_factor(factor)?;
    }
    if manifest.is_empty() {
        return Ok(Manifest::default());
    }
    std::fs::create_dir_all(out_dir).map_err(|source| TransformError::OutputDir {
        path: out_dir.to_path_buf(),
        source,
    })?;

    let kind = technique.kind();
    let records = manifest
        .records()
        .par_iter()
        .map(|rec| {
            let tag = |source| TransformError::Record {
                id: rec.id.clone(),
                source,
            };
            let img = load_image(&rec.path).map_err(tag)?;
            let out = technique.apply(&img)?;
            let file = out_dir.join(format!("{}_{kind}.png", rec.id));
            out.save_png(&file).map_err(tag)?;
            Ok(ImageRecord {
                id: format!("{}_{kind}", rec.id),
                path: file,
                label: rec.label,
                source: technique.source(),
                origin_id: Some(rec.id.clone()),
            })
        })
        .collect::<Result<Vec<_>, TransformError>>()?;
    Ok(Manifest::new(records)?)
}
