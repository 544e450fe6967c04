//! Image to 4096-dimensional feature vectors.
//!
//! Two backends share one contract: [`reference_extract`] is a deterministic
//! hand-built descriptor that needs no model file, and the `neural` backend
//! evaluates a pretrained network from an ONNX file and reads the
//! post-activation output of its first 4096-wide fully-connected layer.

mod reference;
mod resize;
mod store;

#[cfg(feature = "neural")]
mod neural;

use std::path::PathBuf;
use std::str::FromStr;

use ndarray::Array3;
use thiserror::Error;

use crate::image::ImageBuffer;

pub use reference::{reference_descriptor, reference_extract, DESCRIPTOR_LEN, GRID, HIST_BINS};
pub use store::{read_feature_store, write_feature_store, LabeledFeature, StoreError};

#[cfg(feature = "neural")]
pub use neural::{InputLayout, NeuralExtractor};

pub const FEATURE_DIM: usize = 4096;
pub const INPUT_SIZE: usize = 224;

/// Canonical VGG training-set channel means, RGB order, 0..255 scale.
pub const VGG_MEANS_RGB: [f64; 3] = [123.68, 116.779, 103.939];

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("image has a zero dimension")]
    ZeroDimensionImage,
    #[error("feature vector {0:?} is all zero")]
    ZeroVector(String),
    #[error("feature vector {id:?}: {reason}")]
    InvalidVector { id: String, reason: String },
    #[error("failed to load model {path}: {reason}")]
    ModelLoadFailure { path: PathBuf, reason: String },
    #[error("model feature layer is {got} wide, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("inference failed: {0}")]
    Inference(String),
    #[error("unknown backend {0:?} (expected reference or neural:PATH)")]
    UnknownBackend(String),
}

impl FeatureError {
    pub fn kind(&self) -> &'static str {
        match self {
            FeatureError::ZeroDimensionImage => "ZeroDimensionImage",
            FeatureError::ZeroVector(_) => "ZeroVector",
            FeatureError::InvalidVector { .. } => "InvalidVector",
            FeatureError::ModelLoadFailure { .. } => "ModelLoadFailure",
            FeatureError::DimensionMismatch { .. } => "DimensionMismatch",
            FeatureError::Inference(_) => "Inference",
            FeatureError::UnknownBackend(_) => "UnknownBackend",
        }
    }
}

/// A 4096-component embedding tied to an image record id.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    id: String,
    values: Vec<f32>,
}

impl FeatureVector {
    /// Validates length, finiteness and that at least one component is nonzero.
    pub fn new(id: impl Into<String>, values: Vec<f32>) -> Result<Self, FeatureError> {
        let id = id.into();
        if values.len() != FEATURE_DIM {
            return Err(FeatureError::InvalidVector {
                id,
                reason: format!("expected {FEATURE_DIM} components, got {}", values.len()),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(FeatureError::InvalidVector {
                id,
                reason: format!("component {i} is not finite"),
            });
        }
        if values.iter().all(|&v| v == 0.0) {
            return Err(FeatureError::ZeroVector(id));
        }
        Ok(Self { id, values })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    pub fn into_parts(self) -> (String, Vec<f32>) {
        (self.id, self.values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChannelOrder {
    #[default]
    Rgb,
    Bgr,
}

/// Input normalisation for the neural backend. `means` are always listed
/// in RGB order and follow the channels when they are reordered.
#[derive(Debug, Clone, PartialEq)]
pub struct PreprocessConfig {
    pub means: [f64; 3],
    pub channel_order: ChannelOrder,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self {
            means: VGG_MEANS_RGB,
            channel_order: ChannelOrder::Rgb,
        }
    }
}

/// Bilinear resize to 224x224, grayscale replicated to three channels, then
/// per-channel mean subtraction. Output is height x width x channel.
pub fn preprocess(img: &ImageBuffer, config: &PreprocessConfig) -> Result<Array3<f32>, FeatureError> {
    if img.is_empty() {
        return Err(FeatureError::ZeroDimensionImage);
    }
    let src: Vec<f64> = img.samples().iter().map(|&s| s as f64).collect();
    let resized = resize::bilinear(&src, img.width(), img.height(), img.channels(), INPUT_SIZE, INPUT_SIZE);
    let ch = img.channels();
    let order: [usize; 3] = match config.channel_order {
        ChannelOrder::Rgb => [0, 1, 2],
        ChannelOrder::Bgr => [2, 1, 0],
    };
    Ok(Array3::from_shape_fn((INPUT_SIZE, INPUT_SIZE, 3), |(y, x, c)| {
        let base = (y * INPUT_SIZE + x) * ch;
        let v = if ch == 1 {
            resized[base]
        } else {
            resized[base + order[c]]
        };
        (v - config.means[order[c]]) as f32
    }))
}

/// Feature extractor selection.
pub enum ExtractorBackend {
    Reference,
    #[cfg(feature = "neural")]
    Neural(NeuralExtractor),
}

impl ExtractorBackend {
    /// Parses `reference` or `neural:PATH`, loading the model for the latter.
    pub fn from_spec(spec: &str, preprocess: PreprocessConfig) -> Result<Self, FeatureError> {
        match spec.parse::<BackendSpec>()? {
            BackendSpec::Reference => Ok(ExtractorBackend::Reference),
            #[cfg(feature = "neural")]
            BackendSpec::Neural(path) => Ok(ExtractorBackend::Neural(NeuralExtractor::load(
                &path, preprocess, None,
            )?)),
            #[cfg(not(feature = "neural"))]
            BackendSpec::Neural(path) => {
                let _ = preprocess;
                Err(FeatureError::ModelLoadFailure {
                    path,
                    reason: "built without the `neural` feature".into(),
                })
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExtractorBackend::Reference => "reference",
            #[cfg(feature = "neural")]
            ExtractorBackend::Neural(_) => "neural",
        }
    }

    pub fn extract(&self, id: &str, img: &ImageBuffer) -> Result<FeatureVector, FeatureError> {
        match self {
            ExtractorBackend::Reference => reference_extract(id, img),
            #[cfg(feature = "neural")]
            ExtractorBackend::Neural(n) => n.extract(id, img),
        }
    }
}

/// Backend selector before any model is loaded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BackendSpec {
    Reference,
    Neural(PathBuf),
}

impl FromStr for BackendSpec {
    type Err = FeatureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "reference" {
            return Ok(BackendSpec::Reference);
        }
        match s.strip_prefix("neural:") {
            Some(path) if !path.is_empty() => Ok(BackendSpec::Neural(PathBuf::from(path))),
            _ => Err(FeatureError::UnknownBackend(s.to_string())),
        }
    }
}
