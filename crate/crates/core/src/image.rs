//! Raw 8-bit rasters and PNG/JPEG decoding.

use std::path::{Path, PathBuf};

use image::{DynamicImage, ImageFormat};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImageError {
    #[error("missing file: {0}")]
    MissingFile(PathBuf),
    #[error("unsupported image format: {0}")]
    UnsupportedFormat(PathBuf),
    #[error("corrupt image {path}: {reason}")]
    CorruptImage { path: PathBuf, reason: String },
    #[error("invalid buffer: {0}")]
    InvalidBuffer(String),
    #[error("failed to write {path}: {reason}")]
    Write { path: PathBuf, reason: String },
}

impl ImageError {
    pub fn kind(&self) -> &'static str {
        match self {
            ImageError::MissingFile(_) => "MissingFile",
            ImageError::UnsupportedFormat(_) => "UnsupportedFormat",
            ImageError::CorruptImage { .. } => "CorruptImage",
            ImageError::InvalidBuffer(_) => "InvalidBuffer",
            ImageError::Write { .. } => "IoError",
        }
    }
}

/// A decoded raster: row-major, interleaved channels, one byte per sample.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ImageBuffer {
    width: usize,
    height: usize,
    channels: usize,
    samples: Vec<u8>,
}

impl ImageBuffer {
    /// Builds a buffer, checking `channels` is 1 or 3 and the sample count matches.
    pub fn new(width: usize, height: usize, channels: usize, samples: Vec<u8>) -> Result<Self, ImageError> {
        if channels != 1 && channels != 3 {
            return Err(ImageError::InvalidBuffer(format!(
                "channels must be 1 or 3, got {channels}"
            )));
        }
        let expected = width * height * channels;
        if samples.len() != expected {
            return Err(ImageError::InvalidBuffer(format!(
                "expected {expected} samples for {width}x{height}x{channels}, got {}",
                samples.len()
            )));
        }
        Ok(Self {
            width,
            height,
            channels,
            samples,
        })
    }

    pub fn gray(width: usize, height: usize, samples: Vec<u8>) -> Result<Self, ImageError> {
        Self::new(width, height, 1, samples)
    }

    pub fn rgb(width: usize, height: usize, samples: Vec<u8>) -> Result<Self, ImageError> {
        Self::new(width, height, 3, samples)
    }

    pub fn filled(width: usize, height: usize, channels: usize, value: u8) -> Result<Self, ImageError> {
        Self::new(width, height, channels, vec![value; width * height * channels])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    pub fn is_empty(&self) -> bool {
        self.width == 0 || self.height == 0
    }

    /// Samples of the pixel at (`row`, `col`).
    pub fn pixel(&self, row: usize, col: usize) -> &[u8] {
        let start = (row * self.width + col) * self.channels;
        &self.samples[start..start + self.channels]
    }

    /// Writes the buffer as an 8-bit PNG (gray or RGB).
    pub fn save_png(&self, path: &Path) -> Result<(), ImageError> {
        let color = if self.channels == 1 {
            image::ExtendedColorType::L8
        } else {
            image::ExtendedColorType::Rgb8
        };
        image::save_buffer_with_format(
            path,
            &self.samples,
            self.width as u32,
            self.height as u32,
            color,
            ImageFormat::Png,
        )
        .map_err(|e| ImageError::Write {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })
    }
}

/// Decodes a PNG or JPEG file. Grayscale sources yield one channel, color
/// sources three; alpha is dropped and 16-bit samples are narrowed to 8 bits.
pub fn load_image(path: &Path) -> Result<ImageBuffer, ImageError> {
    if !path.is_file() {
        return Err(ImageError::MissingFile(path.to_path_buf()));
    }
    let bytes = std::fs::read(path).map_err(|e| ImageError::CorruptImage {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;

    let format = match image::guess_format(&bytes) {
        Ok(f) => f,
        Err(_) => {
            // Unrecognised content: blame the file if its name promises a supported format.
            return match ImageFormat::from_path(path) {
                Ok(ImageFormat::Png | ImageFormat::Jpeg) => Err(ImageError::CorruptImage {
                    path: path.to_path_buf(),
                    reason: "content is not a PNG or JPEG stream".into(),
                }),
                _ => Err(ImageError::UnsupportedFormat(path.to_path_buf())),
            };
        }
    };
    if !matches!(format, ImageFormat::Png | ImageFormat::Jpeg) {
        return Err(ImageError::UnsupportedFormat(path.to_path_buf()));
    }

    let decoded = image::load_from_memory_with_format(&bytes, format).map_err(|e| ImageError::CorruptImage {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    Ok(from_dynamic(decoded))
}

fn from_dynamic(img: DynamicImage) -> ImageBuffer {
    let (width, height) = (img.width() as usize, img.height() as usize);
    if img.color().has_color() {
        let rgb = img.into_rgb8();
        ImageBuffer {
            width,
            height,
            channels: 3,
            samples: rgb.into_raw(),
        }
    } else {
        let luma = img.into_luma8();
        ImageBuffer {
            width,
            height,
            channels: 1,
            samples: luma.into_raw(),
        }
    }
}
