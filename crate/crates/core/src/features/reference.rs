//! The built-in reference descriptor: 64x64 grayscale, an 8x8 grid of block
//! means followed by 8-bin magnitude-weighted gradient-orientation histograms
//! per block, tiled to 4096 components and L2-normalised.

use std::f64::consts::PI;

use super::{resize, FeatureError, FeatureVector, FEATURE_DIM};
use crate::image::ImageBuffer;

const SIDE: usize = 64;
pub const GRID: usize = 8;
pub const HIST_BINS: usize = 8;
const BLOCK: usize = SIDE / GRID;
/// 64 block means + 64 * 8 histogram bins.
pub const DESCRIPTOR_LEN: usize = GRID * GRID * (1 + HIST_BINS);
const TILES: usize = FEATURE_DIM / DESCRIPTOR_LEN;

/// The full-precision descriptor, before narrowing to `f32`.
pub fn reference_descriptor(img: &ImageBuffer) -> Result<Vec<f64>, FeatureError> {
    if img.is_empty() {
        return Err(FeatureError::ZeroDimensionImage);
    }
    let gray = luma(img);
    let small = resize::bilinear(&gray, img.width(), img.height(), 1, SIDE, SIDE);
    let at = |y: usize, x: usize| small[y * SIDE + x] / 255.0;

    let mut desc = vec![0.0; DESCRIPTOR_LEN];
    let (means, hists) = desc.split_at_mut(GRID * GRID);
    for by in 0..GRID {
        for bx in 0..GRID {
            let cell = by * GRID + bx;
            let mut sum = 0.0;
            for y in by * BLOCK..(by + 1) * BLOCK {
                for x in bx * BLOCK..(bx + 1) * BLOCK {
                    sum += at(y, x);
                    // central differences, borders replicated
                    let gx = at(y, (x + 1).min(SIDE - 1)) - at(y, x.saturating_sub(1));
                    let gy = at((y + 1).min(SIDE - 1), x) - at(y.saturating_sub(1), x);
                    let mag = gx.hypot(gy);
                    if mag > 0.0 {
                        hists[cell * HIST_BINS + orientation_bin(gy.atan2(gx))] += mag;
                    }
                }
            }
            means[cell] = sum / (BLOCK * BLOCK) as f64;
        }
    }

    let mut out = Vec::with_capacity(FEATURE_DIM);
    for _ in 0..TILES {
        out.extend_from_slice(&desc);
    }
    out.resize(FEATURE_DIM, 0.0);

    let norm = out.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(FeatureError::ZeroVector(String::new()));
    }
    out.iter_mut().for_each(|v| *v /= norm);
    Ok(out)
}

/// [`reference_descriptor`] narrowed to a [`FeatureVector`].
pub fn reference_extract(id: &str, img: &ImageBuffer) -> Result<FeatureVector, FeatureError> {
    let desc = reference_descriptor(img).map_err(|e| match e {
        FeatureError::ZeroVector(_) => FeatureError::ZeroVector(id.to_string()),
        other => other,
    })?;
    FeatureVector::new(id, desc.into_iter().map(|v| v as f32).collect())
}

fn luma(img: &ImageBuffer) -> Vec<f64> {
    match img.channels() {
        1 => img.samples().iter().map(|&s| s as f64).collect(),
        _ => img
            .samples()
            .chunks_exact(3)
            .map(|p| 0.299 * p[0] as f64 + 0.587 * p[1] as f64 + 0.114 * p[2] as f64)
            .collect(),
    }
}

fn orientation_bin(angle: f64) -> usize {
    let t = (angle + PI) / (2.0 * PI) * HIST_BINS as f64;
    (t.floor() as usize).min(HIST_BINS - 1)
}
