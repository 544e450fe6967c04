//! Multi-record stages built from the per-item operations: extracting a
//! whole manifest and summarising a comparison between two feature stores.

use rayon::prelude::*;
use thiserror::Error;

use crate::features::{ExtractorBackend, FeatureError, LabeledFeature};
use crate::image::{load_image, ImageError};
use crate::manifest::{Label, Manifest};
use crate::report::{HistogramReport, StatsRow, CLASS_POOLED};
use crate::similarity::{
    distribution_stats, enumerate_pairs, histogram, score_pairs, LabeledId, PairMode, PairSet, SimilarityError,
    SimilarityScore,
};

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("record {id:?}: {source}")]
    Image {
        id: String,
        #[source]
        source: ImageError,
    },
    #[error("record {id:?}: {source}")]
    Feature {
        id: String,
        #[source]
        source: FeatureError,
    },
}

impl ExtractError {
    pub fn kind(&self) -> &'static str {
        match self {
            ExtractError::Image { source, .. } => source.kind(),
            ExtractError::Feature { source, .. } => source.kind(),
        }
    }
}

/// Extracts every record in parallel; output order follows the manifest.
pub fn extract_manifest(backend: &ExtractorBackend, manifest: &Manifest) -> Result<Vec<LabeledFeature>, ExtractError> {
    manifest
        .records()
        .par_iter()
        .map(|r| {
            let img = load_image(&r.path).map_err(|source| ExtractError::Image {
                id: r.id.clone(),
                source,
            })?;
            let vector = backend.extract(&r.id, &img).map_err(|source| ExtractError::Feature {
                id: r.id.clone(),
                source,
            })?;
            Ok(LabeledFeature { vector, label: r.label })
        })
        .collect()
}

pub fn labeled_ids(store: &[LabeledFeature]) -> Vec<LabeledId> {
    store.iter().map(|r| LabeledId::new(r.id(), r.label)).collect()
}

/// Everything one comparison produces.
#[derive(Debug, Clone)]
pub struct ComparisonOutput {
    pub pairs: PairSet,
    pub scores: Vec<SimilarityScore>,
    /// Per-class rows (classes with fewer than three scores are left out),
    /// then the pooled row.
    pub rows: Vec<StatsRow>,
    pub histogram: HistogramReport,
}

/// Pairs, scores and summarises two stores (or one, in within mode).
pub fn compare_stores(
    comparison: &str,
    mode: PairMode,
    store_a: &[LabeledFeature],
    store_b: Option<&[LabeledFeature]>,
    bins: usize,
    range: (f64, f64),
) -> Result<ComparisonOutput, SimilarityError> {
    let ids_a = labeled_ids(store_a);
    let ids_b = store_b.map(labeled_ids);
    let pairs = enumerate_pairs(mode, &ids_a, ids_b.as_deref())?;
    let scores = score_pairs(&pairs, store_a, store_b)?;

    let mut rows = Vec::with_capacity(3);
    for label in Label::ALL {
        let class_scores: Vec<SimilarityScore> = pairs
            .pairs()
            .iter()
            .zip(&scores)
            .filter(|(p, _)| p.class == label)
            .map(|(_, s)| *s)
            .collect();
        if class_scores.len() >= 3 {
            let stats = distribution_stats(&class_scores)?;
            rows.push(StatsRow::new(comparison, mode.as_str(), label.as_str(), &stats));
        }
    }
    let pooled = distribution_stats(&scores)?;
    rows.push(StatsRow::new(comparison, mode.as_str(), CLASS_POOLED, &pooled));

    let histogram = HistogramReport {
        comparison: comparison.to_string(),
        bins: histogram(&scores, bins, range)?,
    };
    Ok(ComparisonOutput {
        pairs,
        scores,
        rows,
        histogram,
    })
}
