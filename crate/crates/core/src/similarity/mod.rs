//! Class-stratified pair enumeration, cosine scoring, and score
//! distribution summaries.

mod cosine;
mod histogram;
mod pairs;
mod stats;

use thiserror::Error;

pub use cosine::{cosine_similarity, SimilarityScore};
pub use histogram::{histogram, HistogramBin};
pub use pairs::{enumerate_pairs, LabeledId, Pair, PairMode, PairSet};
pub use stats::{distribution_stats, DistributionStats, SKEWNESS_ESTIMATOR};

use std::collections::HashMap;

use crate::features::LabeledFeature;
use rayon::prelude::*;

#[derive(Debug, Error, PartialEq)]
pub enum SimilarityError {
    #[error("cosine similarity undefined for an all-zero vector")]
    ZeroVector,
    #[error("vectors differ in length: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("no records to pair: {0}")]
    EmptyClass(String),
    #[error("cross mode needs a second set")]
    MissingSecondSet,
    #[error("unknown id {0:?} in pair set")]
    UnknownId(String),
    #[error("need at least 3 scores, got {0}")]
    TooFewSamples(usize),
    #[error("bad histogram range or bin count: {0}")]
    BadRange(String),
}

impl SimilarityError {
    pub fn kind(&self) -> &'static str {
        match self {
            SimilarityError::ZeroVector => "ZeroVector",
            SimilarityError::LengthMismatch(..) => "LengthMismatch",
            SimilarityError::EmptyClass(_) => "EmptyClass",
            SimilarityError::MissingSecondSet => "MissingSecondSet",
            SimilarityError::UnknownId(_) => "UnknownId",
            SimilarityError::TooFewSamples(_) => "TooFewSamples",
            SimilarityError::BadRange(_) => "BadRange",
        }
    }
}

fn lookup<'a>(index: &HashMap<&str, &'a [f32]>, id: &str) -> Result<&'a [f32], SimilarityError> {
    index
        .get(id)
        .copied()
        .ok_or_else(|| SimilarityError::UnknownId(id.to_string()))
}

/// Scores every pair in order. Ids are looked up first in `store_a`, then
/// in `store_b` (when the two sets come from different stores).
pub fn score_pairs(
    pairs: &PairSet,
    store_a: &[LabeledFeature],
    store_b: Option<&[LabeledFeature]>,
) -> Result<Vec<SimilarityScore>, SimilarityError> {
    let index_a: HashMap<&str, &[f32]> = store_a.iter().map(|r| (r.id(), r.vector.values())).collect();
    let index_b: HashMap<&str, &[f32]> = store_b
        .unwrap_or(store_a)
        .iter()
        .map(|r| (r.id(), r.vector.values()))
        .collect();
    pairs
        .pairs()
        .par_iter()
        .map(|p| {
            let a = lookup(&index_a, &p.a)?;
            let b = lookup(&index_b, &p.b)?;
            cosine_similarity(a, b)
        })
        .collect()
}
