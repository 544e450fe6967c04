//! Measures how similar augmented and synthetic images are to the real
//! images they stand in for, and plans reproducible training experiments
//! that mix them in.
//!
//! The stages, each usable on its own:
//!
//! - [`transforms`]: rotate 90 degrees clockwise, horizontal flip, contrast enhancement.
//! - [`features`]: 4096-dim feature vectors (a deterministic reference
//!   descriptor, or an ONNX model with the `neural` feature) and the
//!   binary feature store.
//! - [`similarity`]: class-stratified pairs, cosine scores, distribution
//!   statistics and histograms.
//! - [`planner`]: seeded train/test split, nested augmentation injection,
//!   leakage checks, manifest emission.
//! - [`report`]: stats CSV, histogram JSON, and comparison with the
//!   bundled reference tables.
//! - [`cli`]: the `augscope` binary.
//!
//! Runnable walkthroughs live in `examples/`: `augment_images`,
//! `extract_features`, `similarity_distributions`, `plan_experiment`,
//! `compare_reference` and `flip_vs_rotate`.

pub mod cli;
pub mod features;
pub mod image;
pub mod manifest;
pub mod pipeline;
pub mod planner;
pub mod report;
pub mod similarity;
pub mod transforms;
