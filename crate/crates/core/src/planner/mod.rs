//! Seeded, label-stratified train/test splits and augmentation-injection
//! schedules.
//!
//! All randomness comes from [`SplitMix64`] streams derived from the plan
//! seed, and all rounding is half away from zero, so a seed reproduces the
//! same manifests byte for byte. Injection is nested: for one seed the
//! records added at proportion `p` are a subset of those added at any
//! larger proportion.

mod emit;
pub mod rng;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use emit::{emit_plan, proportion_label, PlanSummary, SetSummary};
pub use rng::SplitMix64;

use crate::manifest::{ImageRecord, Label, Manifest, ManifestError};
use rng::apportion;

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("insufficient records for {what}: need {needed}, have {available}")]
    InsufficientRecords {
        what: String,
        needed: usize,
        available: usize,
    },
    #[error(
        "pool exhausted at proportion {proportion}: need {needed} eligible records, have {available} (short by {})",
        needed - available
    )]
    PoolExhausted {
        proportion: f64,
        needed: usize,
        available: usize,
    },
    #[error("leakage: record {id:?} {reason}")]
    LeakageDetected { id: String, reason: String },
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("i/o error on {path}: {reason}")]
    Io { path: String, reason: String },
    #[error(transparent)]
    Manifest(#[from] ManifestError),
}

impl PlanError {
    pub fn kind(&self) -> &'static str {
        match self {
            PlanError::InsufficientRecords { .. } => "InsufficientRecords",
            PlanError::PoolExhausted { .. } => "PoolExhausted",
            PlanError::LeakageDetected { .. } => "LeakageDetected",
            PlanError::InvalidSchedule(_) => "InvalidSchedule",
            PlanError::Io { .. } => "IoError",
            PlanError::Manifest(_) => "ManifestError",
        }
    }
}

/// Composition of the evaluation set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestMode {
    /// The real test split as drawn.
    RealOnly,
    /// `real` records from the real test split plus `synthetic` synthetic records.
    Mixed { real: usize, synthetic: usize },
}

impl fmt::Display for TestMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestMode::RealOnly => f.write_str("real"),
            TestMode::Mixed { real, synthetic } => write!(f, "mixed:{real},{synthetic}"),
        }
    }
}

impl FromStr for TestMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "real" {
            return Ok(TestMode::RealOnly);
        }
        let bad = || format!("bad test mode {s:?} (expected real or mixed:R,S)");
        let counts = s.strip_prefix("mixed:").ok_or_else(bad)?;
        let (r, syn) = counts.split_once(',').ok_or_else(bad)?;
        Ok(TestMode::Mixed {
            real: r.trim().parse().map_err(|_| bad())?,
            synthetic: syn.trim().parse().map_err(|_| bad())?,
        })
    }
}

/// Checks a schedule is strictly increasing with every entry in (0, 1].
pub fn validate_schedule(proportions: &[f64]) -> Result<(), PlanError> {
    if proportions.is_empty() {
        return Err(PlanError::InvalidSchedule("no proportions".into()));
    }
    for &p in proportions {
        if !(p.is_finite() && p > 0.0 && p <= 1.0) {
            return Err(PlanError::InvalidSchedule(format!("{p} is outside (0, 1]")));
        }
    }
    if proportions.windows(2).any(|w| w[0] >= w[1]) {
        return Err(PlanError::InvalidSchedule("proportions must strictly increase".into()));
    }
    let labels: HashSet<String> = proportions.iter().map(|&p| proportion_label(p)).collect();
    if labels.len() != proportions.len() {
        return Err(PlanError::InvalidSchedule(
            "proportions collide at percent resolution".into(),
        ));
    }
    Ok(())
}

/// Records grouped by label (in [`Label::ALL`] order), each group sorted by id.
fn by_class(records: &[ImageRecord]) -> [Vec<&ImageRecord>; 2] {
    let mut groups = [Vec::new(), Vec::new()];
    for r in records {
        let slot = Label::ALL.iter().position(|&l| l == r.label).unwrap();
        groups[slot].push(r);
    }
    for g in &mut groups {
        g.sort_by(|a, b| a.id.cmp(&b.id));
    }
    groups
}

fn sorted_manifest(mut records: Vec<ImageRecord>) -> Result<Manifest, PlanError> {
    records.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(Manifest::new(records)?)
}

/// Draws `count` records, label-stratified by the pool's own class mix.
fn stratified_sample(records: &[ImageRecord], count: usize, rng: &mut SplitMix64) -> Option<Vec<ImageRecord>> {
    let mut groups = by_class(records);
    let sizes: Vec<usize> = groups.iter().map(Vec::len).collect();
    let quotas = apportion(count, &sizes, &sizes)?;
    let mut out = Vec::with_capacity(count);
    for (group, q) in groups.iter_mut().zip(quotas) {
        rng.shuffle(group);
        out.extend(group[..q].iter().map(|r| (*r).clone()));
    }
    Some(out)
}

/// Splits `manifest` into disjoint train and test sets of exactly the
/// requested sizes, each label-stratified by class prevalence.
///
/// Per-class totals are apportioned for `train_count + test_count` first,
/// then the train share of each class is apportioned within those totals,
/// so a class is never over-drawn.
pub fn split_dataset(
    manifest: &Manifest,
    seed: u64,
    train_count: usize,
    test_count: usize,
) -> Result<(Manifest, Manifest), PlanError> {
    let needed = train_count + test_count;
    let insufficient = || PlanError::InsufficientRecords {
        what: "train/test split".into(),
        needed,
        available: manifest.len(),
    };
    if needed > manifest.len() {
        return Err(insufficient());
    }
    let mut groups = by_class(manifest.records());
    let sizes: Vec<usize> = groups.iter().map(Vec::len).collect();
    let selected = apportion(needed, &sizes, &sizes).ok_or_else(insufficient)?;
    let train_quota = apportion(train_count, &sizes, &selected).ok_or_else(insufficient)?;

    let mut rng = SplitMix64::stream(seed, "split");
    let (mut train, mut test) = (Vec::new(), Vec::new());
    for ((group, sel), tr) in groups.iter_mut().zip(&selected).zip(&train_quota) {
        rng.shuffle(group);
        train.extend(group[..*tr].iter().map(|r| (*r).clone()));
        test.extend(group[*tr..*sel].iter().map(|r| (*r).clone()));
    }
    Ok((sorted_manifest(train)?, sorted_manifest(test)?))
}

/// `round(proportion * base)` with halves rounded away from zero.
pub fn injection_count(proportion: f64, base: usize) -> usize {
    (proportion * base as f64).round() as usize
}

/// Fails if any pool record is, or derives from, a test record.
pub fn check_pool_leakage(pool: &Manifest, test: &Manifest) -> Result<(), PlanError> {
    let test_ids = test.ids();
    for r in pool {
        if test_ids.contains(r.id.as_str()) {
            return Err(PlanError::LeakageDetected {
                id: r.id.clone(),
                reason: "is itself in the test set".into(),
            });
        }
        if let Some(origin) = &r.origin_id {
            if test_ids.contains(origin.as_str()) {
                return Err(PlanError::LeakageDetected {
                    id: r.id.clone(),
                    reason: format!("derives from test record {origin:?}"),
                });
            }
        }
    }
    Ok(())
}

/// Fails if `train` and `test` share an id, or if either side holds an
/// augmented copy of a record on the other side (or a sibling copy of the
/// same origin).
pub fn check_split_leakage(train: &Manifest, test: &Manifest) -> Result<(), PlanError> {
    let lineage = |r: &ImageRecord| r.origin_id.clone().unwrap_or_else(|| r.id.clone());
    let test_ids = test.ids();
    let test_roots: HashSet<String> = test.iter().map(lineage).collect();
    for r in train {
        if test_ids.contains(r.id.as_str()) {
            return Err(PlanError::LeakageDetected {
                id: r.id.clone(),
                reason: "appears in both train and test".into(),
            });
        }
        let root = lineage(r);
        if test_roots.contains(&root) {
            return Err(PlanError::LeakageDetected {
                id: r.id.clone(),
                reason: format!("shares lineage {root:?} with the test set"),
            });
        }
    }
    Ok(())
}

/// Adds `round(proportion * |train|)` pool records to `train`, sampled
/// without replacement and stratified by the pool's class mix.
///
/// The pool must already be free of test-derived records; any such record
/// is reported as [`PlanError::LeakageDetected`]. Draws are prefixes of one
/// seeded per-class shuffle, so schedules over the same seed are nested.
pub fn inject_augmented(
    train: &Manifest,
    test: &Manifest,
    pool: &Manifest,
    proportion: f64,
    seed: u64,
) -> Result<Manifest, PlanError> {
    validate_schedule(&[proportion])?;
    check_pool_leakage(pool, test)?;
    let needed = injection_count(proportion, train.len());
    if pool.len() < needed || pool.is_empty() {
        return Err(PlanError::PoolExhausted {
            proportion,
            needed: needed.max(1),
            available: pool.len(),
        });
    }
    let mut rng = SplitMix64::stream(seed, "inject");
    let added = stratified_sample(pool.records(), needed, &mut rng).ok_or(PlanError::PoolExhausted {
        proportion,
        needed,
        available: pool.len(),
    })?;
    let mut added = added;
    added.sort_by(|a, b| a.id.cmp(&b.id));
    let mut records = train.records().to_vec();
    records.extend(added);
    Ok(Manifest::new(records)?)
}

/// A label-stratified test set of `real_count` records from `real_pool`
/// and `synthetic_count` from `synthetic_pool`.
pub fn build_mixed_test(
    real_pool: &Manifest,
    synthetic_pool: &Manifest,
    real_count: usize,
    synthetic_count: usize,
    seed: u64,
) -> Result<Manifest, PlanError> {
    let short = |what: &str, needed: usize, available: usize| PlanError::InsufficientRecords {
        what: what.into(),
        needed,
        available,
    };
    if real_count > real_pool.len() {
        return Err(short("mixed test (real)", real_count, real_pool.len()));
    }
    if synthetic_count > synthetic_pool.len() {
        return Err(short("mixed test (synthetic)", synthetic_count, synthetic_pool.len()));
    }
    let mut rng = SplitMix64::stream(seed, "mixed-test-real");
    let mut records = stratified_sample(real_pool.records(), real_count, &mut rng)
        .ok_or_else(|| short("mixed test (real)", real_count, real_pool.len()))?;
    let mut rng = SplitMix64::stream(seed, "mixed-test-synthetic");
    records.extend(
        stratified_sample(synthetic_pool.records(), synthetic_count, &mut rng)
            .ok_or_else(|| short("mixed test (synthetic)", synthetic_count, synthetic_pool.len()))?,
    );
    sorted_manifest(records)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanConfig {
    pub seed: u64,
    pub train_count: usize,
    pub test_count: usize,
    pub proportions: Vec<f64>,
    pub test_mode: TestMode,
}

impl Default for PlanConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            train_count: 458,
            test_count: 200,
            proportions: vec![0.10, 0.25, 0.50, 0.75],
            test_mode: TestMode::RealOnly,
        }
    }
}

/// A complete experiment: the real training set, the evaluation set, the
/// eligible augmentation pool and one training manifest per proportion.
#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub config: PlanConfig,
    pub train: Manifest,
    pub test: Manifest,
    pub augmentation_source: Manifest,
    pub train_sets: Vec<(f64, Manifest)>,
}

/// Runs the split, builds the test set, filters the pool to records that
/// cannot leak into training, and injects every scheduled proportion.
///
/// For mixed test mode the synthetic records come from `synthetic` when
/// given, otherwise from the pool's synthetic-sourced records; whichever
/// are chosen for testing are removed from the pool.
pub fn build_plan(
    real: &Manifest,
    pool: &Manifest,
    synthetic: Option<&Manifest>,
    config: &PlanConfig,
) -> Result<ExperimentPlan, PlanError> {
    validate_schedule(&config.proportions)?;
    let (train, test_split) = split_dataset(real, config.seed, config.train_count, config.test_count)?;
    let test = match config.test_mode {
        TestMode::RealOnly => test_split,
        TestMode::Mixed {
            real,
            synthetic: syn_count,
        } => {
            let syn_source = match synthetic {
                Some(m) => m.clone(),
                None => Manifest::new(pool.iter().filter(|r| r.source.is_synthetic()).cloned().collect())?,
            };
            build_mixed_test(&test_split, &syn_source, real, syn_count, config.seed)?
        }
    };

    let test_ids = test.ids();
    let eligible = Manifest::new(
        pool.iter()
            .filter(|r| {
                !test_ids.contains(r.id.as_str()) && r.origin_id.as_deref().is_none_or(|o| !test_ids.contains(o))
            })
            .cloned()
            .collect(),
    )?;

    let mut train_sets = Vec::with_capacity(config.proportions.len());
    for &p in &config.proportions {
        let set = inject_augmented(&train, &test, &eligible, p, config.seed)?;
        check_split_leakage(&set, &test)?;
        train_sets.push((p, set));
    }
    Ok(ExperimentPlan {
        config: config.clone(),
        train,
        test,
        augmentation_source: eligible,
        train_sets,
    })
}
