use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{ExperimentPlan, PlanError};
use crate::manifest::{Label, Manifest};

/// File-name tag for a proportion: `0.1` -> `10`, `0.125` -> `12_5`.
pub fn proportion_label(p: f64) -> String {
    let pct = p * 100.0;
    if (pct - pct.round()).abs() < 1e-9 {
        format!("{}", pct.round() as u64)
    } else {
        let s = format!("{:.6}", pct);
        s.trim_end_matches('0').replace('.', "_")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetSummary {
    pub file: String,
    pub count: usize,
    pub sha256: String,
    pub labels: BTreeMap<String, usize>,
    pub sources: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainSetSummary {
    pub proportion: f64,
    pub added: usize,
    #[serde(flatten)]
    pub set: SetSummary,
}

/// Contents of `plan.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanSummary {
    pub seed: u64,
    pub prng: String,
    pub rounding: String,
    pub train_count: usize,
    pub test_count: usize,
    pub test_mode: String,
    pub proportions: Vec<f64>,
    pub train_real: BTreeMap<String, usize>,
    pub pool_eligible: usize,
    pub test: SetSummary,
    pub train_sets: Vec<TrainSetSummary>,
}

fn summarize(file: &str, manifest: &Manifest, bytes: &[u8]) -> SetSummary {
    let mut labels = BTreeMap::new();
    let mut sources = BTreeMap::new();
    for r in manifest {
        *labels.entry(r.label.to_string()).or_insert(0) += 1;
        *sources.entry(r.source.to_string()).or_insert(0) += 1;
    }
    SetSummary {
        file: file.to_string(),
        count: manifest.len(),
        sha256: hex::encode(Sha256::digest(bytes)),
        labels,
        sources,
    }
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), PlanError> {
    std::fs::write(path, bytes).map_err(|e| PlanError::Io {
        path: path.display().to_string(),
        reason: e.to_string(),
    })
}

/// Writes `train_p<NN>.jsonl` per proportion, `test.jsonl` and `plan.json`.
/// Output bytes depend only on the plan.
pub fn emit_plan(plan: &ExperimentPlan, out_dir: &Path) -> Result<PlanSummary, PlanError> {
    std::fs::create_dir_all(out_dir).map_err(|e| PlanError::Io {
        path: out_dir.display().to_string(),
        reason: e.to_string(),
    })?;

    let test_bytes = plan.test.to_jsonl();
    write(&out_dir.join("test.jsonl"), test_bytes.as_bytes())?;
    let test = summarize("test.jsonl", &plan.test, test_bytes.as_bytes());

    let mut train_sets = Vec::with_capacity(plan.train_sets.len());
    for (p, set) in &plan.train_sets {
        let file = format!("train_p{}.jsonl", proportion_label(*p));
        let bytes = set.to_jsonl();
        write(&out_dir.join(&file), bytes.as_bytes())?;
        train_sets.push(TrainSetSummary {
            proportion: *p,
            added: set.len() - plan.train.len(),
            set: summarize(&file, set, bytes.as_bytes()),
        });
    }

    let summary = PlanSummary {
        seed: plan.config.seed,
        prng: "splitmix64".into(),
        rounding: "half_away_from_zero".into(),
        train_count: plan.config.train_count,
        test_count: plan.config.test_count,
        test_mode: plan.config.test_mode.to_string(),
        proportions: plan.config.proportions.clone(),
        train_real: Label::ALL
            .iter()
            .map(|&l| (l.to_string(), plan.train.count_label(l)))
            .collect(),
        pool_eligible: plan.augmentation_source.len(),
        test,
        train_sets,
    };
    let mut json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    json.push('\n');
    write(&out_dir.join("plan.json"), json.as_bytes())?;
    Ok(summary)
}
