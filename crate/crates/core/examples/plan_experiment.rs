// A seeded experiment plan: 458/200 split of 658 real images, augmented
// records injected at 10/25/50/75 percent, and a mixed real+synthetic
// test set.
//
//     cargo run --example plan_experiment [OUT_DIR]

use std::error::Error;
use std::path::{Path, PathBuf};

use augscope::manifest::{ImageRecord, Label, Manifest, Source};
use augscope::planner::{build_plan, emit_plan, PlanConfig, TestMode};

fn label(i: usize) -> Label {
    if i.is_multiple_of(2) {
        Label::Blood
    } else {
        Label::NoBlood
    }
}

fn records() -> Result<(Manifest, Manifest, Manifest), Box<dyn Error>> {
    let real: Vec<ImageRecord> = (0..658)
        .map(|i| {
            ImageRecord::new(
                format!("us{i:04}"),
                format!("real/us{i:04}.png"),
                label(i),
                Source::Real,
            )
        })
        .collect();
    let pool = real
        .iter()
        .map(|r| ImageRecord {
            id: format!("{}_hflip", r.id),
            path: format!("aug/{}_hflip.png", r.id).into(),
            label: r.label,
            source: Source::AugHflip,
            origin_id: Some(r.id.clone()),
        })
        .collect();
    let synthetic = (0..320)
        .map(|i| {
            let source = [Source::SynB1, Source::SynB2, Source::SynB3][i % 3];
            ImageRecord::new(format!("syn{i:04}"), format!("syn/{i:04}.png"), label(i), source)
        })
        .collect();
    Ok((Manifest::new(real)?, Manifest::new(pool)?, Manifest::new(synthetic)?))
}

pub fn run(out: &Path) -> Result<(), Box<dyn Error>> {
    let (real, pool, synthetic) = records()?;

    let config = PlanConfig {
        seed: 17,
        ..PlanConfig::default()
    };
    let plan = build_plan(&real, &pool, None, &config)?;
    let summary = emit_plan(&plan, &out.join("real_test"))?;
    println!(
        "seed {}: train {} / test {} ({} eligible augmented)",
        summary.seed, config.train_count, summary.test.count, summary.pool_eligible
    );
    for t in &summary.train_sets {
        println!(
            "  p={:<4} +{:<3} -> {:<3} {}  sha256 {}",
            t.proportion,
            t.added,
            t.set.count,
            t.set.file,
            &t.set.sha256[..16]
        );
    }

    // same split, evaluated on 100 real + 100 synthetic images
    let mixed = PlanConfig {
        test_mode: TestMode::Mixed {
            real: 100,
            synthetic: 100,
        },
        ..config
    };
    let plan = build_plan(&real, &pool, Some(&synthetic), &mixed)?;
    let summary = emit_plan(&plan, &out.join("mixed_test"))?;
    println!(
        "mixed test: {:?} by source, {:?} by label",
        summary.test.sources, summary.test.labels
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let out = std::env::args().nth(1).map(PathBuf::from);
    let tmp = tempfile::tempdir()?;
    run(out.as_deref().unwrap_or(tmp.path()))
}
