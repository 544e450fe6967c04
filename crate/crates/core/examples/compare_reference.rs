// Checking computed statistics against the bundled reference tables.
//
// The table sample sizes follow from the pair counts alone; the other
// statistics need the original images, so a constructed score sample
// stands in to show a passing check, followed by a failing one.
//
//     cargo run --example compare_reference

use std::error::Error;
use std::path::{Path, PathBuf};

use augscope::manifest::Label;
use augscope::report::{compare_to_reference, ReferenceTable, TableName, Tolerances};
use augscope::similarity::{distribution_stats, enumerate_pairs, DistributionStats, LabeledId, PairMode};

fn ids(prefix: &str, blood: usize, no_blood: usize) -> Vec<LabeledId> {
    (0..blood + no_blood)
        .map(|i| {
            LabeledId::new(
                format!("{prefix}{i}"),
                if i < blood { Label::Blood } else { Label::NoBlood },
            )
        })
        .collect()
}

pub fn run(_out: &Path) -> Result<(), Box<dyn Error>> {
    let table2 = ReferenceTable::load(TableName::Table2);
    for row in &table2.rows {
        println!(
            "{:<13} n={:<6} mean {:.4} sd {:.4} skew {:+.4}",
            row.comparison,
            row.sample_size.unwrap_or(0),
            row.mean,
            row.sd,
            row.skewness
        );
    }

    let within = enumerate_pairs(PairMode::Within, &ids("r", 113, 113), None)?;
    let cross = enumerate_pairs(PairMode::Cross, &ids("r", 80, 80), Some(&ids("s", 80, 80)))?;
    println!(
        "within 113+113 -> {} pairs, cross 80+80 -> {} pairs",
        within.len(),
        cross.len()
    );

    // stand-in scores: quantiles of u^k, with k chosen to hit the published
    // skewness, then shifted and scaled to the published mean and sd
    let target = table2.row("real_vs_syn")?;
    let shaped = |k: f64| -> Vec<f64> {
        let n = cross.len();
        (0..n).map(|i| ((i as f64 + 0.5) / n as f64).powf(k)).collect()
    };
    let (mut lo, mut hi) = (1.0, 4.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if distribution_stats(&shaped(mid))?.skewness < target.skewness {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let raw = shaped(lo);
    let base = distribution_stats(&raw)?;
    let scores: Vec<f64> = raw
        .iter()
        .map(|x| target.mean + (x - base.mean) * target.sd / base.sd)
        .collect();
    let stats = distribution_stats(&scores)?;
    let report = compare_to_reference(&stats, &table2, "real_vs_syn", &Tolerances::default())?;
    print!("{report}");
    println!("overall: {}", if report.pass() { "PASS" } else { "FAIL" });

    let off = DistributionStats {
        skewness: -0.90,
        ..distribution_stats(&[0.80, 0.85, 0.90, 0.86])?
    };
    let report = compare_to_reference(&off, &table2, "real_vs_real", &Tolerances::default())?;
    let skew = report.check("skewness").unwrap();
    println!(
        "skewness {:+.4} vs {:+.4}: delta {:+.4} -> {}",
        skew.computed,
        skew.reference,
        skew.delta,
        if skew.pass { "PASS" } else { "FAIL" }
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run(&PathBuf::from("."))
}
