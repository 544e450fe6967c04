// Within- and cross-set similarity distributions, written as a stats CSV
// and histogram JSON and sketched in the terminal.
//
//     cargo run --example similarity_distributions [OUT_DIR]

use std::error::Error;
use std::path::{Path, PathBuf};

use augscope::features::{reference_extract, LabeledFeature};
use augscope::image::load_image;
use augscope::manifest::Manifest;
use augscope::pipeline::compare_stores;
use augscope::report::{emit_histogram_json, emit_stats_csv, HistogramReport};
use augscope::similarity::PairMode;
use augscope::transforms::contrast_enhance;

fn sketch(h: &HistogramReport) {
    let peak = h.bins.iter().map(|b| b.count).max().unwrap_or(1).max(1);
    for b in h.bins.iter().filter(|b| b.count > 0) {
        println!(
            "  [{:+.2}, {:+.2}) {:>4} {}",
            b.lo,
            b.hi,
            b.count,
            "#".repeat(b.count * 40 / peak)
        );
    }
}

pub fn run(out: &Path) -> Result<(), Box<dyn Error>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus");
    let manifest = Manifest::read_jsonl(&dir.join("manifest.jsonl"))?.resolve_relative_to(&dir);

    let mut real = Vec::new();
    let mut boosted = Vec::new();
    for r in &manifest {
        let img = load_image(&r.path)?;
        real.push(LabeledFeature {
            vector: reference_extract(&r.id, &img)?,
            label: r.label,
        });
        boosted.push(LabeledFeature {
            vector: reference_extract(&format!("{}_contrast", r.id), &contrast_enhance(&img, 1.5)?)?,
            label: r.label,
        });
    }

    let within = compare_stores("real_vs_real", PairMode::Within, &real, None, 20, (0.0, 1.0))?;
    let cross = compare_stores(
        "real_vs_contrast",
        PairMode::Cross,
        &real,
        Some(&boosted),
        20,
        (0.0, 1.0),
    )?;

    let rows: Vec<_> = within.rows.iter().chain(&cross.rows).cloned().collect();
    emit_stats_csv(&rows, &out.join("stats.csv"))?;
    emit_histogram_json(&within.histogram, &out.join("real_vs_real.json"))?;
    emit_histogram_json(&cross.histogram, &out.join("real_vs_contrast.json"))?;

    println!("comparison        class     n     mean    sd      skew");
    for r in &rows {
        println!(
            "{:<17} {:<9} {:<5} {:.4}  {:.4}  {:+.4}",
            r.comparison, r.class, r.sample_size, r.mean, r.sd, r.skewness
        );
    }
    println!("real_vs_real ({} pairs)", within.pairs.len());
    sketch(&within.histogram);
    println!("real_vs_contrast ({} pairs)", cross.pairs.len());
    sketch(&cross.histogram);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let out = std::env::args().nth(1).map(PathBuf::from);
    let tmp = tempfile::tempdir()?;
    run(out.as_deref().unwrap_or(tmp.path()))
}
