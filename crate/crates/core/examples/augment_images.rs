// Rotate, flip and contrast-enhance the fixture corpus.
//
//     cargo run --example augment_images [OUT_DIR]

use std::error::Error;
use std::path::{Path, PathBuf};

use augscope::image::load_image;
use augscope::manifest::Manifest;
use augscope::transforms::{augment_manifest, contrast_enhance, horizontal_flip, rotate90cw, AugmentationTechnique};

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus")
}

pub fn run(out: &Path) -> Result<(), Box<dyn Error>> {
    let dir = corpus();
    let img = load_image(&dir.join("fx00.png"))?;
    println!("fx00: {}x{} ({} channel)", img.width(), img.height(), img.channels());

    let rotated = rotate90cw(&img);
    println!("rot90: {}x{}", rotated.width(), rotated.height());
    assert_eq!(rotated.pixel(0, rotated.width() - 1), img.pixel(0, 0));
    assert_eq!(horizontal_flip(&horizontal_flip(&img)), img);

    let boosted = contrast_enhance(&img, 1.5)?;
    let sd = |s: &[u8]| {
        let n = s.len() as f64;
        let mean = s.iter().map(|&v| v as f64).sum::<f64>() / n;
        (s.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / n).sqrt()
    };
    println!(
        "contrast x1.5: pixel sd {:.1} -> {:.1}",
        sd(img.samples()),
        sd(boosted.samples())
    );

    let manifest = Manifest::read_jsonl(&dir.join("manifest.jsonl"))?.resolve_relative_to(&dir);
    for technique in ["rot90", "hflip", "contrast"] {
        let technique: AugmentationTechnique = technique.parse()?;
        let augmented = augment_manifest(&manifest, technique, &out.join(technique.kind()))?;
        let first = &augmented.records()[0];
        println!(
            "{technique}: {} images, e.g. {} <- {}",
            augmented.len(),
            first.id,
            first.origin_id.as_deref().unwrap_or("-")
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let out = std::env::args().nth(1).map(PathBuf::from);
    let tmp = tempfile::tempdir()?;
    run(out.as_deref().unwrap_or(tmp.path()))
}
