// Original vs each augmentation technique on the fixture corpus, the
// small-scale analogue of the augmentation summary table: a horizontal
// flip keeps images closer to their originals than a 90 degree rotation.
//
//     cargo run --example flip_vs_rotate

use std::error::Error;
use std::path::{Path, PathBuf};

use augscope::features::{reference_extract, LabeledFeature};
use augscope::image::load_image;
use augscope::manifest::Manifest;
use augscope::pipeline::compare_stores;
use augscope::report::{ReferenceTable, TableName};
use augscope::similarity::PairMode;
use augscope::transforms::AugmentationTechnique;

pub fn run(_out: &Path) -> Result<(), Box<dyn Error>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus");
    let manifest = Manifest::read_jsonl(&dir.join("manifest.jsonl"))?.resolve_relative_to(&dir);
    let images = manifest
        .iter()
        .map(|r| Ok((r, load_image(&r.path)?)))
        .collect::<Result<Vec<_>, Box<dyn Error>>>()?;

    let original = images
        .iter()
        .map(|(r, img)| {
            Ok(LabeledFeature {
                vector: reference_extract(&r.id, img)?,
                label: r.label,
            })
        })
        .collect::<Result<Vec<_>, Box<dyn Error>>>()?;
    let table4 = ReferenceTable::load(TableName::Table4);

    println!("technique  mean    sd      skew     (published mean)");
    let mut means = Vec::new();
    for kind in ["rot90", "hflip", "contrast"] {
        let technique: AugmentationTechnique = kind.parse()?;
        let augmented = images
            .iter()
            .map(|(r, img)| {
                let vector = reference_extract(&format!("{}_{kind}", r.id), &technique.apply(img)?)?;
                Ok(LabeledFeature { vector, label: r.label })
            })
            .collect::<Result<Vec<_>, Box<dyn Error>>>()?;
        let out = compare_stores(kind, PairMode::Cross, &original, Some(&augmented), 20, (-1.0, 1.0))?;
        let pooled = out.rows.last().unwrap();
        println!(
            "{kind:<10} {:.4}  {:.4}  {:+.4}  ({:.4})",
            pooled.mean,
            pooled.sd,
            pooled.skewness,
            table4.row(kind)?.mean
        );
        means.push((kind, pooled.mean));
    }
    let (hflip, rot90) = (means[1].1, means[0].1);
    println!("hflip {} rot90", if hflip > rot90 { ">" } else { "<=" });
    assert!(hflip > rot90);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run(&PathBuf::from("."))
}
