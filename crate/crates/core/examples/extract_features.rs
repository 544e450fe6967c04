// Reference descriptors for the fixture corpus, written to and read back
// from a feature store. With the `neural` feature the bundled test model
// is run too.
//
//     cargo run --example extract_features [OUT_DIR]

use std::error::Error;
use std::path::{Path, PathBuf};

use augscope::features::{read_feature_store, write_feature_store, ExtractorBackend, PreprocessConfig, FEATURE_DIM};
use augscope::manifest::Manifest;
use augscope::pipeline::extract_manifest;
use augscope::similarity::cosine_similarity;

pub fn run(out: &Path) -> Result<(), Box<dyn Error>> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let dir = root.join("corpus");
    let manifest = Manifest::read_jsonl(&dir.join("manifest.jsonl"))?.resolve_relative_to(&dir);

    let backend = ExtractorBackend::from_spec("reference", PreprocessConfig::default())?;
    let features = extract_manifest(&backend, &manifest)?;
    let store = out.join("corpus.augf");
    write_feature_store(&features, &store)?;
    let back = read_feature_store(&store)?;
    assert_eq!(back, features);

    let v = back[0].vector.values();
    let norm = v.iter().map(|&x| (x as f64).powi(2)).sum::<f64>().sqrt();
    println!(
        "{} vectors of {FEATURE_DIM} -> {} ({} bytes)",
        back.len(),
        store.display(),
        std::fs::metadata(&store)?.len()
    );
    println!("{}: |v| = {norm:.9}, head {:?}", back[0].id(), &v[..4]);
    let same = cosine_similarity(back[0].vector.values(), back[1].vector.values())?;
    let other = cosine_similarity(back[0].vector.values(), back[19].vector.values())?;
    println!(
        "CS({}, {}) = {:.4}, CS({}, {}) = {:.4}",
        back[0].id(),
        back[1].id(),
        same.value(),
        back[0].id(),
        back[19].id(),
        other.value()
    );

    #[cfg(feature = "neural")]
    {
        let spec = format!("neural:{}", root.join("neural/tiny_vgg.onnx").display());
        let neural = ExtractorBackend::from_spec(&spec, PreprocessConfig::default())?;
        let img = augscope::image::load_image(&root.join("neural/probe.png"))?;
        let v = neural.extract("probe", &img)?;
        let active = v.values().iter().filter(|&&x| x > 0.0).count();
        println!("neural probe: {} dims, {active} active", v.values().len());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    let out = std::env::args().nth(1).map(PathBuf::from);
    let tmp = tempfile::tempdir()?;
    run(out.as_deref().unwrap_or(tmp.path()))
}
