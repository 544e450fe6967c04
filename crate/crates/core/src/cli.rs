//! The `augscope` command line: one subcommand per pipeline stage.
//!
//! Usage errors exit 2 with clap's usage text. Runtime errors exit 1 and
//! print one line to stderr: `error[Kind]: message`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::features::{
    read_feature_store, write_feature_store, ChannelOrder, ExtractorBackend, PreprocessConfig, StoreError,
};
use crate::manifest::{ImageRecord, Manifest, ManifestError};
use crate::pipeline::{compare_stores, extract_manifest, ExtractError};
use crate::planner::{build_plan, emit_plan, PlanConfig, PlanError, TestMode};
use crate::report::{
    compare_to_reference, emit_histogram_json, emit_stats_csv, read_stats_csv, ReferenceTable, ReportError, TableName,
    Tolerances, CLASS_POOLED,
};
use crate::similarity::{PairMode, SimilarityError};
use crate::transforms::{augment_manifest, AugmentationTechnique, TransformError};

/// Environment variable that, when set, replaces `--seed`.
pub const SEED_ENV: &str = "AUGSCOPE_SEED";

/// File name of the manifest `augment` writes next to the images.
pub const AUGMENTED_MANIFEST: &str = "manifest.jsonl";

#[derive(Debug, Parser)]
#[command(
    name = "augscope",
    version,
    about = "Augmentation similarity analysis and experiment planning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Apply one augmentation technique to every image in a manifest.
    Augment(AugmentArgs),
    /// Extract 4096-dim feature vectors into a binary feature store.
    Extract(ExtractArgs),
    /// Score class-stratified pairs and write stats CSV and histogram JSON.
    Compare(CompareArgs),
    /// Split, inject augmented records, and emit training/test manifests.
    Plan(PlanArgs),
    /// Check a stats CSV against a bundled reference table.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct AugmentArgs {
    #[arg(long = "in", value_name = "MANIFEST")]
    input: PathBuf,
    #[arg(long)]
    technique: AugmentationTechnique,
    /// Contrast factor (contrast only).
    #[arg(long)]
    factor: Option<f64>,
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ExtractArgs {
    #[arg(long = "in", value_name = "MANIFEST")]
    input: PathBuf,
    /// `reference` or `neural:PATH` (ONNX model).
    #[arg(long, default_value = "reference")]
    backend: String,
    /// Channel order the neural model expects.
    #[arg(long, default_value = "rgb", value_parser = parse_channel_order)]
    channel_order: ChannelOrder,
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long, value_name = "STORE")]
    a: PathBuf,
    /// Second store; required in cross mode.
    #[arg(long, value_name = "STORE")]
    b: Option<PathBuf>,
    #[arg(long)]
    mode: PairMode,
    #[arg(long, default_value_t = 20)]
    bins: usize,
    /// Histogram range as `lo,hi`.
    #[arg(long, default_value = "-1,1", value_parser = parse_range, allow_hyphen_values = true)]
    range: (f64, f64),
    /// Comparison identifier; defaults to the store file stems.
    #[arg(long)]
    name: Option<String>,
    #[arg(long, value_name = "CSV")]
    stats: PathBuf,
    #[arg(long, value_name = "JSON")]
    hist: PathBuf,
}

#[derive(Debug, Args)]
struct PlanArgs {
    #[arg(long, value_name = "MANIFEST")]
    real: PathBuf,
    #[arg(long, value_name = "MANIFEST")]
    pool: PathBuf,
    /// Synthetic records for the mixed test set (default: the pool's synthetic records).
    #[arg(long, value_name = "MANIFEST")]
    synthetic: Option<PathBuf>,
    #[arg(long, default_value_t = 458)]
    train_count: usize,
    #[arg(long, default_value_t = 200)]
    test_count: usize,
    /// Injection percentages, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "10,25,50,75")]
    proportions: Vec<f64>,
    /// `real` or `mixed:R,S`.
    #[arg(long, default_value = "real")]
    test_mode: TestMode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ReportArgs {
    #[arg(long, value_name = "CSV")]
    stats: PathBuf,
    #[arg(long)]
    reference: TableName,
    #[arg(long, default_value_t = 0.01)]
    tol_mean: f64,
    #[arg(long, default_value_t = 0.01)]
    tol_sd: f64,
    #[arg(long, default_value_t = 0.05)]
    tol_skew: f64,
}

fn parse_channel_order(s: &str) -> Result<ChannelOrder, String> {
    match s {
        "rgb" => Ok(ChannelOrder::Rgb),
        "bgr" => Ok(ChannelOrder::Bgr),
        other => Err(format!("unknown channel order {other:?} (expected rgb|bgr)")),
    }
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let bad = || format!("bad range {s:?} (expected lo,hi)");
    let (lo, hi) = s.split_once(',').ok_or_else(bad)?;
    Ok((
        lo.trim().parse().map_err(|_| bad())?,
        hi.trim().parse().map_err(|_| bad())?,
    ))
}

/// A runtime failure: exit 1 with `error[kind]: message`.
#[derive(Debug)]
struct Failure {
    kind: &'static str,
    message: String,
}

macro_rules! failure_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure { kind: e.kind(), message: e.to_string() }
            }
        }
    )*};
}

failure_from!(
    ManifestError,
    TransformError,
    ExtractError,
    StoreError,
    SimilarityError,
    PlanError,
    ReportError,
    crate::features::FeatureError
);

/// Why a command could not run.
enum Exit {
    Usage(String),
    Runtime(Failure),
}

impl<E: Into<Failure>> From<E> for Exit {
    fn from(e: E) -> Self {
        Exit::Runtime(e.into())
    }
}

/// Runs the CLI with process stdio and environment; returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env_seed = std::env::var(SEED_ENV).ok();
    run_with(
        argv,
        env_seed.as_deref(),
        &mut std::io::stdout(),
        &mut std::io::stderr(),
    )
}

/// Like [`run`] with explicit seed override and output streams.
pub fn run_with<I, T>(argv: I, env_seed: Option<&str>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                2
            } else {
                let _ = write!(out, "{}", e.render());
                0
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Augment(a) => augment(a, out),
        Command::Extract(a) => extract(a, out),
        Command::Compare(a) => compare(a, out),
        Command::Plan(a) => plan(a, env_seed, out),
        Command::Report(a) => report(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(Exit::Usage(msg)) => {
            let _ = writeln!(err, "error[Usage]: {}", one_line(&msg));
            2
        }
        Err(Exit::Runtime(f)) => {
            let _ = writeln!(err, "error[{}]: {}", f.kind, one_line(&f.message));
            1
        }
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn io_failure(path: &Path, e: impl ToString) -> Failure {
    Failure {
        kind: "IoError",
        message: format!("{}: {}", path.display(), e.to_string()),
    }
}

fn read_manifest(path: &Path) -> Result<Manifest, ManifestError> {
    let base = path.parent().unwrap_or(Path::new(""));
    Ok(Manifest::read_jsonl(path)?.resolve_relative_to(base))
}

fn augment(args: AugmentArgs, out: &mut dyn Write) -> Result<(), Exit> {
    let technique = match (args.technique, args.factor) {
        (AugmentationTechnique::ContrastEnhance { .. }, Some(f)) => AugmentationTechnique::contrast(f)?,
        (t, None) => t,
        (t, Some(_)) => return Err(Exit::Usage(format!("--factor only applies to contrast, not {t}"))),
    };
    let manifest = read_manifest(&args.input)?;
    let augmented = augment_manifest(&manifest, technique, &args.out)?;
    // Paths in the emitted manifest are relative to the output directory.
    let relocated = Manifest::new(
        augmented
            .into_records()
            .into_iter()
            .map(|r| ImageRecord {
                path: r.path.file_name().map(PathBuf::from).unwrap_or(r.path),
                ..r
            })
            .collect(),
    )?;
    std::fs::create_dir_all(&args.out).map_err(|e| io_failure(&args.out, e))?;
    let manifest_path = args.out.join(AUGMENTED_MANIFEST);
    relocated.write_jsonl(&manifest_path)?;
    let _ = writeln!(
        out,
        "{} {} images -> {}",
        relocated.len(),
        technique,
        manifest_path.display()
    );
    Ok(())
}

fn extract(args: ExtractArgs, out: &mut dyn Write) -> Result<(), Exit> {
    let preprocess = PreprocessConfig {
        channel_order: args.channel_order,
        ..PreprocessConfig::default()
    };
    let backend = ExtractorBackend::from_spec(&args.backend, preprocess)?;
    let manifest = read_manifest(&args.input)?;
    let features = extract_manifest(&backend, &manifest)?;
    write_feature_store(&features, &args.out)?;
    let _ = writeln!(
        out,
        "{} vectors ({}) -> {}",
        features.len(),
        backend.name(),
        args.out.display()
    );
    Ok(())
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn compare(args: CompareArgs, out: &mut dyn Write) -> Result<(), Exit> {
    if args.mode == PairMode::Cross && args.b.is_none() {
        return Err(Exit::Usage("cross mode requires --b".into()));
    }
    let name = args.name.clone().unwrap_or_else(|| match &args.b {
        Some(b) => format!("{}_vs_{}", stem(&args.a), stem(b)),
        None => stem(&args.a),
    });
    let store_a = read_feature_store(&args.a)?;
    let store_b = args.b.as_deref().map(read_feature_store).transpose()?;
    let result = compare_stores(&name, args.mode, &store_a, store_b.as_deref(), args.bins, args.range)?;
    emit_stats_csv(&result.rows, &args.stats)?;
    emit_histogram_json(&result.histogram, &args.hist)?;
    for r in &result.rows {
        let _ = writeln!(
            out,
            "{}\t{}\tn={}\tmean={:.4}\tsd={:.4}\tskew={:.4}",
            r.comparison, r.class, r.sample_size, r.mean, r.sd, r.skewness
        );
    }
    Ok(())
}

fn plan(args: PlanArgs, env_seed: Option<&str>, out: &mut dyn Write) -> Result<(), Exit> {
    let seed = match env_seed {
        Some(s) => s
            .trim()
            .parse::<u64>()
            .map_err(|_| Exit::Usage(format!("{SEED_ENV}={s:?} is not an unsigned 64-bit integer")))?,
        None => args.seed,
    };
    let config = PlanConfig {
        seed,
        train_count: args.train_count,
        test_count: args.test_count,
        proportions: args.proportions.iter().map(|p| p / 100.0).collect(),
        test_mode: args.test_mode,
    };
    let real = Manifest::read_jsonl(&args.real)?;
    let pool = Manifest::read_jsonl(&args.pool)?;
    let synthetic = args.synthetic.as_deref().map(Manifest::read_jsonl).transpose()?;
    let plan = build_plan(&real, &pool, synthetic.as_ref(), &config)?;
    let summary = emit_plan(&plan, &args.out)?;
    let _ = writeln!(
        out,
        "seed {} test {} ({})",
        summary.seed, summary.test.count, summary.test.file
    );
    for t in &summary.train_sets {
        let _ = writeln!(
            out,
            "p={} added {} total {} ({})",
            t.proportion, t.added, t.set.count, t.set.file
        );
    }
    Ok(())
}

fn report(args: ReportArgs, out: &mut dyn Write) -> Result<(), Exit> {
    let table = ReferenceTable::load(args.reference);
    let tol = Tolerances {
        mean: args.tol_mean,
        sd: args.tol_sd,
        skewness: args.tol_skew,
    };
    let rows = read_stats_csv(&args.stats)?;
    let pooled: Vec<_> = rows.iter().filter(|r| r.class == CLASS_POOLED).collect();
    let mut matched = 0;
    let mut passed = 0;
    for row in &pooled {
        if table.row(&row.comparison).is_err() {
            continue;
        }
        let rep = compare_to_reference(&row.stats(), &table, &row.comparison, &tol)?;
        let _ = write!(out, "{rep}");
        matched += 1;
        passed += usize::from(rep.pass());
    }
    if matched == 0 {
        let comparison = pooled.first().map(|r| r.comparison.clone()).unwrap_or_default();
        return Err(ReportError::UnknownComparison {
            comparison,
            table: table.name.to_string(),
        }
        .into());
    }
    let _ = writeln!(out, "{passed}/{matched} comparisons within tolerance");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str], seed: Option<&str>) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("augscope").chain(args.iter().copied());
        let code = run_with(argv, seed, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        let (code, _, err) = run_capture(&["compare", "--bogus"], None);
        assert_eq!(code, 2);
        assert!(err.contains("Usage"));
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_capture(&["--help"], None);
        assert_eq!(code, 0);
        for sub in ["augment", "extract", "compare", "plan", "report"] {
            assert!(out.contains(sub), "{sub} missing from help");
        }
    }

    #[test]
    fn missing_file_is_single_line_runtime_error() {
        let (code, _, err) = run_capture(
            &[
                "extract",
                "--in",
                "/nonexistent/m.jsonl",
                "--out",
                "/nonexistent/f.augf",
            ],
            None,
        );
        assert_eq!(code, 1);
        assert_eq!(err.lines().count(), 1);
        assert!(err.starts_with("error[IoError]: "), "{err}");
    }

    #[test]
    fn factor_requires_contrast() {
        let (code, _, err) = run_capture(
            &[
                "augment",
                "--in",
                "m.jsonl",
                "--technique",
                "rot90",
                "--factor",
                "2",
                "--out",
                "x",
            ],
            None,
        );
        assert_eq!(code, 2);
        assert!(err.starts_with("error[Usage]"));
    }

    #[test]
    fn bad_env_seed_is_usage_error() {
        let (code, _, err) = run_capture(&["plan", "--real", "r", "--pool", "p", "--out", "o"], Some("abc"));
        assert_eq!(code, 2);
        assert!(err.contains("AUGSCOPE_SEED"));
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-1,1").unwrap(), (-1.0, 1.0));
        assert_eq!(parse_range("0, 0.5").unwrap(), (0.0, 0.5));
        assert!(parse_range("0").is_err());
    }
}
