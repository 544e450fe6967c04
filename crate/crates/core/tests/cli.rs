//! End-to-end runs of the `augscope` binary on the fixture corpus.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use augscope::features::read_feature_store;
use augscope::manifest::{Manifest, Source};
use augscope::report::{read_histogram_json, read_stats_csv};

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpus")
}

fn augscope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_augscope"))
        .args(args)
        .env_remove("AUGSCOPE_SEED")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = augscope(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn snapshot(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.is_file())
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect()
}

#[test]
fn augment_extract_compare_report() {
    let tmp = tempfile::tempdir().unwrap();
    let before = snapshot(&corpus());
    let manifest = corpus().join("manifest.jsonl");

    let aug_dir = tmp.path().join("hflip");
    ok(&[
        "augment",
        "--in",
        s(&manifest),
        "--technique",
        "hflip",
        "--out",
        s(&aug_dir),
    ]);
    let aug = Manifest::read_jsonl(&aug_dir.join("manifest.jsonl")).unwrap();
    assert_eq!(aug.len(), 20);
    assert!(aug.iter().all(|r| r.source == Source::AugHflip && r.path.is_relative()));
    assert_eq!(aug.records()[0].origin_id.as_deref(), Some("fx00"));

    let real_store = tmp.path().join("real.augf");
    let aug_store = tmp.path().join("hflip.augf");
    ok(&["extract", "--in", s(&manifest), "--out", s(&real_store)]);
    ok(&[
        "extract",
        "--in",
        s(&aug_dir.join("manifest.jsonl")),
        "--backend",
        "reference",
        "--out",
        s(&aug_store),
    ]);
    assert_eq!(read_feature_store(&aug_store).unwrap().len(), 20);

    let stats = tmp.path().join("stats.csv");
    let hist = tmp.path().join("hist.json");
    ok(&[
        "compare",
        "--a",
        s(&real_store),
        "--b",
        s(&aug_store),
        "--mode",
        "cross",
        "--bins",
        "10",
        "--name",
        "hflip",
        "--stats",
        s(&stats),
        "--hist",
        s(&hist),
    ]);
    let rows = read_stats_csv(&stats).unwrap();
    let classes: Vec<_> = rows.iter().map(|r| r.class.as_str()).collect();
    assert_eq!(classes, ["blood", "no_blood", "pooled"]);
    assert_eq!(rows[2].sample_size, 200);
    assert!(rows.iter().all(|r| r.comparison == "hflip" && r.name == "cross"));
    let h = read_histogram_json(&hist).unwrap();
    assert_eq!(h.bins.len(), 10);
    assert_eq!(h.bins.iter().map(|b| b.count).sum::<usize>(), 200);

    // the fixture is not the clinical data, so the check runs but does not pass
    let report = ok(&["report", "--stats", s(&stats), "--reference", "table4"]);
    assert!(report.lines().any(|l| l.starts_with("table4\thflip\tmean\t")));
    assert!(report.trim_end().ends_with("comparisons within tolerance"));

    assert_eq!(snapshot(&corpus()), before, "inputs were modified");
}

#[test]
fn within_mode_needs_only_one_store() {
    let tmp = tempfile::tempdir().unwrap();
    let store = tmp.path().join("real.augf");
    ok(&[
        "extract",
        "--in",
        s(&corpus().join("manifest.jsonl")),
        "--out",
        s(&store),
    ]);
    let stats = tmp.path().join("w.csv");
    ok(&[
        "compare",
        "--a",
        s(&store),
        "--mode",
        "within",
        "--stats",
        s(&stats),
        "--hist",
        s(&tmp.path().join("w.json")),
    ]);
    let rows = read_stats_csv(&stats).unwrap();
    // C(10,2) per class
    assert_eq!(rows.last().unwrap().sample_size, 90);
    assert_eq!(rows[0].comparison, "real");
}

#[test]
fn subcommands_are_idempotent() {
    let tmp = tempfile::tempdir().unwrap();
    let manifest = corpus().join("manifest.jsonl");
    let run = |tag: &str| {
        let dir = tmp.path().join(tag);
        let aug = dir.join("aug");
        ok(&[
            "augment",
            "--in",
            s(&manifest),
            "--technique",
            "contrast",
            "--factor",
            "1.5",
            "--out",
            s(&aug),
        ]);
        ok(&[
            "extract",
            "--in",
            s(&aug.join("manifest.jsonl")),
            "--out",
            s(&dir.join("aug.augf")),
        ]);
        ok(&[
            "compare",
            "--a",
            s(&dir.join("aug.augf")),
            "--mode",
            "within",
            "--stats",
            s(&dir.join("s.csv")),
            "--hist",
            s(&dir.join("h.json")),
        ]);
        ok(&[
            "plan",
            "--real",
            s(&manifest),
            "--pool",
            s(&aug.join("manifest.jsonl")),
            "--train-count",
            "14",
            "--test-count",
            "6",
            "--seed",
            "3",
            "--out",
            s(&dir.join("plan")),
        ]);
        (snapshot(&aug), snapshot(&dir), snapshot(&dir.join("plan")))
    };
    let first = run("a");
    let second = run("b");
    assert_eq!(first.0, second.0);
    for f in ["aug.augf", "s.csv", "h.json"] {
        assert_eq!(first.1[f], second.1[f], "{f} differs");
    }
    assert_eq!(first.2, second.2);
}

fn write_pool(dir: &Path, n: usize) -> PathBuf {
    let real = Manifest::read_jsonl(&corpus().join("manifest.jsonl")).unwrap();
    let lines: String = real
        .iter()
        .take(n)
        .map(|r| {
            format!(
                "{{\"id\":\"{0}_hflip\",\"path\":\"{0}_hflip.png\",\"label\":\"{1}\",\"source\":\"aug_hflip\",\"origin_id\":\"{0}\"}}\n",
                r.id, r.label
            )
        })
        .collect();
    let p = dir.join("pool.jsonl");
    std::fs::write(&p, lines).unwrap();
    p
}

#[test]
fn plan_seed_env_overrides_flag() {
    let tmp = tempfile::tempdir().unwrap();
    let pool = write_pool(tmp.path(), 20);
    let real = corpus().join("manifest.jsonl");
    let plan = |out: &Path, seed_flag: &str, env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_augscope"));
        cmd.args([
            "plan",
            "--real",
            s(&real),
            "--pool",
            s(&pool),
            "--train-count",
            "14",
            "--test-count",
            "6",
            "--proportions",
            "25,50",
            "--seed",
            seed_flag,
            "--out",
            s(out),
        ]);
        match env {
            Some(v) => cmd.env("AUGSCOPE_SEED", v),
            None => cmd.env_remove("AUGSCOPE_SEED"),
        };
        assert!(cmd.output().unwrap().status.success());
        snapshot(out)
    };
    let by_flag = plan(&tmp.path().join("flag"), "11", None);
    let by_env = plan(&tmp.path().join("env"), "999", Some("11"));
    let other = plan(&tmp.path().join("other"), "999", None);
    assert_eq!(by_flag, by_env);
    assert_ne!(by_flag["test.jsonl"], other["test.jsonl"]);
    assert!(by_flag.contains_key("train_p25.jsonl") && by_flag.contains_key("train_p50.jsonl"));

    let summary: serde_json::Value = serde_json::from_slice(&by_flag["plan.json"]).unwrap();
    assert_eq!(summary["seed"], 11);
    assert_eq!(summary["train_sets"][1]["added"], 7);
}

#[test]
fn small_pool_is_pool_exhausted() {
    let tmp = tempfile::tempdir().unwrap();
    let pool = write_pool(tmp.path(), 4);
    let out = augscope(&[
        "plan",
        "--real",
        s(&corpus().join("manifest.jsonl")),
        "--pool",
        s(&pool),
        "--train-count",
        "14",
        "--test-count",
        "6",
        "--out",
        s(&tmp.path().join("plan")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("error[PoolExhausted]: "), "{err}");
    assert!(err.contains("short by"), "{err}");
}

#[test]
fn unknown_flag_exits_two() {
    let out = augscope(&["compare", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn unknown_reference_comparison() {
    let tmp = tempfile::tempdir().unwrap();
    let stats = tmp.path().join("s.csv");
    std::fs::write(
        &stats,
        "comparison,name,class,sample_size,mean,sd,skewness\nmystery,cross,pooled,5,0.5,0.1,0.0\n",
    )
    .unwrap();
    let out = augscope(&["report", "--stats", s(&stats), "--reference", "table2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[UnknownComparison]"));
}

#[test]
fn corrupt_image_is_reported() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("bad.png"), b"not a png").unwrap();
    let m = tmp.path().join("m.jsonl");
    std::fs::write(
        &m,
        "{\"id\":\"bad\",\"path\":\"bad.png\",\"label\":\"blood\",\"source\":\"real\",\"origin_id\":null}\n",
    )
    .unwrap();
    let out = augscope(&["extract", "--in", s(&m), "--out", s(&tmp.path().join("f.augf"))]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[CorruptImage]"));
    assert!(!tmp.path().join("f.augf").exists());
}
