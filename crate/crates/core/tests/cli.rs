use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use chartline::eval::AggregateReport;
use chartline::exchange::{list_files, read_png, Annotation, ReadOptions};

fn chartline(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chartline"))
        .args(args)
        .env_remove("CHARTLINE_CONFIG")
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = chartline(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn dir_bytes(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect()
}

#[test]
fn generate_is_deterministic() {
    let t = tempfile::tempdir().unwrap();
    let (a, b) = (t.path().join("a"), t.path().join("b"));
    ok(&["generate", "--seed", "7", "--count", "10", "--profile", "easy", "--out", p(&a)]);
    ok(&["generate", "--seed", "7", "--count", "10", "--profile", "easy", "--out", p(&b), "--jobs", "4"]);
    let (da, db) = (dir_bytes(&a), dir_bytes(&b));
    assert_eq!(da.len(), 20);
    assert_eq!(da, db);
}

#[test]
fn zero_count_is_a_usage_error() {
    let t = tempfile::tempdir().unwrap();
    let out = chartline(&["generate", "--count", "0", "--out", p(t.path())]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_inputs_are_usage_errors() {
    let t = tempfile::tempdir().unwrap();
    let nowhere = t.path().join("nope");
    let out = t.path().join("out");
    for args in [
        vec!["render-masks", "--annotations", p(&nowhere), "--out", p(&out)],
        vec!["segment", "--images", p(&nowhere), "--out", p(&out)],
        vec!["extract", "--masks", p(&nowhere), "--out", p(&out)],
        vec!["score", "--pred", p(&nowhere), "--gt", p(&nowhere)],
        vec!["overlay", "--image", p(&nowhere), "--masks", p(&nowhere), "--out", p(&out)],
    ] {
        assert_eq!(chartline(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn hard_corpus_shows_all_patterns() {
    let t = tempfile::tempdir().unwrap();
    ok(&["generate", "--seed", "1", "--count", "100", "--profile", "hard", "--out", p(t.path()), "--jobs", "4"]);
    let mut histogram: BTreeMap<String, usize> = BTreeMap::new();
    for f in list_files(t.path(), ".json").unwrap() {
        let ann = Annotation::read(&f, ReadOptions::default()).unwrap();
        *histogram.entry(ann.metadata["pattern"].clone()).or_default() += 1;
    }
    for pattern in ["crossing", "occlusion", "crowding"] {
        assert!(histogram.contains_key(pattern), "{histogram:?}");
    }
}

fn mean_from(stdout: &str) -> f64 {
    let after = stdout.split("mean ").nth(1).unwrap();
    after.split(',').next().unwrap().parse().unwrap()
}

#[test]
fn ground_truth_pipeline_scores_near_perfect() {
    let t = tempfile::tempdir().unwrap();
    let root = t.path();
    let (charts, masks, series) = (root.join("charts"), root.join("masks"), root.join("series"));
    let report = root.join("reports/score.json");
    ok(&["generate", "--seed", "3", "--count", "20", "--out", p(&charts), "--jobs", "4"]);
    ok(&["render-masks", "--annotations", p(&charts), "--out", p(&masks)]);
    ok(&["extract", "--masks", p(&masks), "--out", p(&series)]);
    for mode in ["6a", "6b"] {
        let stdout = ok(&["score", "--pred", p(&series), "--gt", p(&charts), "--mode", mode, "--report", p(&report)]);
        assert!(mean_from(&stdout) >= 98.0, "{stdout}");
        let parsed = AggregateReport::parse(&fs::read_to_string(&report).unwrap(), ReadOptions::default()).unwrap();
        assert_eq!(parsed.count, 20);
        assert_eq!(parsed.failures, 0);
    }
}

#[test]
fn predictions_equal_to_ground_truth_score_100() {
    let t = tempfile::tempdir().unwrap();
    ok(&["generate", "--seed", "9", "--count", "5", "--profile", "hard", "--out", p(t.path())]);
    for mode in ["6a", "6b"] {
        let stdout = ok(&["score", "--pred", p(t.path()), "--gt", p(t.path()), "--mode", mode]);
        assert_eq!(mean_from(&stdout), 100.0, "{stdout}");
    }
}

#[test]
fn baseline_pipeline_runs_end_to_end() {
    let t = tempfile::tempdir().unwrap();
    let root = t.path();
    let (charts, masks, series) = (root.join("charts"), root.join("masks"), root.join("series"));
    ok(&["generate", "--seed", "5", "--count", "10", "--profile", "easy", "--out", p(&charts)]);
    ok(&["segment", "--images", p(&charts), "--method", "baseline", "--out", p(&masks)]);
    ok(&["extract", "--masks", p(&masks), "--out", p(&series)]);
    let stdout = ok(&["score", "--pred", p(&series), "--gt", p(&charts)]);
    assert!(mean_from(&stdout) >= 95.0, "{stdout}");

    let overlay = root.join("overlay.png");
    let image = charts.join("chart_00000.png");
    ok(&[
        "overlay",
        "--image",
        p(&image),
        "--masks",
        p(&masks.join("chart_00000.masks.json")),
        "--out",
        p(&overlay),
    ]);
    let (before, after) = (read_png(&image).unwrap(), read_png(&overlay).unwrap());
    assert_eq!((before.width(), before.height()), (after.width(), after.height()));
    assert_ne!(before, after);
}

#[test]
fn empty_bundle_gives_empty_series_and_a_warning() {
    let t = tempfile::tempdir().unwrap();
    let masks = t.path().join("masks");
    fs::create_dir(&masks).unwrap();
    fs::write(
        masks.join("chart_00000.masks.json"),
        r#"{"height":8,"image":"chart_00000.png","masks":[],"width":8}"#,
    )
    .unwrap();
    let out_dir = t.path().join("series");
    let out = chartline(&["extract", "--masks", p(&masks), "--out", p(&out_dir)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty mask bundle"));
    let ann = Annotation::read(&out_dir.join("chart_00000.json"), ReadOptions::default()).unwrap();
    assert!(ann.series.is_empty());
}

fn corpus_with_bad_prediction(root: &Path) -> (PathBuf, PathBuf) {
    let (gt, pred) = (root.join("gt"), root.join("pred"));
    ok(&["generate", "--seed", "2", "--count", "3", "--profile", "easy", "--out", p(&gt)]);
    fs::create_dir(&pred).unwrap();
    fs::copy(gt.join("chart_00000.json"), pred.join("chart_00000.json")).unwrap();
    fs::write(pred.join("chart_00001.json"), "{not json").unwrap();
    (gt, pred)
}

#[test]
fn chart_failures_need_keep_going() {
    let t = tempfile::tempdir().unwrap();
    let (gt, pred) = corpus_with_bad_prediction(t.path());
    let report = t.path().join("r.json");
    let out = chartline(&["score", "--pred", p(&pred), "--gt", p(&gt), "--report", p(&report)]);
    assert_eq!(out.status.code(), Some(1));

    ok(&["score", "--pred", p(&pred), "--gt", p(&gt), "--report", p(&report), "--keep-going"]);
    let parsed = AggregateReport::parse(&fs::read_to_string(&report).unwrap(), ReadOptions::default()).unwrap();
    assert_eq!(parsed.failures, 1);
    assert!(parsed.charts[1].result.is_err());
    // chart_00002 has no prediction at all and scores zero
    assert_eq!(parsed.charts[2].result.as_ref().unwrap().score, 0.0);
}

#[test]
fn config_file_sets_flags_and_command_line_wins() {
    let t = tempfile::tempdir().unwrap();
    let data = t.path().join("d");
    ok(&["generate", "--seed", "4", "--count", "2", "--out", p(&data)]);
    let cfg = t.path().join("cfg.json");
    fs::write(&cfg, r#"{"score": {"mode": "6b"}}"#).unwrap();
    let run = |extra: &[&str]| {
        let mut args = vec!["score", "--pred", p(&data), "--gt", p(&data)];
        args.extend_from_slice(extra);
        let out = Command::new(env!("CARGO_BIN_EXE_chartline"))
            .args(&args)
            .env("CHARTLINE_CONFIG", &cfg)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        String::from_utf8(out.stdout).unwrap()
    };
    assert!(run(&[]).starts_with("task6b"));
    assert!(run(&["--mode", "6a"]).starts_with("task6a"));

    fs::write(&cfg, "{broken").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_chartline"))
        .args(["score", "--pred", p(&data), "--gt", p(&data)])
        .env("CHARTLINE_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_documents_defaults() {
    let help = ok(&["extract", "--help"]);
    for default in ["[default: 1]", "[default: 10]", "[default: 0.75]", "[default: 3]"] {
        assert!(help.contains(default), "{default} missing from\n{help}");
    }
    assert!(ok(&["render-masks", "--help"]).contains("[default: 3]"));
    assert!(ok(&["score", "--help"]).contains("[default: penalize]"));
}
