use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rtd_cli::commands::stable_digest;
use rtd_cli::io::read_cloud;
use rtd_core::crossgraph::{augmented_matrix, Form};
use rtd_core::oracle::naive_barcode;
use rtd_core::rtd::{normalized_distances, r_cross_barcode, rtd_score, CrossBarcodeOptions, RtdConfig};
use rtd_core::{Bar, PointCloud};
use serde_json::Value;
use tempfile::TempDir;

fn rtd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rtd")).args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn synth(dir: &Path, suite: &str, extra: &[&str]) -> Value {
    let mut args = vec!["synth", suite, "--out", s(dir)];
    args.extend_from_slice(extra);
    stdout_json(&rtd(&args))
}

fn bars_of(v: &Value) -> Vec<Bar> {
    serde_json::from_value(v["bars"].clone()).unwrap()
}

#[test]
fn comparing_a_file_with_itself_scores_zero() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", "0,0\n1,0\n0,1\n1,1\n2,3\n");
    let v = stdout_json(&rtd(&["compare", s(&a), s(&a)]));
    assert_eq!(v["schema"], "rtd-report/1");
    assert_eq!(v["report"]["rtd_score"].as_f64(), Some(0.0));
    assert_eq!(v["manifest"]["inputs"][0]["sha256"], v["manifest"]["inputs"][1]["sha256"]);
}

#[test]
fn compare_matches_the_library_bit_for_bit() {
    let dir = TempDir::new().unwrap();
    synth(dir.path(), "clusters", &[]);
    let a = dir.path().join("clusters-01.csv");
    let b = dir.path().join("clusters-03.csv");
    let v = stdout_json(&rtd(&["compare", s(&a), s(&b)]));
    let expected = rtd_score(
        &read_cloud(&a, false).unwrap(),
        &read_cloud(&b, false).unwrap(),
        &RtdConfig::default(),
    )
    .unwrap();
    assert_eq!(v["report"]["rtd_score"].as_f64().unwrap().to_bits(), expected.rtd_score.to_bits());
    assert_eq!(v["report"]["batches_run"], 1);
    assert!(expected.rtd_score > 0.0);
}

#[test]
fn malformed_row_exits_with_two_and_names_the_row() {
    let dir = TempDir::new().unwrap();
    let good = write(&dir, "good.csv", "0,0\n1,0\n0,1\n");
    let bad = write(&dir, "bad.csv", "0,0\n1,zero\n0,1\n");
    let out = rtd(&["compare", s(&good), s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("row 2"), "{err}");

    let ragged = write(&dir, "ragged.csv", "0,0\n1,0,5\n0,1\n");
    let out = rtd(&["compare", s(&good), s(&ragged)]);
    assert_eq!(out.status.code(), Some(2));
    let missing = dir.path().join("missing.csv");
    assert_eq!(rtd(&["compare", s(&good), s(&missing)]).status.code(), Some(2));
}

#[test]
fn unequal_sizes_exit_with_three() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", "0,0\n1,0\n0,1\n");
    let b = write(&dir, "b.csv", "0,0\n1,0\n");
    assert_eq!(rtd(&["compare", s(&a), s(&b)]).status.code(), Some(3));
    assert_eq!(rtd(&["barcode", s(&a), s(&b)]).status.code(), Some(3));
}

#[test]
fn unwritable_output_exits_with_four() {
    let dir = TempDir::new().unwrap();
    let blocker = write(&dir, "plain-file", "");
    let out = rtd(&["synth", "rings", "--points", "20", "--out", s(&blocker.join("sub"))]);
    assert_eq!(out.status.code(), Some(4));

    let a = write(&dir, "a.csv", "0,0\n1,0\n0,1\n");
    let out = rtd(&["barcode", s(&a), s(&a), "--svg", s(&blocker.join("x.svg"))]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn header_rows_are_skipped_on_request() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", "x,y\n0,0\n1,0\n0,1\n");
    assert_eq!(rtd(&["compare", s(&a), s(&a)]).status.code(), Some(2));
    let v = stdout_json(&rtd(&["compare", "--header", s(&a), s(&a)]));
    assert_eq!(v["report"]["rtd_score"].as_f64(), Some(0.0));
}

#[test]
fn barcode_matches_the_library_and_draws_svg() {
    let dir = TempDir::new().unwrap();
    synth(dir.path(), "clusters", &["--points", "60"]);
    let a = dir.path().join("clusters-01.csv");
    let b = dir.path().join("clusters-02.csv");
    let svg = dir.path().join("bars.svg");
    let v = stdout_json(&rtd(&["barcode", s(&a), s(&b), "--svg", s(&svg)]));
    assert_eq!(v["schema"], "rtd-barcode/1");
    let expected = r_cross_barcode(
        &read_cloud(&a, false).unwrap(),
        &read_cloud(&b, false).unwrap(),
        &CrossBarcodeOptions::default(),
    )
    .unwrap();
    let bars = bars_of(&v);
    assert!(!bars.is_empty());
    assert_eq!(bars, expected.bars());
    let drawing = fs::read_to_string(&svg).unwrap();
    assert!(drawing.starts_with("<svg"));
    assert_eq!(drawing.matches("<rect").count(), bars.len());

    let same = stdout_json(&rtd(&["barcode", s(&a), s(&a)]));
    assert!(bars_of(&same).is_empty());
    assert_eq!(same["rtd"].as_f64(), Some(0.0));
}

/// The kite fixture: the second cloud pulls one corner inward, which opens
/// exactly one cross-barcode bar in dimension one.
#[test]
fn kite_fixture_has_exactly_one_bar() {
    let (a, b) = (fixture("kite_a.csv"), fixture("kite_b.csv"));
    let v = stdout_json(&rtd(&["barcode", s(&a), s(&b)]));
    let bars = bars_of(&v);
    assert_eq!(bars.len(), 1, "{bars:?}");

    let w = normalized_distances(&read_cloud(&a, false).unwrap(), 0.9, false).unwrap();
    let wt = normalized_distances(&read_cloud(&b, false).unwrap(), 0.9, false).unwrap();
    let aug = augmented_matrix(&w, &wt, Form::Algorithm1).unwrap().matrix;
    let oracle = naive_barcode(&aug, 1).unwrap().in_dim(1);
    assert_eq!(oracle.bars(), bars.as_slice());
    assert_eq!(v["rtd"].as_f64().unwrap(), bars[0].length());
}

#[test]
fn synth_round_trips_through_csv() {
    let dir = TempDir::new().unwrap();
    let v = synth(dir.path(), "rings", &["--points", "40", "--seed", "3"]);
    assert_eq!(v["schema"], "rtd-synth/1");
    let files = v["files"].as_array().unwrap();
    assert_eq!(files.len(), 6);
    let fam = rtd_cli::commands::family(rtd_cli::args::Suite::Rings, 40, 3).unwrap();
    for f in files {
        let path = dir.path().join(f["name"].as_str().unwrap());
        let cloud = read_cloud(&path, false).unwrap();
        assert_eq!(cloud.len(), 40);
        assert_eq!(f["sha256"].as_str().unwrap(), rtd_cli::io::file_sha256(&path).unwrap());
        let expected: &PointCloud = match f["label"].as_u64() {
            Some(l) => fam.variant(l as usize).unwrap(),
            None => &fam.base,
        };
        assert_eq!(&cloud, expected);
    }
    let on_disk: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(on_disk["files"], v["files"]);

    let again = TempDir::new().unwrap();
    let w = synth(again.path(), "rings", &["--points", "40", "--seed", "3"]);
    assert_eq!(w["files"], v["files"]);
}

#[test]
fn repeated_runs_have_the_same_stable_digest() {
    let dir = TempDir::new().unwrap();
    synth(dir.path(), "rings", &["--points", "80"]);
    let a = dir.path().join("rings-05.csv");
    let b = dir.path().join("rings-02.csv");
    let args = ["compare", s(&a), s(&b), "--batch-size", "30", "--batches", "4", "--seed", "9"];
    let first = rtd(&args);
    let second = rtd(&args);
    let text = |o: &Output| String::from_utf8(o.stdout.clone()).unwrap();
    assert_eq!(stable_digest(&text(&first)).unwrap(), stable_digest(&text(&second)).unwrap());
    let v = stdout_json(&first);
    assert_eq!(v["report"]["per_batch"].as_array().unwrap().len(), 4);
}

#[test]
fn simplex_cap_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.csv", "0,0\n1,0\n0,1\n1,1\n2,3\n");
    let b = write(&dir, "b.csv", "0,0\n1,0\n0,1\n1,2\n2,3\n");
    let out = Command::new(env!("CARGO_BIN_EXE_rtd"))
        .args(["compare", s(&a), s(&b)])
        .env("RTD_MAX_SIMPLICES", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("too large"), "{err}");
    assert!(rtd(&["compare", s(&a), s(&b)]).status.success());
}
