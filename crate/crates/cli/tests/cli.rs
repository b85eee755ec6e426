use std::path::{Path, PathBuf};
use std::process::Command;

use posture_symmetry::dataset_io::serialize_pts70;
use posture_symmetry::fixtures::symmetric_face;
use posture_symmetry::{Landmarks, Point};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("symmetry").chain(args.iter().copied());
    let code = symmetry_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, ls: &Landmarks) -> PathBuf {
    let path = dir.join(name);
    std::fs::create_dir_all(path.parent().unwrap()).unwrap();
    std::fs::write(&path, serialize_pts70(ls).unwrap()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn f0() -> Landmarks {
    symmetric_face()
}

fn shifted(dx: f64) -> Landmarks {
    f0().map_points(|i, p| if i < 68 { Point::new(p.x + dx, p.y) } else { p })
}

/// Manifest whose pred files are copies of the gt files.
fn self_manifest(dir: &Path, sets: &[Landmarks]) -> PathBuf {
    let mut text = String::from("image_id,gt_path,pred_path\n");
    for (i, ls) in sets.iter().enumerate() {
        write(dir, &format!("gt/{i}.pts70"), ls);
        write(dir, &format!("pred/{i}.pts70"), ls);
        text.push_str(&format!("img{i},gt/{i}.pts70,pred/{i}.pts70\n"));
    }
    let path = dir.join("manifest.csv");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn validate_clean_file_is_silent_in_quiet_mode() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "f0.pts70", &f0());
    assert_eq!(run(&["validate", "--quiet", s(&p)]), (0, String::new(), String::new()));
    let (code, out, _) = run(&["validate", s(&p)]);
    assert_eq!(code, 0);
    assert!(out.ends_with("f0.pts70: ok\n"));
}

#[test]
fn validate_reports_count_violation() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("version: 1\nn_points: 69\n{\n");
    for p in f0().points.iter().take(69) {
        text.push_str(&format!("{} {}\n", p.x, p.y));
    }
    text.push_str("}\n");
    let p = dir.path().join("short.pts70");
    std::fs::write(&p, text).unwrap();
    let (code, out, _) = run(&["validate", s(&p)]);
    assert_eq!(code, 1);
    assert!(out.contains("error: point-count: expected 70 points, found 69"), "{out}");
}

#[test]
fn validate_warnings_do_not_fail() {
    let dir = tempfile::tempdir().unwrap();
    let mut ls = f0();
    ls.points[36] = Point::new(220.0, 100.0);
    ls.points[45] = Point::new(100.0, 100.0);
    let p = write(dir.path(), "mirrored.pts70", &ls);
    let (code, out, _) = run(&["validate", "-q", s(&p)]);
    assert_eq!(code, 0);
    assert!(out.contains("warning: mirrored-face"));
    let (_, json, _) = run(&["validate", "--format", "json", s(&p)]);
    let v: Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v[0]["warnings"][0], "mirrored-face");
}

#[test]
fn validate_unreadable_file_fails() {
    let (code, out, _) = run(&["validate", "/nonexistent/x.pts70"]);
    assert_eq!(code, 1);
    assert!(out.contains("cannot read"));
}

#[test]
fn measure_fixture_row() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "F0.pts70", &f0());
    let (code, out, _) = run(&["measure", "--format", "csv", s(&p)]);
    assert_eq!(code, 0);
    assert_eq!(out, "image_id,fa,osa,rfs,ga,hhd,td\nF0,0,0,1,90,0,0\n");

    let (_, out, _) = run(&["measure", "--format", "csv", "--relative", s(&p)]);
    assert_eq!(out.lines().nth(1).unwrap(), "F0,0,0,1,0,0,0");

    let (_, out, _) = run(&["measure", s(&p)]);
    assert_eq!(
        out.lines().nth(1).unwrap().split_whitespace().collect::<Vec<_>>(),
        ["F0", "0.00", "0.00", "1.00", "90.00", "0.00", "0.00"]
    );
}

#[test]
fn measure_abs_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let mut ls = f0();
    ls.points[54] = Point::new(190.0, 190.0);
    let p = write(dir.path(), "tilted.pts70", &ls);
    let (_, out, _) = run(&["measure", "--format", "json", s(&p)]);
    let fa = serde_json::from_str::<Value>(&out).unwrap()[0]["fa"].as_f64().unwrap();
    assert!(fa < 0.0);
    let (_, out, _) = run(&["measure", "--format", "json", "--abs", s(&p)]);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["fa"].as_f64().unwrap(), -fa);
    assert_eq!(v[0]["image_id"], "tilted");
}

#[test]
fn measure_partial_failure() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.pts70", &f0());
    let bad = dir.path().join("bad.pts70");
    std::fs::write(&bad, "version: 1\nn_points: 70\n{\n1 2\n").unwrap();
    let (code, out, err) = run(&["measure", "--format", "csv", s(&good), s(&bad)]);
    assert_eq!(code, 1);
    assert_eq!(out.lines().count(), 2);
    assert!(err.contains("bad.pts70"));
}

#[test]
fn measure_degenerate_geometry_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let mut ls = f0();
    ls.points[69] = ls.points[68];
    let p = write(dir.path(), "d.pts70", &ls);
    let (code, _, err) = run(&["measure", s(&p)]);
    assert_eq!(code, 1);
    assert!(err.contains("degenerate shoulder line"), "{err}");
}

#[test]
fn evaluate_self_prediction_is_perfect() {
    let dir = tempfile::tempdir().unwrap();
    let sets: Vec<Landmarks> = (0..5)
        .map(|i| {
            let mut ls = shifted(4.0 * i as f64);
            ls.points[54].y += i as f64;
            ls.points[42].y -= 0.5 * i as f64;
            ls.points[69].y += 2.0 * i as f64;
            ls
        })
        .collect();
    let m = self_manifest(dir.path(), &sets);
    let report = dir.path().join("report.json");
    let (code, out, _) = run(&["evaluate", s(&m), "--out", s(&report)]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().count(), 8);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    for r in v["measures"].as_array().unwrap() {
        let b = &r["metrics"];
        assert_eq!(b["spearman_rho"], 1.0, "{}", r["measure"]);
        assert_eq!(b["bca"], 1.0);
        assert_eq!(b["mae"], 0.0);
        assert_eq!(b["rmse"], 0.0);
        assert_eq!(b["rho_band"], "very-strong");
    }
}

#[test]
fn evaluate_constant_ground_truth_shows_undefined_rho() {
    let dir = tempfile::tempdir().unwrap();
    let m = self_manifest(dir.path(), &[shifted(0.0), shifted(3.0), shifted(6.0)]);
    let (code, out, _) = run(&["evaluate", s(&m)]);
    assert_eq!(code, 0);
    let fa_row = out.lines().find(|l| l.starts_with("fa ")).unwrap();
    assert!(fa_row.contains("undefined"), "{out}");
    let td_row = out.lines().find(|l| l.starts_with("td ")).unwrap();
    assert!(td_row.contains("1.00"));
    let (_, csv, _) = run(&["evaluate", s(&m), "--format", "csv"]);
    assert!(csv.contains("\nfa,3,undefined,"));
}

#[test]
fn evaluate_needs_two_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let m = self_manifest(dir.path(), &[f0()]);
    let (code, _, err) = run(&["evaluate", s(&m)]);
    assert_eq!(code, 1);
    assert!(err.contains("at least 2"));
}

#[test]
fn evaluate_missing_file_fails_fast_or_skips() {
    let dir = tempfile::tempdir().unwrap();
    let m = self_manifest(dir.path(), &[f0(), shifted(2.0), shifted(4.0)]);
    std::fs::remove_file(dir.path().join("pred/1.pts70")).unwrap();
    let (code, _, err) = run(&["evaluate", s(&m)]);
    assert_eq!(code, 1);
    assert!(err.contains("img1 (pred)"), "{err}");

    let (code, out, err) = run(&["evaluate", s(&m), "--skip-bad", "--format", "json"]);
    assert_eq!(code, 0);
    assert!(err.contains("skipped img1"));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["n_pairs"], 2);
    assert_eq!(v["skipped"][0]["image_id"], "img1");
    assert_eq!(v["skipped"][0]["role"], "pred");
}

#[test]
fn evaluate_base_dir_override() {
    let dir = tempfile::tempdir().unwrap();
    self_manifest(dir.path(), &[f0(), shifted(2.0)]);
    let elsewhere = tempfile::tempdir().unwrap();
    let m = elsewhere.path().join("m.csv");
    std::fs::copy(dir.path().join("manifest.csv"), &m).unwrap();
    assert_eq!(run(&["evaluate", s(&m)]).0, 1);
    assert_eq!(run(&["evaluate", s(&m), "--base-dir", s(dir.path())]).0, 0);
}

#[test]
fn evaluate_duplicate_manifest_ids() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.csv");
    std::fs::write(&m, "image_id,gt_path,pred_path\na,x,y\na,x,y\n").unwrap();
    let (code, _, err) = run(&["evaluate", s(&m)]);
    assert_eq!(code, 1);
    assert!(err.contains("line 3") && err.contains("duplicate"), "{err}");
}

#[test]
fn config_sets_bands_and_precision() {
    let dir = tempfile::tempdir().unwrap();
    let m = self_manifest(dir.path(), &[shifted(0.0), shifted(3.0), shifted(6.0)]);
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(&cfg, "display_precision = 4\nga_relative = true\n").unwrap();
    let (code, out, _) = run(&["evaluate", s(&m), "--config", s(&cfg)]);
    assert_eq!(code, 0);
    assert!(out.lines().find(|l| l.starts_with("td ")).unwrap().contains("1.0000"));
    let (_, json, _) = run(&["evaluate", s(&m), "--config", s(&cfg), "--format", "json"]);
    assert_eq!(serde_json::from_str::<Value>(&json).unwrap()["options"]["relative"], true);

    std::fs::write(&cfg, "band_edges = [0.9, 0.8, 0.7, 0.6]\n").unwrap();
    assert_eq!(run(&["evaluate", s(&m), "--config", s(&cfg)]).0, 2);
}

#[test]
fn scatter_identity_points_lie_on_diagonal() {
    let dir = tempfile::tempdir().unwrap();
    let m = self_manifest(dir.path(), &[shifted(0.0), shifted(3.0), shifted(9.0)]);
    let (code, csv, _) = run(&["scatter", s(&m), "--measure", "td", "--format", "csv"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    for r in rows {
        let f: Vec<&str> = r.split(',').collect();
        assert_eq!(f[2], f[3]);
    }
    let svg_path = dir.path().join("td.svg");
    let (code, out, _) = run(&["scatter", s(&m), "--measure", "td", "--out", s(&svg_path)]);
    assert_eq!((code, out.as_str()), (0, ""));
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert_eq!(svg.matches("<circle cx").count(), 3);
    let (_, again, _) = run(&["scatter", s(&m), "--measure", "td"]);
    assert_eq!(again, svg);
}

#[test]
fn scatter_overlay_and_unknown_measure() {
    let dir = tempfile::tempdir().unwrap();
    let m = self_manifest(dir.path(), &[shifted(0.0), shifted(3.0)]);
    let (code, csv, _) =
        run(&["scatter", s(&m), "--measure", "ga", "--format", "csv", "--overlay", s(&m), "--overlay-label", "adult"]);
    assert_eq!(code, 0);
    assert_eq!(csv.lines().filter(|l| l.starts_with("adult,")).count(), 2);

    let (code, _, err) = run(&["scatter", s(&m), "--measure", "nasal"]);
    assert_eq!(code, 2);
    assert!(err.contains("fa, osa, rfs, ga, hhd, td"), "{err}");
}

#[test]
fn synth_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let (code, out, _) = run(&["synth", "--out", s(d.path()), "--n", "36", "--sigma", "1", "--seed", "11"]);
        assert_eq!(code, 0);
        assert!(out.trim_end().ends_with("manifest.csv"));
    }
    for rel in ["manifest.csv", "gt/synth_000.pts70", "pred/synth_035.pts70"] {
        assert_eq!(std::fs::read(a.path().join(rel)).unwrap(), std::fs::read(b.path().join(rel)).unwrap(), "{rel}");
    }
    let (code, out, _) = run(&["validate", "-q", s(&a.path().join("gt/synth_007.pts70"))]);
    assert_eq!((code, out.as_str()), (0, ""));
}

#[test]
fn synth_rejects_bad_parameters() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["synth", "--out", s(dir.path()), "--sigma", "-0.5"]).0, 2);
    assert_eq!(run(&["synth", "--out", s(dir.path()), "--outliers", "1.5"]).0, 2);
    assert_eq!(run(&["synth", "--out", s(dir.path()), "--n", "ten"]).0, 2);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_symmetry");
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "f0.pts70", &f0());
    let ok = Command::new(bin).args(["measure", "--format", "csv", s(&p)]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout).lines().nth(1), Some("f0,0,0,1,90,0,0"));
    let usage = Command::new(bin).arg("frobnicate").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
    let data = Command::new(bin).args(["validate", "/nonexistent.pts70"]).output().unwrap();
    assert_eq!(data.status.code(), Some(1));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("evaluate"));
}
