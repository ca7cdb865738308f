//! End-to-end tests of the command-line surface: exit codes, output
//! formats, round-trips, and determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bmgeo"))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn lp2(dir: &Path) -> PathBuf {
    write(dir, "lp2.json", r#"{"kind":"lp","p":2,"dim":2}"#)
}

fn lpinf(dir: &Path) -> PathBuf {
    write(dir, "lpinf.json", r#"{"kind":"lp","p":"inf","dim":2}"#)
}

fn lp1(dir: &Path) -> PathBuf {
    write(dir, "lp1.json", r#"{"kind":"lp","p":1,"dim":2}"#)
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn dist_disk_square_is_sqrt2() {
    let dir = tempfile::tempdir().unwrap();
    let a = lp2(dir.path());
    let b = lpinf(dir.path());
    let out = bin()
        .arg("dist")
        .args([a.to_str().unwrap(), b.to_str().unwrap()])
        .args(["--starts", "12", "--seed", "7"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout_json(&out);
    let estimate = report["estimate"].as_f64().unwrap();
    assert!((estimate - 2f64.sqrt()).abs() < 2e-3, "estimate {estimate}");
}

#[test]
fn dist_self_fixed_position_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let a = lpinf(dir.path());
    let out = bin()
        .arg("dist")
        .args([a.to_str().unwrap(), a.to_str().unwrap()])
        .arg("--fixed-position")
        .output()
        .unwrap();
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["estimate"].as_f64().unwrap(), 1.0);
    assert_eq!(report["starts_used"].as_i64().unwrap(), 0);
}

#[test]
fn dist_diamond_square_is_isometric() {
    let dir = tempfile::tempdir().unwrap();
    let a = lp1(dir.path());
    let b = lpinf(dir.path());
    let out = bin()
        .arg("dist")
        .args([a.to_str().unwrap(), b.to_str().unwrap()])
        .args(["--starts", "16", "--seed", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report = stdout_json(&out);
    let estimate = report["estimate"].as_f64().unwrap();
    assert!((estimate - 1.0).abs() < 1e-3, "estimate {estimate}");
}

#[test]
fn dist_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = lp2(dir.path());
    let b = lpinf(dir.path());
    let run = || {
        bin()
            .arg("dist")
            .args([a.to_str().unwrap(), b.to_str().unwrap()])
            .args(["--starts", "8", "--seed", "11"])
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn dist_malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{ not json");
    let b = lpinf(dir.path());
    let out = bin()
        .arg("dist")
        .args([bad.to_str().unwrap(), b.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn geodesic_export_and_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let a = lp2(dir.path());
    let b = lpinf(dir.path());
    let out_dir = dir.path().join("path");
    let out = bin()
        .arg("geodesic")
        .args([a.to_str().unwrap(), b.to_str().unwrap()])
        .args(["--kind", "intersection", "--fixed-position"])
        .args(["--out", out_dir.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = stdout_json(&out);
    assert!((summary["d"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-9);

    // 11 bodies + manifest + 11 svgs.
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["lambdas"].as_array().unwrap().len(), 11);
    assert!(out_dir.join("body_0.500000.json").exists());
    assert!(out_dir.join("body_0.500000.svg").exists());

    let verify = bin()
        .arg("verify")
        .arg(out_dir.join("manifest.json").to_str().unwrap())
        .args(["--partitions", "6"])
        .output()
        .unwrap();
    assert!(
        verify.status.success(),
        "{}",
        String::from_utf8_lossy(&verify.stderr)
    );
}

#[test]
fn verify_detects_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let a = lp2(dir.path());
    let b = lpinf(dir.path());
    let out_dir = dir.path().join("path");
    let out = bin()
        .arg("geodesic")
        .args([a.to_str().unwrap(), b.to_str().unwrap()])
        .args(["--kind", "hull", "--fixed-position"])
        .args(["--out", out_dir.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());

    // Replace the midpoint body by the outer ball.
    fs::copy(
        out_dir.join("body_1.000000.json"),
        out_dir.join("body_0.500000.json"),
    )
    .unwrap();
    let verify = bin()
        .arg("verify")
        .arg(out_dir.join("manifest.json").to_str().unwrap())
        .args(["--partitions", "0"])
        .output()
        .unwrap();
    assert_eq!(verify.status.code(), Some(3));
    let msg = String::from_utf8_lossy(&verify.stderr);
    assert!(msg.contains("0.5"), "missing interval in: {msg}");
}

#[test]
fn geodesic_endpoint_grid_only() {
    let dir = tempfile::tempdir().unwrap();
    let a = lp1(dir.path());
    let b = lpinf(dir.path());
    let out_dir = dir.path().join("path");
    let out = bin()
        .arg("geodesic")
        .args([a.to_str().unwrap(), b.to_str().unwrap()])
        .args(["--kind", "hull", "--fixed-position"])
        .args(["--grid-list", "0,1"])
        .args(["--out", out_dir.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out_dir.join("body_0.000000.json").exists());
    assert!(out_dir.join("body_1.000000.json").exists());
    assert!(!out_dir.join("body_0.500000.json").exists());
}

#[test]
fn hull_and_intersection_paths_differ_inside() {
    let dir = tempfile::tempdir().unwrap();
    let a = lp2(dir.path());
    let b = lpinf(dir.path());
    let mut mids = Vec::new();
    for kind in ["hull", "intersection"] {
        let out_dir = dir.path().join(kind);
        let out = bin()
            .arg("geodesic")
            .args([a.to_str().unwrap(), b.to_str().unwrap()])
            .args(["--kind", kind, "--fixed-position"])
            .args(["--grid-list", "0,0.5,1"])
            .args(["--out", out_dir.to_str().unwrap()])
            .output()
            .unwrap();
        assert!(out.status.success());
        mids.push((
            fs::read_to_string(out_dir.join("body_0.500000.json")).unwrap(),
            fs::read_to_string(out_dir.join("body_0.000000.json")).unwrap(),
            fs::read_to_string(out_dir.join("body_1.000000.json")).unwrap(),
        ));
    }
    // Distinct interiors, gauge-identical endpoints.
    let parse = |s: &str| bmgeo::io::body_from_json(s).unwrap();
    let (hull_mid, hull_start, hull_end) = (&mids[0].0, &mids[0].1, &mids[0].2);
    let (int_mid, int_start, int_end) = (&mids[1].0, &mids[1].1, &mids[1].2);
    assert!(!parse(hull_mid).gauge_equal(&parse(int_mid), 1e-6).unwrap());
    assert!(parse(hull_start)
        .gauge_equal(&parse(int_start), 1e-9)
        .unwrap());
    assert!(parse(hull_end).gauge_equal(&parse(int_end), 1e-9).unwrap());
}

#[test]
fn invariant_of_square_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let square = write(
        dir.path(),
        "square.json",
        r#"{"kind":"polygon","vertices":[[1,1],[-1,1]]}"#,
    );
    let out = bin()
        .arg("invariant")
        .arg(square.to_str().unwrap())
        .output()
        .unwrap();
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["ratios"].as_array().unwrap().len(), 1);
    assert_eq!(report["edges"].as_i64().unwrap(), 4);
}

#[test]
fn invariant_is_map_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let hexagon = write(
        dir.path(),
        "hexagon.json",
        r#"{"kind":"polygon","vertices":[[1,0],[0.6,0.8],[-0.4,0.9]]}"#,
    );
    let map = write(dir.path(), "map.json", "[[1.25, 0.5], [-0.25, 0.75]]");
    let plain = bin()
        .arg("invariant")
        .arg(hexagon.to_str().unwrap())
        .output()
        .unwrap();
    let mapped = bin()
        .arg("invariant")
        .arg(hexagon.to_str().unwrap())
        .args(["--map", map.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(plain.status.success() && mapped.status.success());
    let a = stdout_json(&plain);
    let b = stdout_json(&mapped);
    let ra = a["ratios"].as_array().unwrap();
    let rb = b["ratios"].as_array().unwrap();
    assert_eq!(ra.len(), rb.len());
    for (x, y) in ra.iter().zip(rb) {
        let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
        assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
    }
    // Check the hexagon's marker ratio 8/9 is present.
    assert!(ra
        .iter()
        .any(|r| (r.as_f64().unwrap() - 8.0 / 9.0).abs() < 1e-9));
}

#[test]
fn invariant_rejects_gauge_body() {
    let dir = tempfile::tempdir().unwrap();
    let a = lp2(dir.path());
    let out = bin()
        .arg("invariant")
        .arg(a.to_str().unwrap())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn family_produces_certified_members() {
    let dir = tempfile::tempdir().unwrap();
    let a = lp2(dir.path());
    let b = lpinf(dir.path());
    let out_dir = dir.path().join("family");
    let out = bin()
        .arg("family")
        .args([a.to_str().unwrap(), b.to_str().unwrap()])
        .args(["--lambda", "0.5", "--count", "3", "--fixed-position"])
        .args(["--out", out_dir.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let family: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("family.json")).unwrap()).unwrap();
    let members = family["members"].as_array().unwrap();
    assert_eq!(members.len(), 3);
    for m in members {
        assert!(m["certificate"]["sandwich_ok"].as_bool().unwrap());
        assert_eq!(m["certificate"]["new_faces"].as_array().unwrap().len(), 2);
        assert!(m["certificate"]["ratio"].as_f64().unwrap() > 0.0);
    }
}

#[test]
fn family_at_extreme_lambda_fails_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let a = lp2(dir.path());
    let b = lpinf(dir.path());
    let out = bin()
        .arg("family")
        .args([a.to_str().unwrap(), b.to_str().unwrap()])
        .args(["--lambda", "0.9999999", "--count", "2", "--fixed-position"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn family_attach_face_3d() {
    let dir = tempfile::tempdir().unwrap();
    let oct = write(dir.path(), "oct.json", r#"{"kind":"lp","p":1,"dim":3}"#);
    let cube = write(dir.path(), "cube.json", r#"{"kind":"lp","p":"inf","dim":3}"#);
    // Plan a valid placement with the library, then drive the CLI with it.
    let pair = bmgeo::distance::canonical_position_fixed(
        &bmgeo::io::read_body(&oct).unwrap(),
        &bmgeo::io::read_body(&cube).unwrap(),
    )
    .unwrap();
    let site = bmgeo::families::face_attachment_site(&pair, 0.5).unwrap();
    let spec = bmgeo::families::regular_face_polygon(&site, 4).unwrap();
    let face = write(
        dir.path(),
        "face.json",
        &serde_json::to_string(&spec).unwrap(),
    );
    let out = bin()
        .arg("family")
        .args([oct.to_str().unwrap(), cube.to_str().unwrap()])
        .args(["--lambda", "0.5", "--fixed-position"])
        .args(["--attach-face", face.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let family = stdout_json(&out);
    let census = family["members"][0]["certificate"]["facet_census"]
        .as_array()
        .unwrap();
    assert!(census.iter().any(|c| c.as_i64().unwrap() == 4));
}
