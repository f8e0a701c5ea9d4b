//! End-to-end tests of the `nsurf` binary: output formats, exit codes, and
//! artifact layout. Everything runs against the shipped data files or small
//! inputs written to a temp directory.

mod common;

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use common::snapshot;
use nsurf::coords::{total_weight, vertex_link, NormalVector};
use nsurf::perm::Perm4;
use nsurf::tri::{build_skeleton, Gluing, Triangulation};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn nsurf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nsurf"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn validate_prints_skeleton_counts() {
    let out = nsurf(&["validate", data("pentachoron.tri").to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("t=5 V=5 E=10 F=10"), "got: {}", text);
    assert!(text.contains("edge degrees: 3 3 3 3 3 3 3 3 3 3"), "got: {}", text);
    assert!(text.contains("orientable: yes"), "got: {}", text);
}

#[test]
fn validate_accepts_non_orientable_input() {
    let p = |digits: [u8; 4]| Perm4::new(digits).unwrap();
    let tri = Triangulation::new(vec![
        [
            Gluing { to: 1, perm: p([0, 1, 2, 3]) },
            Gluing { to: 1, perm: p([0, 1, 2, 3]) },
            Gluing { to: 1, perm: p([1, 2, 3, 0]) },
            Gluing { to: 1, perm: p([3, 0, 1, 2]) },
        ],
        [
            Gluing { to: 0, perm: p([0, 1, 2, 3]) },
            Gluing { to: 0, perm: p([0, 1, 2, 3]) },
            Gluing { to: 0, perm: p([1, 2, 3, 0]) },
            Gluing { to: 0, perm: p([3, 0, 1, 2]) },
        ],
    ])
    .unwrap();
    assert!(!tri.is_orientable());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("twisted.tri");
    std::fs::write(&path, tri.serialize()).unwrap();

    let out = nsurf(&["validate", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("orientable: no"));
}

#[test]
fn unglued_faces_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("open.tri");
    std::fs::write(&path, "tet 0: 0(1023) 0(1023) 0(0132) bdry\n").unwrap();

    let out = nsurf(&["validate", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr(&out).contains("unglued"), "got: {}", stderr(&out));
}

#[test]
fn missing_input_is_an_input_error() {
    let out = nsurf(&["validate", "/nonexistent/thing.tri"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn unknown_subcommands_are_usage_errors() {
    let out = nsurf(&["frobnicate"]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn help_exits_cleanly() {
    let out = nsurf(&["--help"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("Usage"));
}

#[test]
fn one_normal_basis_includes_every_vertex_link() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("run");
    let out = nsurf(&[
        "fundamental",
        data("pentachoron.tri").to_str().unwrap(),
        "--mode",
        "1n",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("component 0: 15 surfaces"));

    let files = snapshot(&out_dir);
    assert!(files.contains_key("manifest.txt"));
    assert!(files.contains_key("input.tri"));
    let vectors: Vec<NormalVector> = files
        .iter()
        .filter(|(name, _)| name.starts_with("fundamental/") && name.ends_with(".vec"))
        .map(|(_, bytes)| NormalVector::parse(std::str::from_utf8(bytes).unwrap()).unwrap())
        .collect();
    assert_eq!(vectors.len(), 15);

    let tri = Triangulation::parse(&std::fs::read_to_string(data("pentachoron.tri")).unwrap())
        .unwrap();
    let sk = build_skeleton(&tri);
    for vc in 0..sk.vertex_count {
        let link = vertex_link(&sk, tri.tet_count(), vc);
        assert!(
            vectors.iter().any(|v| v.coords() == link.coords()),
            "vertex link {} missing from the basis",
            vc
        );
    }

    // Every manifest line is "digest  path" with a 64-hex digest.
    let manifest = std::str::from_utf8(&files["manifest.txt"]).unwrap();
    for line in manifest.lines() {
        let (digest, path) = line.split_once("  ").expect("two-space separator");
        assert_eq!(digest.len(), 64);
        assert!(digest.chars().all(|c| c.is_ascii_hexdigit()));
        assert!(files.contains_key(path), "manifest names a missing file: {}", path);
    }
}

#[test]
fn two_normal_basis_is_larger_and_includes_octagons() {
    let out = nsurf(&[
        "fundamental",
        data("pentachoron.tri").to_str().unwrap(),
        "--mode",
        "2n",
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("component 0: 70 surfaces"), "got: {}", text);
    let with_octagons = text
        .lines()
        .filter(|l| l.contains(" octagons ") && !l.ends_with("octagons 0"))
        .count();
    assert!(with_octagons > 0, "expected octagon-bearing surfaces");
}

#[test]
fn hilbert_cap_failures_leave_no_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("capped");
    let out = nsurf(&[
        "fundamental",
        data("pentachoron.tri").to_str().unwrap(),
        "--hilbert-cap",
        "1",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 3, "stderr: {}", stderr(&out));
    assert!(!out_dir.exists(), "failed run must not write partial output");
}

#[test]
fn bounds_prints_symbolic_and_decimal_forms() {
    let out = nsurf(&["bounds", "--tets", "5"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("tets: 5"));
    assert!(text.contains("bound: 2^4900"));
    let decimal = text
        .lines()
        .find_map(|l| l.strip_prefix("decimal: "))
        .expect("decimal line");
    use num_bigint::BigUint;
    assert_eq!(decimal, (BigUint::from(1u8) << 4900u32).to_string());
}

#[test]
fn bounds_bridge_finds_the_least_tetrahedron_count() {
    let out = nsurf(&["bounds", "--bridge", "4"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("least tets: 1"), "got: {}", text);
    assert!(text.contains("bound: 2^196"), "got: {}", text);

    let out = nsurf(&["bounds", "--bridge", "2^196"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("least tets: 2"));
}

#[test]
fn bounds_requires_exactly_one_flag() {
    assert_eq!(exit_code(&nsurf(&["bounds"])), 2);
    assert_eq!(
        exit_code(&nsurf(&["bounds", "--tets", "2", "--bridge", "4"])),
        2
    );
}

#[test]
fn decompose_reports_multiplicities() {
    let tri = Triangulation::parse(&std::fs::read_to_string(data("pentachoron.tri")).unwrap())
        .unwrap();
    let sk = build_skeleton(&tri);
    let link = vertex_link(&sk, tri.tet_count(), 0);
    let doubled = link.haken_sum(&link).unwrap();
    assert_eq!(total_weight(&doubled, &tri).unwrap(), 8u32.into());

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("doubled.vec");
    std::fs::write(&path, doubled.serialize()).unwrap();

    let out = nsurf(&[
        "decompose",
        data("pentachoron.tri").to_str().unwrap(),
        "--vector",
        path.to_str().unwrap(),
        "--mode",
        "1n",
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let element_lines: Vec<&str> = text.lines().filter(|l| l.contains("x element")).collect();
    assert_eq!(element_lines.len(), 1, "got: {}", text);
    assert!(
        element_lines[0].trim_start().starts_with("2 x element"),
        "got: {}",
        text
    );
    assert!(element_lines[0].contains("(weight 4)"), "got: {}", text);
    assert!(text.contains("a valid decomposition; sums to the input exactly"));
}

#[test]
fn sigma_reports_components_and_maximality() {
    let out = nsurf(&["sigma", data("one_tet_sphere.tri").to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("sphere system:"), "got: {}", text);
    assert!(text.contains("maximality verdict: pass"), "got: {}", text);
}

#[test]
fn tilde_sigma_reruns_are_byte_identical() {
    let input = data("doubled_tetrahedron.tri");
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let second = dir.path().join("second");
    for out_dir in [&first, &second] {
        let out = nsurf(&[
            "tilde-sigma",
            input.to_str().unwrap(),
            "--out",
            out_dir.to_str().unwrap(),
        ]);
        assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
        assert!(stdout(&out).contains("bound verdict: pass"));
    }
    let a = snapshot(&first);
    let b = snapshot(&second);
    assert_eq!(a, b, "reruns must produce identical artifacts");
}
