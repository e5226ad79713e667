//! End-to-end tests of the binary: artifact layout, exit codes, CSV
//! round-trips, and byte-identical reruns.

use icgap::bounds::outer_region;
use icgap::fixtures;
use icgap::geometry::RatePair;
use icgap::schemes::{region_ge, region_r2, region_ra, region_ra_star, simple_split};
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_icgap"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn read_points(path: &Path) -> Vec<RatePair> {
    let text = fs::read_to_string(path).unwrap_or_else(|e| panic!("read {path:?}: {e}"));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("R1,R2"), "csv header in {path:?}");
    lines
        .map(|line| {
            let (a, b) = line
                .split_once(',')
                .unwrap_or_else(|| panic!("row {line:?}"));
            RatePair::new(a.parse().unwrap(), b.parse().unwrap())
        })
        .collect()
}

#[test]
fn verify_small_sweep_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "verify",
        "--dims",
        "1,1,1,1",
        "--trials",
        "25",
        "--seed",
        "7",
        "--output-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(
        code(&out),
        0,
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("verify.json")).unwrap()).unwrap();
    assert_eq!(report["failures"].as_array().unwrap().len(), 0);
    assert_eq!(report["trials"], 25);
}

#[test]
fn region_csvs_round_trip_against_the_generating_regions() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["regions", "--output-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);

    let ch = fixtures::example2();
    let outer = outer_region(&ch);
    let named = [
        ("outer.csv", outer.clone()),
        ("ge.csv", region_ge(&ch, &simple_split(&ch))),
        ("r2.csv", region_r2(&ch)),
        ("ra.csv", region_ra(&ch)),
        ("ra_star.csv", region_ra_star(&ch)),
    ];
    for (name, region) in &named {
        let points = read_points(&dir.path().join(name));
        assert!(!points.is_empty(), "{name} is empty");
        for p in &points {
            // Six printed decimals round by at most 5e-7, inside tol_geom.
            assert!(
                region.contains(*p),
                "{name} vertex {p:?} escaped its region"
            );
        }
    }
    for p in read_points(&dir.path().join("ge.csv")) {
        assert!(
            outer.contains(p),
            "ge vertex {p:?} outside the outer region"
        );
    }
}

#[test]
fn reruns_write_byte_identical_files() {
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&d1, &d2] {
        assert_eq!(
            code(&run(&[
                "regions",
                "--output-dir",
                d.path().to_str().unwrap()
            ])),
            0
        );
        assert_eq!(
            code(&run(&[
                "figures",
                "--output-dir",
                d.path().to_str().unwrap()
            ])),
            0
        );
        assert_eq!(
            code(&run(&[
                "bounds",
                "--output-dir",
                d.path().to_str().unwrap()
            ])),
            0
        );
    }
    let mut names: Vec<String> = fs::read_dir(d1.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names.len(), 17, "expected 17 artifacts, got {names:?}");
    for name in names {
        let a = fs::read(d1.path().join(&name)).unwrap();
        let b = fs::read(d2.path().join(&name)).unwrap();
        assert_eq!(a, b, "{name} differs between reruns");
    }
}

#[test]
fn malformed_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"dims\": [2, 3]").unwrap();
    let out = run(&["bounds", "--input", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let out = run(&["bounds", "--input", "{\"dims\": [1,1,1,1]}"]);
    assert_eq!(
        code(&out),
        1,
        "inline spec missing matrices must be rejected"
    );
    let out = run(&["no-such-command"]);
    assert_eq!(code(&out), 1);
    let out = run(&["--help"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn gap_check_certifies_the_bundled_channel() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["gap-check", "--output-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("gap_check.json")).unwrap())
            .unwrap();
    for side in ["coarse", "refined"] {
        assert_eq!(report[side]["certified"], true);
        assert!(report[side]["slack"].as_f64().unwrap() >= 0.0);
    }
    assert!(
        report["refined"]["gap1"].as_f64().unwrap() <= report["coarse"]["gap1"].as_f64().unwrap()
    );
}

#[test]
fn rate_split_recomposes_the_requested_target() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "rate-split",
        "--target",
        "8,2",
        "--output-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("rate_split.json")).unwrap())
            .unwrap();
    let get = |k: &str| report[k].as_f64().unwrap();
    assert!((get("r1u") + get("r1w") - 8.0).abs() <= 1e-6);
    assert!((get("r2u") + get("r2w") - 2.0).abs() <= 1e-6);

    let out = run(&[
        "rate-split",
        "--target",
        "40,0",
        "--output-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2, "unreachable target must exit 2");
}

#[test]
fn reciprocity_matches_on_the_bundled_channel() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["reciprocity", "--output-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("reciprocity.json")).unwrap())
            .unwrap();
    assert_eq!(report["matched"], true);
    assert!(report["max_delta"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn figures_bundle_is_complete_and_witnesses_hold() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["figures", "--output-dir", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let files = [
        "counterexample_prior_sum_bound.csv",
        "counterexample_achievable_sum_bound.csv",
        "counterexample_witness_point.csv",
        "example2_outer.csv",
        "example2_ge_simple.csv",
        "example2_ge_nocommon1.csv",
        "example2_ge_nocommon2.csv",
        "example2_r2.csv",
        "example2_timeshare_hull.csv",
        "example2_selection_witness.csv",
        "example2_timeshare_witness.csv",
    ];
    for name in files {
        assert!(dir.path().join(name).is_file(), "{name} missing");
    }

    // The witness point must break the withdrawn cap while staying under the
    // achievable weighted-sum line.
    let prior = read_points(&dir.path().join("counterexample_prior_sum_bound.csv"));
    let better = read_points(&dir.path().join("counterexample_achievable_sum_bound.csv"));
    let witness = read_points(&dir.path().join("counterexample_witness_point.csv"))[0];
    let claimed = prior[0].r2;
    let achievable = better[0].r2;
    assert!(claimed < achievable);
    assert!(2.0 * witness.r1 + witness.r2 > claimed);
    assert!(2.0 * witness.r1 + witness.r2 < achievable);

    // Time sharing between component schemes reaches outside the
    // seven-constraint region; the bundled witness vertex shows it.
    let r2 = region_r2(&fixtures::example2());
    let ts = read_points(&dir.path().join("example2_timeshare_witness.csv"))[0];
    assert!(
        !r2.contains(ts),
        "timeshare witness {ts:?} is not a witness"
    );
    let hull = read_points(&dir.path().join("example2_timeshare_hull.csv"));
    assert!(
        hull.iter()
            .any(|p| (p.r1 - ts.r1).abs() < 1e-9 && (p.r2 - ts.r2).abs() < 1e-9),
        "witness must be a hull vertex"
    );
}
