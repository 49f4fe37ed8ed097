use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rrvoa_cli::DiskCache;
use rrvoa_core::principal::cells;
use rrvoa_core::{FockVector, GradedComponentBasis, Label};

fn rrvoa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rrvoa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn trivial_character_is_one() {
    let o = rrvoa(&[
        "character",
        "--module",
        "vacuum",
        "--max-charge",
        "0",
        "--max-weight",
        "5",
        "--format",
        "text",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).lines().any(|l| l == "character_vacuum = 1"),
        "{}",
        stdout(&o)
    );

    let o = rrvoa(&[
        "character",
        "--module",
        "vacuum",
        "--max-charge",
        "0",
        "--max-weight",
        "5",
    ]);
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(
        json["series"]["character_vacuum"]["terms"],
        serde_json::json!([[0, 0, "1/1"]])
    );
}

#[test]
fn report_has_the_documented_keys() {
    let o = rrvoa(&["recursion", "--max-weight", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in [
        "command",
        "config",
        "checks",
        "series",
        "elapsed_ms",
        "version",
    ] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
    assert_eq!(json["command"], "recursion");
    assert_eq!(json["elapsed_ms"], serde_json::Value::Null);
    assert_eq!(json["checks"][0]["name"], "recursion_residual");
    assert_eq!(json["checks"][0]["status"], "pass");
    assert_eq!(json["version"], rrvoa_core::CODE_VERSION);

    let timed = rrvoa(&["recursion", "--max-weight", "10", "--timing"]);
    let json: serde_json::Value = serde_json::from_slice(&timed.stdout).unwrap();
    assert!(json["elapsed_ms"].is_u64());
}

#[test]
fn exactness_lists_every_bidegree() {
    let o = rrvoa(&["exactness", "--max-weight", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let cells = json["cells"].as_array().unwrap();
    // middles (r, s) with r <= s <= 8
    assert_eq!(cells.len(), (0..=8).map(|s| s + 1).sum::<usize>());
    assert!(cells.iter().all(|c| c["passed"] == true));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["frobnicate"],
        vec!["character", "--max-weight", "-1"],
        vec!["character", "--jobs", "0"],
        vec!["character", "--module", "adjoint"],
        vec!["character", "--unknown"],
        vec![],
    ] {
        let o = rrvoa(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn tampered_cache_fails_verification_with_exit_1() {
    // internally consistent entry claiming every image vanishes
    let dir = tempfile::tempdir().unwrap();
    let cache = DiskCache::new(Some(dir.path().to_path_buf()));
    let at = cells(Label::Vacuum, 2, 4 * 6)
        .into_iter()
        .find(|b| b.charge2 == 4 && b.weight4 == 24)
        .unwrap();
    let real = rrvoa_core::principal::component_basis(Label::Vacuum, at).unwrap();
    let fake = GradedComponentBasis {
        spanning: real
            .spanning
            .iter()
            .map(|(m, _)| (m.clone(), FockVector::zero()))
            .collect(),
        reduced: Vec::new(),
        dim: 0,
        ..real
    };
    fs::write(
        cache.entry_path(Label::Vacuum, at).unwrap(),
        serde_json::to_string(&fake).unwrap(),
    )
    .unwrap();

    let d = dir.path().to_str().unwrap();
    let o = rrvoa(&[
        "character",
        "--max-charge",
        "2",
        "--max-weight",
        "6",
        "--cache-dir",
        d,
    ]);
    assert_eq!(o.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let failed: Vec<_> = json["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .collect();
    assert!(!failed.is_empty());
    assert!(failed[0]["counterexample"]
        .as_str()
        .unwrap()
        .contains("charge2=4, weight4=24"));
}

fn run_all(jobs: &str, format: &str, cache: Option<&Path>) -> Vec<u8> {
    let mut args = vec![
        "all",
        "--max-weight",
        "8",
        "--max-charge",
        "3",
        "--operator-weight",
        "3",
        "--format",
        format,
        "--jobs",
        jobs,
    ];
    let c;
    if let Some(p) = cache {
        c = p.to_str().unwrap().to_string();
        args.extend(["--cache-dir", &c]);
    }
    let o = rrvoa(&args);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    o.stdout
}

#[test]
fn output_is_identical_across_jobs_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    for format in ["json", "csv", "text"] {
        let base = run_all("1", format, None);
        assert_eq!(base, run_all("4", format, None), "{format}");
        assert_eq!(
            base,
            run_all("3", format, Some(dir.path())),
            "{format} cold cache"
        );
        assert_eq!(
            base,
            run_all("2", format, Some(dir.path())),
            "{format} warm cache"
        );
    }
}

#[test]
fn csv_is_a_dimension_table() {
    let o = rrvoa(&[
        "character",
        "--module",
        "charged",
        "--max-charge",
        "2",
        "--max-weight",
        "6",
        "--format",
        "csv",
    ]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("label,charge2,weight4,dim"));
    assert!(text.contains("charged,1,1,1\n"));
    assert!(text.contains("vacuum,0,0,1\n"));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = rrvoa(&[
        "hilbert",
        "--max-weight",
        "8",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(json["command"], "hilbert");
    assert!(json["series"]["hilbert"]["terms"].is_array());
}
