use std::process::{Command, Output};

use serde_json::Value;

fn gessel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gessel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = gessel(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn entry(v: &Value, x: i64, y: i64, n: u64) -> Option<String> {
    v["entries"]
        .as_array()?
        .iter()
        .find(|e| e["x"] == x && e["y"] == y && e["n"] == n)
        .map(|e| e["count"].as_str().unwrap().to_string())
}

const SQUARE: &str = "0,1;0,-1;1,0;-1,0";

#[test]
fn slit_square_lattice_has_five_walks_to_one_zero_in_three_steps() {
    let v = json(&["slit", "--steps", SQUARE, "--trunc", "7"]);
    assert_eq!(v["trunc"], 7);
    assert!(v["model"].as_str().unwrap().starts_with("slit/s0"));
    assert_eq!(entry(&v, 1, 0, 3).as_deref(), Some("5"));
    assert_eq!(entry(&v, 1, 0, 1).as_deref(), Some("1"));
}

#[test]
fn entries_are_sorted_and_output_is_deterministic() {
    let args = [
        "gf",
        "--steps",
        SQUARE,
        "--trunc",
        "5",
        "--constraint",
        "avoid-halfline",
    ];
    let a = gessel(&args);
    let b = gessel(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let keys: Vec<(u64, i64, i64)> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            (
                e["n"].as_u64().unwrap(),
                e["x"].as_i64().unwrap(),
                e["y"].as_i64().unwrap(),
            )
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn gf_agrees_with_oracle() {
    for cons in [
        &[][..],
        &[
            "--constraint",
            "upper-halfplane",
            "--constraint",
            "avoid-halfline",
        ][..],
    ] {
        let mut a = vec!["gf", "--steps", SQUARE, "--trunc", "6"];
        a.extend_from_slice(cons);
        let mut b = vec!["oracle", "--steps", SQUARE, "--trunc", "6"];
        b.extend_from_slice(cons);
        assert_eq!(json(&a)["entries"], json(&b)["entries"]);
    }
}

#[test]
fn catalan_counts() {
    let v = json(&["catalan", "--r", "1", "--trunc", "8"]);
    let counts: Vec<String> = (0..=8)
        .step_by(2)
        .map(|n| entry(&v, 0, 0, n).unwrap())
        .collect();
    assert_eq!(counts, ["1", "1", "2", "5", "14"]);
    assert_eq!(entry(&v, 0, 0, 3), None);
}

#[test]
fn csv_output_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let out = gessel(&[
        "catalan",
        "--trunc",
        "4",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text, "x,y,n,count\n0,0,0,1\n0,0,2,1\n0,0,4,2\n");
}

#[test]
fn verify_lists_known_mismatches_and_passes() {
    let out = gessel(&["verify", "--trunc", "8"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    let line = text
        .lines()
        .find(|l| l.contains("closed-form-a10"))
        .expect("closed-form line");
    assert!(line.starts_with("KNOWN-MISMATCH"), "{line}");
    assert!(line.contains("21/4"));
    assert!(text.contains("0 failed, 2 known mismatches"));
    assert!(!text.lines().any(|l| l.starts_with("FAIL")));
}

#[test]
fn verify_json_report() {
    let v = json(&["verify", "--trunc", "5", "--format", "json"]);
    assert_eq!(v["passed"], true);
    let statuses: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "known-mismatch")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(statuses, ["closed-form-a10", "printed-y-expansion"]);
}

#[test]
fn halfplane_reports_the_count_relation() {
    let v = json(&["halfplane", "--steps", SQUARE, "--trunc", "6"]);
    assert_eq!(v["p"], 1);
    let row = &v["checks"][2];
    assert_eq!(row["n"], 3);
    assert_eq!(row["restricted"], "3");
    assert_eq!(row["unrestricted"], "9");
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["holds"] == true));
    assert_eq!(entry(&v, 1, 0, 3).as_deref(), Some("3"));
}

#[test]
fn kernel_q2_compares_with_oracle() {
    let v = json(&["kernel", "--model", "q2", "--trunc", "6"]);
    let s10: Vec<Option<String>> = (1..=3).map(|n| entry(&v, 1, 0, n)).collect();
    assert_eq!(s10, [Some("1".into()), None, Some("1".into())]);
    let third = &v["comparison"][2];
    assert_eq!(third["n"], 3);
    assert_eq!(third["closed_form"], "21/4");
    assert_eq!(third["oracle"], "1");
    assert_eq!(third["status"], "known-mismatch");
    assert_eq!(v["y_expansion"][0]["literal"], "2*b");
}

#[test]
fn factor_emits_three_parts() {
    let v = json(&[
        "factor",
        "--steps",
        "1,0;-1,0",
        "--grading",
        "x",
        "--monoid",
        "axis",
        "--trunc",
        "4",
    ]);
    let parts: std::collections::BTreeSet<&str> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["part"].as_str().unwrap())
        .collect();
    assert_eq!(
        parts.into_iter().collect::<Vec<_>>(),
        ["minus", "plus", "zero"]
    );
    let zero_n2 = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["part"] == "zero" && e["n"] == 2)
        .unwrap();
    assert_eq!(zero_n2["count"], "1");
}

#[test]
fn strip_collapses_to_horizontal_steps() {
    let v = json(&[
        "strip", "--steps", SQUARE, "-d", "0", "-f", "0", "--trunc", "4",
    ]);
    let gamma: Vec<&Value> = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["part"] == "gamma" && e["n"] == 4)
        .collect();
    let total: u64 = gamma
        .iter()
        .map(|e| e["count"].as_str().unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 16);
}

#[test]
fn malformed_input_is_rejected() {
    for args in [
        &["slit", "--steps", "0,1;0", "--trunc", "3"][..],
        &["slit", "--steps", "0,1;0,1", "--trunc", "3"],
        &["slit", "--steps", "", "--trunc", "3"],
        &[
            "gf",
            "--steps",
            SQUARE,
            "--trunc",
            "3",
            "--constraint",
            "sideways",
        ],
        &["gf", "--steps", SQUARE, "--trunc", "-1"],
        &[
            "factor",
            "--steps",
            SQUARE,
            "--trunc",
            "3",
            "--grading",
            "z",
        ],
        &["kernel", "--model", "q3", "--trunc", "3"],
        &["nonsense"],
    ] {
        let out = gessel(args);
        assert!(!out.status.success(), "{args:?} should fail");
        assert!(!out.stderr.is_empty(), "{args:?} should explain");
    }
}

#[test]
fn halfplane_without_positive_endpoint_fails() {
    let out = gessel(&["halfplane", "--steps", "-1,0;0,1", "--trunc", "4"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}
