use std::process::{Command, Output};

use serde_json::Value;

const ANCHORS: &[&str] = &[
    "Theorem ExplicitGauss",
    "Theorem explicit",
    "Theorem spherediametersharp",
    "Theorem generaldiameter",
    "Theorem generalKloosterman",
    "Theorem goodthm",
    "Theorem main",
    "Theorem twodistance",
    "Lemma colorsize",
    "Lemma intersection2",
    "Lemma complete",
    "Corollary pizdatayaprogressiya",
    "eq (square)",
    "eq (decay)",
    "eq (averagedecay)",
    "eq (startaverage)",
    "eq (zeroterm)",
    "eq (plancherel)",
    "eq (inversion)",
    "eq (ftdef)",
    "eq (zero)",
    "eq (uniformity)",
    "eq (completeness)",
    "Remark: canonical additive character",
    "Remark: quadratic character",
    "invented",
    "exploratory",
];

fn ffdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffdist"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn gauss_over_f9_is_three() {
    let out = ffdist(&["gauss", "--q", "9"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["command"], "gauss");
    assert_eq!(r["result"]["value_re"].as_f64(), Some(3.0));
    assert_eq!(r["pass"], true);
}

#[test]
fn planar_diameter_over_f5_is_four_for_every_color() {
    let r = json(&ffdist(&[
        "diameter",
        "--q",
        "5",
        "--d",
        "2",
        "--all-colors",
    ]));
    let rows = r["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for row in rows {
        assert_eq!(row["diameter"], 4);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(ffdist(&["--help"]).status.code(), Some(0));
    assert_eq!(ffdist(&["gauss"]).status.code(), Some(2));
    assert_eq!(ffdist(&["gauss", "--q", "15"]).status.code(), Some(2));
    assert_eq!(
        ffdist(&["sphere", "--q", "4", "--d", "2", "--t", "1"])
            .status
            .code(),
        Some(2)
    );
    let guard = ffdist(&["verify-all", "--max-q", "1000000"]);
    assert_eq!(guard.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&guard.stderr).contains("--force"));
    assert_eq!(
        ffdist(&["diameter", "--q", "1031", "--d", "2", "--color", "1"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn sphere_brute_and_formula_agree() {
    let r = json(&ffdist(&[
        "sphere", "--q", "7", "--d", "3", "--t", "0", "--brute",
    ]));
    assert_eq!(r["result"]["formula"], 49);
    assert_eq!(r["result"]["brute"], 49);
    assert_eq!(r["result"]["match"], true);
}

#[test]
fn point_set_files_drive_salem_and_configs() {
    let dir = std::env::temp_dir().join(format!("ffdist-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("circle.txt");
    // the unit circle in F_5^2, ranks x + 5y
    std::fs::write(&path, "# unit circle\n1\n4\n5\n20\n").unwrap();
    let arg = format!("file:{}", path.display());
    let r = json(&ffdist(&["salem", "--q", "5", "--d", "2", "--set", &arg]));
    assert_eq!(r["result"]["set_size"], 4);
    assert!(r["result"]["salem_constant"].as_f64().unwrap() > 0.0);

    let r = json(&ffdist(&[
        "configs",
        "--q",
        "5",
        "--d",
        "2",
        "--k",
        "2",
        "--edges",
        "1-2:2",
        "--set",
        &arg,
        "--witnesses",
        "3",
    ]));
    // pairs on the unit circle at squared distance 2: (1,0)-(0,±1) and so on
    assert_eq!(r["result"]["count"], 8);
    assert_eq!(r["result"]["witnesses"].as_array().unwrap().len(), 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn formats_and_output_file() {
    let csv = ffdist(&[
        "kloosterman",
        "--q",
        "7",
        "--twist",
        "quadratic",
        "--format",
        "csv",
    ]);
    assert_eq!(csv.status.code(), Some(0));
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(
        text.lines().nth(1),
        Some("name,paper_anchor,expected,observed,tolerance,pass")
    );

    let path = std::env::temp_dir().join(format!("ffdist-out-{}.json", std::process::id()));
    let out = ffdist(&["field-info", "--q", "27", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["result"]["modulus"], serde_json::json!([1, 0, 2, 1]));
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn deterministic_with_seed() {
    let args = [
        "pseudo-random-report",
        "--q",
        "7",
        "--d",
        "2",
        "--k",
        "3",
        "--edges",
        "1-2:1,2-3:1",
        "--trials",
        "5",
        "--seed",
        "9",
    ];
    let a = ffdist(&args);
    let b = ffdist(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["meta"]["seed"], 9);
    assert_eq!(json(&a)["meta"]["timestamp"], Value::Null);
    let stamped = json(&ffdist(&["gauss", "--q", "5", "--timestamp"]));
    assert!(stamped["meta"]["timestamp"].is_string());
}

#[test]
fn every_anchor_is_known() {
    let out = ffdist(&["verify-all", "--max-q", "5", "--max-d", "3", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let checks = r["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        let anchor = c["paper_anchor"].as_str().unwrap();
        assert!(ANCHORS.contains(&anchor), "unknown anchor {anchor:?}");
    }
}
