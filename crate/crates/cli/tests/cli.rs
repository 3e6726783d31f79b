use std::path::PathBuf;
use std::process::{Command, Output};

fn fphom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fphom")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = fphom(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("golden").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn golden_outputs() {
    let cases: [(&[&str], &str); 5] = [
        (&["tensor-table", "--algebra", "example-5.1", "--structure", "commutative"], "tensor-table-example-5.1.md"),
        (&["tensor-table", "--algebra", "example-5.2", "--structure", "hopf"], "tensor-table-example-5.2.md"),
        (&["classify", "--algebra", "example-5.1"], "classify-example-5.1.md"),
        (&["classify", "--algebra", "example-5.2"], "classify-example-5.2.md"),
        (&["functors", "--algebra", "example-5.1", "--budget", "4"], "functors-example-5.1.md"),
    ];
    for (args, file) in cases {
        assert_eq!(stdout(args), golden(file), "{file}");
    }
}

#[test]
fn repeated_runs_are_identical() {
    for args in [
        &["classify", "--algebra", "example-5.2", "--seed", "11"][..],
        &["indecs", "--algebra", "group:3:3", "--registry", "auto:3", "--seed", "5"][..],
        &["tensor-table", "--algebra", "product:2:2", "--format", "json"][..],
    ] {
        assert_eq!(stdout(args), stdout(args));
    }
}

fn md_cells(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| l.starts_with('|') && !l.starts_with("|---"))
        .map(|l| l.trim_matches('|').split(" | ").map(|c| c.trim().to_string()).collect())
        .collect()
}

fn csv_cells(text: &str) -> Vec<Vec<String>> {
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(body.as_bytes());
    r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect()
}

fn json_cells(text: &str) -> Vec<Vec<String>> {
    let v: serde_json::Value = serde_json::from_str(text).unwrap();
    let mut out = Vec::new();
    for t in v.as_array().unwrap() {
        let row = |r: &serde_json::Value| r.as_array().unwrap().iter().map(|c| c.as_str().unwrap().to_string()).collect();
        out.push(row(&t["columns"]));
        out.extend(t["rows"].as_array().unwrap().iter().map(row));
    }
    out
}

#[test]
fn formats_carry_the_same_cells() {
    for cmd in [&["tensor-table", "--algebra", "example-5.2"][..], &["hom-table"][..], &["verify"][..]] {
        let with = |f: &str| {
            let mut a = cmd.to_vec();
            a.extend(["--format", f]);
            stdout(&a)
        };
        let md = md_cells(&with("md"));
        assert_eq!(md, csv_cells(&with("csv")));
        assert_eq!(md, json_cells(&with("json")));
    }
}

#[test]
fn classify_json_has_record_fields() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["classify", "--format", "json"])).unwrap();
    let recs = v.as_array().unwrap();
    assert_eq!(recs.len(), 4);
    for key in ["support", "definable_assertion", "fp_hom_closed", "tensor_ideal", "serre_generators", "serre_tensor_ideal", "exactness"] {
        assert!(recs[0].get(key).is_some(), "{key}");
    }
    assert_eq!(recs[3]["exactness"], "fail");
    assert!(recs[3].get("witness").is_some());
}

fn write_temp(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fphom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn broken_associativity_is_a_verification_failure() {
    // basis 1, x with x·x = 1 but 1·x = 0
    let bad = r#"{"p": 2, "dim": 2, "basis": ["1", "x"],
        "mul": [[[1, 0], [0, 0]], [[0, 1], [1, 0]]], "unit": [1, 0], "commutative": false}"#;
    let path = write_temp("bad.json", bad);
    let out = fphom(&["verify", "--algebra", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn exit_codes() {
    assert_eq!(fphom(&["indecs", "--algebra", "/nonexistent/algebra.json"]).status.code(), Some(2));
    assert_eq!(fphom(&["indecs", "--algebra", "truncated:4:2"]).status.code(), Some(2));
    assert_eq!(fphom(&["duality", "--algebra", "example-5.1", "--structure", "hopf"]).status.code(), Some(2));
    assert_eq!(
        fphom(&["indecs", "--algebra", "group:3:3", "--registry", "auto:7"]).status.code(),
        Some(3)
    );
}

#[test]
fn files_round_trip_through_the_loaders() {
    let reg = r#"{"modules": [
        {"name": "U", "dim": 1, "action": [[[1]], [[0]]]},
        {"name": "R", "dim": 2, "action": [[[1, 0], [0, 1]], [[0, 0], [1, 0]]]}
    ], "complete_up_to_dim": 2}"#;
    let funs = r#"{"functors": [
        {"name": "S", "source": "R", "target": "U", "matrix": [[1, 0]]},
        {"name": "T", "source": "U", "target": "R", "matrix": [[0], [1]]},
        {"name": "(U,-)", "source": "U", "target": "0", "matrix": []},
        {"name": "W", "source": "R", "target": "R", "matrix": [[0, 0], [1, 0]]},
        {"name": "(R,-)", "source": "R", "target": "0", "matrix": []}
    ]}"#;
    let rp = write_temp("reg.json", reg);
    let fp = write_temp("fun.json", funs);
    let args = [
        "tensor-table",
        "--algebra",
        "truncated:2:2",
        "--registry",
        rp.to_str().unwrap(),
        "--functors",
        fp.to_str().unwrap(),
        "--structure",
        "commutative",
    ];
    assert_eq!(stdout(&args), golden("tensor-table-example-5.1.md"));
}
