use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use concord::io::{emit_matrix, parse_matrix, Format, MatrixDocument};

fn concord(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_concord"))
        .args(args)
        .env_remove("CONCORD_PRECISION")
        .output()
        .expect("run concord")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn value_of(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(key))
        .unwrap_or_else(|| panic!("no `{key}` in {text}"))
        .trim()
        .parse()
        .unwrap()
}

#[test]
fn approximate_consistent_echoes_input() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "consistent.csv", "1,2,8\n1/2,1,4\n1/8,1/4,1\n");
    let o = concord(&["approximate", &file]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "1,2,8\n0.5,1,4\n0.125,0.25,1\n");
    assert!(value_of(&stderr(&o), "residual_norm:") <= 1e-12);
}

#[test]
fn approximate_to_file_prints_summary() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "m.csv", "#labels: A,B,C\n1,2,1\n1/2,1,2\n1,1/2,1\n");
    let out = dir.path().join("c.json");
    let o = concord(&["approximate", &file, "--out", out.to_str().unwrap(), "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let summary = stdout(&o);
    assert!(summary.contains("weight A:"));
    let doc = parse_matrix(&fs::read_to_string(&out).unwrap(), Format::Json).unwrap();
    assert_eq!(doc.labels.as_deref(), Some(&["A".to_string(), "B".into(), "C".into()][..]));
    assert!((doc.entries[0][1] - 2f64.cbrt()).abs() < 1e-11);
}

#[test]
fn approximate_output_validates_as_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "m.csv", "1,3,1/5,7\n1/3,1,2,1/9\n5,1/2,1,4\n1/7,9,1/4,1\n");
    let before = concord(&["validate", &file]);
    assert!(stdout(&before).contains("consistent: no"));
    let approx = concord(&["approximate", &file]);
    let out = write(dir.path(), "c.csv", &stdout(&approx));
    let after = concord(&["validate", &out]);
    assert!(after.status.success());
    assert!(stdout(&after).contains("consistent: yes"), "{}", stdout(&after));
    assert_eq!(value_of(&stdout(&after), "global inconsistency:"), 0.0);
}

#[test]
fn validate_reports_worst_triad() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "m.json", r#"{"labels": ["x","y","z"], "matrix": [[1,2,5],["1/2",1,2],["1/5","1/2",1]]}"#);
    let o = concord(&["validate", &file]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("reciprocal: yes"));
    assert!((value_of(&text, "global inconsistency:") - 0.2).abs() < 1e-12);
    assert!(text.contains("triad (1, 2, 3) [x, y, z]"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let parse = write(dir.path(), "p.csv", "1,2\n0.5\n");
    let o = concord(&["validate", &parse]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("row length mismatch"));
    assert!(stdout(&o).is_empty());

    let neg = write(dir.path(), "n.csv", "1,2\n-0.5,1\n");
    let o = concord(&["approximate", &neg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("(2, 1)"));

    let missing = dir.path().join("absent.csv");
    assert_eq!(concord(&["weights", missing.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(concord(&["basis", "1"]).status.code(), Some(1));
    assert_eq!(concord(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn strict_reciprocal_flag() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "nr.csv", "1,2\n2,1\n");
    assert_eq!(concord(&["approximate", &file, "--strict-reciprocal"]).status.code(), Some(1));
    let lenient = concord(&["approximate", &file]);
    assert!(lenient.status.success());
    // log-space antisymmetric part of [[0, ln2], [ln2, 0]] is zero
    assert_eq!(stdout(&lenient), "1,1\n1,1\n");
}

#[test]
fn weights_output() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "s.csv", "#labels: a,b,c\n1,1/2,1/4\n2,1,1/2\n4,2,1\n");
    let o = concord(&["weights", &file, "--precision", "6"]);
    assert_eq!(stdout(&o), "a,0.142857\nb,0.285714\nc,0.571429\n");
    let o = concord(&["weights", &file, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["labels"][2], "c");
    assert!((v["weights"][2].as_f64().unwrap() - 4.0 / 7.0).abs() < 1e-11);
}

#[test]
fn basis_with_norms() {
    let o = concord(&["basis", "7", "--orthogonal", "--normsq"]);
    let text = stdout(&o);
    assert!(text.contains("5/6,0,1,1,1,1,1"));
    let norms: Vec<&str> = text.lines().skip_while(|l| !l.starts_with("# |T_k|^2")).skip(1).collect();
    assert_eq!(norms, ["1,12", "2,35/3", "3,56/5", "4,21/2", "5,28/3", "6,7"]);

    let raw = concord(&["basis", "3", "--normsq", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&raw)).unwrap();
    assert_eq!(v["basis"], "raw");
    assert_eq!(v["matrices"][1]["entries"][2], serde_json::json!(["-1", "-1", "0"]));
    assert_eq!(v["normsq"][0]["value"], "4");
}

#[test]
fn verify_random_six() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
    let mut rows = vec![vec![1.0; 6]; 6];
    for i in 0..6 {
        for j in i + 1..6 {
            let v: f64 = rng.gen_range(-2.0f64..2.0).exp();
            rows[i][j] = v;
            rows[j][i] = 1.0 / v;
        }
    }
    let doc = MatrixDocument::new(rows, None, Format::Csv);
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "random6.csv", &emit_matrix(&doc, Format::Csv, 17));
    let o = concord(&["verify", &file]);
    assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));
    assert!(value_of(&stdout(&o), "max disagreement:") <= 1e-9);
    for method in ["gram_schmidt", "geometric_mean", "normal_equations", "project_fast"] {
        assert!(stdout(&o).contains(method));
    }
}

#[test]
fn precision_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "m.csv", "1,2,1\n1/2,1,2\n1,1/2,1\n");
    let o = Command::new(env!("CARGO_BIN_EXE_concord"))
        .args(["approximate", &file])
        .env("CONCORD_PRECISION", "3")
        .output()
        .unwrap();
    assert_eq!(stdout(&o).lines().next().unwrap(), "1,1.26,1.59");
}

#[test]
fn reads_standard_input() {
    use std::io::Write;
    let mut child = Command::new(env!("CARGO_BIN_EXE_concord"))
        .args(["validate", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"1,4\n1/4,1\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(stdout(&o).contains("consistent: yes"));
}
