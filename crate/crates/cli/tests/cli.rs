use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    report: Value,
}

fn vallab(dir: &Path, args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_vallab"))
        .args(args)
        .current_dir(dir)
        .env_remove("VALLAB_SEED")
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).expect("utf-8 output");
    let report = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    Run { code: out.status.code().expect("exit code"), stdout, report }
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

fn nums(v: &Value) -> Vec<f64> {
    v.as_array().expect("array").iter().map(num).collect()
}

#[test]
fn box_intrinsic_volumes_are_elementary_symmetric() {
    let dir = TempDir::new().unwrap();
    write(&dir, "box.json", r#"{"kind": "box", "dim": 3, "sides": [1, 2, 3]}"#);
    let run = vallab(dir.path(), &["intrinsic", "--body", "box.json"]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    let v = nums(&run.report["results"]["intrinsic_volumes"]);
    for (got, want) in v.iter().zip([1.0, 6.0, 11.0, 6.0]) {
        assert!((got - want).abs() <= 1e-12 * want, "{v:?}");
    }
    assert_eq!(run.report["error"], Value::Null);
    assert_eq!(run.report["inputs_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn polygon_perimeter_and_point() {
    let dir = TempDir::new().unwrap();
    write(&dir, "gon.json", r#"{"kind": "regular_polygon", "dim": 2, "k": 256, "radius": 1}"#);
    write(&dir, "pt.json", r#"{"kind": "vertices", "dim": 2, "points": [[0.5, -1]]}"#);
    let run = vallab(dir.path(), &["intrinsic", "--body", "gon.json"]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    let v = nums(&run.report["results"]["intrinsic_volumes"]);
    let k = 256.0;
    let want = [1.0, k * (PI / k).sin(), 0.5 * k * (2.0 * PI / k).sin()];
    for (got, want) in v.iter().zip(want) {
        assert!((got - want).abs() <= 1e-12 * want, "{v:?}");
    }
    let run = vallab(dir.path(), &["intrinsic", "--body", "pt.json"]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert_eq!(nums(&run.report["results"]["intrinsic_volumes"]), vec![1.0, 0.0, 0.0]);
}

#[test]
fn indicator_and_linear_indicator_values() {
    let dir = TempDir::new().unwrap();
    write(&dir, "ind.json", r#"{"kind": "indicator", "body": {"kind": "box", "dim": 2, "sides": [2, 3]}}"#);
    write(
        &dir,
        "lin.json",
        r#"{"kind": "linear_indicator", "y": [1, 0], "body": {"kind": "box", "dim": 2, "sides": [1, 1]}}"#,
    );
    let run = vallab(dir.path(), &["fval", "--valuation", "exp_integral", "--func", "ind.json"]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert!((num(&run.report["results"]["value"]) - 6.0).abs() < 1e-12);
    // ∫_{[0,1]²} e^{-x} dx = 1 − 1/e.
    let run = vallab(dir.path(), &["fval", "--valuation", "exp_integral", "--func", "lin.json"]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert!((num(&run.report["results"]["value"]) - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
    let run = vallab(dir.path(), &["fval", "--valuation", "exp_min", "--func", "lin.json"]);
    assert!((num(&run.report["results"]["value"]) - 1.0).abs() < 1e-15, "{}", run.stdout);
}

#[test]
fn non_coercive_input_reports_a_direction() {
    let dir = TempDir::new().unwrap();
    write(&dir, "ramp.json", r#"{"kind": "max_affine", "dim": 1, "pieces": [{"slope": [1], "offset": 0}]}"#);
    let run = vallab(dir.path(), &["fval", "--valuation", "exp_integral", "--func", "ramp.json"]);
    assert_eq!(run.code, 2, "{}", run.stdout);
    assert_eq!(run.report["error"]["kind"], "NotCoercive");
    let d = nums(&run.report["error"]["detail"]["direction"]);
    assert_eq!(d.len(), 1);
    assert!(d[0] < 0.0);
}

#[test]
fn cube_and_regular_tetrahedron_are_distinct() {
    let dir = TempDir::new().unwrap();
    write(&dir, "cube.json", r#"{"kind": "box", "dim": 3, "sides": [1, 1, 1]}"#);
    write(
        &dir,
        "tet.json",
        r#"{"kind": "vertices", "dim": 3, "points": [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]}"#,
    );
    let run = vallab(dir.path(), &["dehn", "--a", "cube.json", "--b", "tet.json"]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert_eq!(run.report["results"]["verdict"], "Distinct");
    assert_eq!(run.report["results"]["height_bound"], 10000);
    assert_eq!(run.report["results"]["symbol_a"], Value::Array(vec![]));
}

#[test]
fn split_check_passes_for_exp_integral_and_fails_for_its_square() {
    let dir = TempDir::new().unwrap();
    let run = vallab(dir.path(), &["check", "--valuation", "exp_integral", "--pairs", "split"]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert!(num(&run.report["residuals"]["max"]) < 1e-8);
    assert_eq!(run.report["results"]["pairs"], 100);
    let run =
        vallab(dir.path(), &["check", "--valuation", "exp_integral_squared", "--pairs", "split", "--count", "10"]);
    assert_eq!(run.code, 1, "{}", run.stdout);
    assert_eq!(run.report["status"], "check_failed");
}

#[test]
fn ellipse_affine_length_converges_monotonically() {
    let dir = TempDir::new().unwrap();
    write(&dir, "ell.json", r#"{"kind": "ellipse", "dim": 2, "a": 2, "b": 1}"#);
    let run = vallab(dir.path(), &["affinelength", "--body", "ell.json", "--depth", "12", "--csv", "trace.csv"]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    let want = 2.0 * PI * 2f64.cbrt();
    assert!((num(&run.report["results"]["estimate"]) - want).abs() < 1e-5, "{}", run.stdout);
    let csv = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("level,triangles,estimate"));
    let est: Vec<f64> = lines.map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(est.len(), 13);
    assert!(est.windows(2).all(|w| w[1] <= w[0]), "{est:?}");
}

#[test]
fn canonical_form_is_a_fixed_point() {
    let dir = TempDir::new().unwrap();
    let inputs = [
        ("body", r#"{"dim":2,"kind":"ellipse","a":2,"b":1,"angle":0.3}"#),
        ("body", r#"{"kind":"simplex","dim":2,"vertices":[[0,0],[1,0],[0.1,0.7]]}"#),
        (
            "func",
            r#"{"kind":"max_affine","dim":2,"role":"conjugate","pieces":[{"slope":[1,0],"offset":0},{"slope":[0,1],"offset":0.5},{"slope":[-1,-1],"offset":0}]}"#,
        ),
        ("density", r#"{"kind":"hat","center":[0,0.25],"radius":2,"height":1}"#),
    ];
    for (i, (flag, text)) in inputs.iter().enumerate() {
        let name = format!("in{i}.json");
        write(&dir, &name, text);
        let first = vallab(dir.path(), &["canon", &format!("--{flag}"), &name]);
        assert_eq!(first.code, 0, "{}", first.stdout);
        write(&dir, "again.json", &first.stdout);
        let second = vallab(dir.path(), &["canon", &format!("--{flag}"), "again.json"]);
        assert_eq!(first.stdout, second.stdout);
    }
}

#[test]
fn kinematic_output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    write(&dir, "sq.json", r#"{"kind": "box", "dim": 2, "sides": [1, 1]}"#);
    write(&dir, "tri.json", r#"{"kind": "simplex", "dim": 2, "scale": 1}"#);
    let args = ["kinematic", "--k", "sq.json", "--l", "tri.json", "--samples", "20000", "--csv", "conv.csv"];
    let a = vallab(dir.path(), &args);
    let csv_a = std::fs::read_to_string(dir.path().join("conv.csv")).unwrap();
    let b = vallab(dir.path(), &args);
    let csv_b = std::fs::read_to_string(dir.path().join("conv.csv")).unwrap();
    assert_eq!(a.code, 0, "{}", a.stdout);
    assert_eq!(a.report["results"], b.report["results"]);
    assert_eq!(csv_a, csv_b);
    assert_eq!(csv_a.lines().next(), Some("samples,estimate,stderr,target"));
    let z = num(&a.report["residuals"]["standard_errors"]);
    assert!(z < 5.0, "{z}");
}

#[test]
fn simplex_beyond_dimension_three_is_unsupported() {
    let dir = TempDir::new().unwrap();
    write(&dir, "s4.json", r#"{"kind": "simplex", "dim": 4, "scale": 1}"#);
    let run = vallab(dir.path(), &["intrinsic", "--body", "s4.json"]);
    assert_eq!(run.code, 3, "{}", run.stdout);
    assert_eq!(run.report["error"]["kind"], "Unsupported");
}

#[test]
fn parse_errors_carry_the_path() {
    let dir = TempDir::new().unwrap();
    write(&dir, "bad.json", r#"{"kind": "vertices", "dim": 2, "points": [[0, 0], [1]]}"#);
    let run = vallab(dir.path(), &["intrinsic", "--body", "bad.json"]);
    assert_eq!(run.code, 2, "{}", run.stdout);
    assert_eq!(run.report["error"]["kind"], "ParseError");
    assert_eq!(run.report["error"]["detail"]["path"], "$.points[1]");
    let run = vallab(dir.path(), &["intrinsic", "--body", "missing.json"]);
    assert_eq!(run.code, 2);
    assert_eq!(run.report["error"]["kind"], "IoError");
}

#[test]
fn decompositions_preserve_volume() {
    let dir = TempDir::new().unwrap();
    write(&dir, "s.json", r#"{"kind": "simplex", "dim": 3, "vertices": [[0,0,0],[1,0,0],[1.2,1,0],[1.5,1.1,0.9]]}"#);
    let canonical = vallab(dir.path(), &["decompose", "--simplex", "s.json", "--t", "0.3"]);
    assert_eq!(canonical.code, 0, "{}", canonical.stdout);
    assert_eq!(canonical.report["results"]["pieces"].as_array().unwrap().len(), 4);
    let cylinder = vallab(dir.path(), &["decompose", "--simplex", "s.json", "--m", "3"]);
    assert_eq!(cylinder.code, 0, "{}", cylinder.stdout);
    for run in [canonical, cylinder] {
        let expected = num(&run.report["results"]["expected_volume"]);
        assert!(num(&run.report["residuals"]["volume"]) <= 1e-12 * expected, "{}", run.stdout);
    }
}

#[test]
fn functional_steiner_of_a_square_indicator() {
    let dir = TempDir::new().unwrap();
    write(&dir, "ind.json", r#"{"kind": "indicator", "body": {"kind": "box", "dim": 2, "sides": [1, 1]}}"#);
    write(&dir, "alpha.json", r#"{"kind": "half_line", "breakpoints": [0, 1, 2], "values": [1, 0.5, 0]}"#);
    let run = vallab(dir.path(), &["steiner", "--func", "ind.json", "--alpha", "alpha.json"]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    let c = nums(&run.report["results"]["components"]);
    for (got, want) in c.iter().zip([1.0, 2.0, 1.0]) {
        assert!((got - want).abs() < 1e-8, "{c:?}");
    }
}

#[test]
fn seed_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    write(&dir, "sq.json", r#"{"kind": "box", "dim": 2, "sides": [1, 1]}"#);
    let out = Command::new(env!("CARGO_BIN_EXE_vallab"))
        .args(["kinematic", "--k", "sq.json", "--l", "sq.json", "--samples", "20000"])
        .current_dir(dir.path())
        .env("VALLAB_SEED", "1")
        .output()
        .unwrap();
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["seed"], 1);
    let plain = vallab(dir.path(), &["kinematic", "--k", "sq.json", "--l", "sq.json", "--samples", "20000"]);
    assert_eq!(plain.report["seed"], 0);
    assert_ne!(plain.report["results"]["estimate"], report["results"]["estimate"]);
}
