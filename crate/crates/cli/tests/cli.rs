use std::f64::consts::PI;
use std::io::Write;
use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sphere-strings"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let (code, out, err) = run(&all);
    assert_eq!(code, 0, "{}", err);
    serde_json::from_str(&out).unwrap()
}

#[test]
fn algebra_verify_passes_on_the_even_and_odd_tables() {
    for n in ["1", "2", "3", "4"] {
        let (code, out, _) = run(&["algebra", "verify", "--n", n, "--cutoff", "10"]);
        assert_eq!(code, 0, "n={}\n{}", n, out);
        assert!(out.ends_with("overall: PASS\n"));
    }
    let v = json(&["algebra", "verify", "--n", "2", "--cutoff", "6"]);
    assert_eq!(v["passed"], true);
    assert!(v["checks"]["presentation"]["checked"].as_u64().unwrap() > 0);
}

#[test]
fn algebra_mul_prints_text_and_json() {
    let (code, out, _) = run(&["algebra", "mul", "--n", "2", "--coeff", "Q", "B[0]", "A[0]"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("-A'[1]"));
    let terms: Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(terms["terms"][0]["coeff"], "-1");
    // arguments that start with a minus sign are elements, not flags
    let v = json(&["algebra", "mul", "--n", "2", "-B[0]", "A[0]"]);
    assert_eq!(v["product"], "A'[1]");
    assert_eq!(v["degree"], 1);
    let (_, csv, _) = run(&["--format", "csv", "algebra", "mul", "--n", "4", "B[0]", "B[0]"]);
    assert_eq!(csv.lines().next(), Some("space,family,index,coeff"));
}

#[test]
fn coalgebra_commands() {
    let (code, out, _) = run(&["coalgebra", "apply", "--n", "2", "--map", "copairing", "A'[3]"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("A[0]⊗A[2] + A[2]⊗A[0]\n"));
    assert!(out.contains("re-indexed"), "the copairing carries a provenance note");
    let v = json(&["coalgebra", "apply", "--n", "2", "--map", "copairing", "A'[3]"]);
    assert!(v["provenance_note"].as_str().unwrap().contains("re-indexed"));
    let (code, out, _) = run(&["coalgebra", "apply", "--n", "2", "--map", "left", "A[2]"]);
    assert_eq!(code, 0);
    assert_eq!(out, "A'[1]⊗A[0]\n");

    let v = json(&["coalgebra", "dual", "--n", "2", "a[0]", "a[0]"]);
    assert_eq!(v["rendered"], "a[1]");
    let v = json(&["coalgebra", "dual", "--n", "2", "b[0]", "b[0]"]);
    assert_eq!(v["rendered"], "0");
    let (code, _, _) = run(&["coalgebra", "verify", "--n", "2", "--cutoff", "6"]);
    assert_eq!(code, 0);
    // odd spheres have no coproduct tables
    assert_eq!(run(&["coalgebra", "apply", "--n", "3", "A'[1]"]).0, 2);
}

#[test]
fn homology_table_rows() {
    let (code, out, _) = run(&["homology", "table", "--space", "P", "--n", "2", "--max-degree", "5"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().skip(3).collect();
    assert_eq!(rows, ["0       Z", "1       Z2", "2       Z", "3       Z + Z2", "4       Z", "5       Z + Z2"]);
    let (_, csv, _) = run(&["--format", "csv", "homology", "table", "--space", "P", "--n", "4", "--max-degree", "4"]);
    assert_eq!(csv, "degree,group\n0,Z\n1,0\n2,0\n3,Z2\n4,0\n");
    let v = json(&["homology", "table", "--space", "L", "--n", "3", "--coeff", "Q", "--max-degree", "4"]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 5);
}

#[test]
fn homology_diagram_and_spectrum() {
    let (code, out, _) = run(&["homology", "diagram", "--space", "P", "--n", "4", "--levels", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 22);
    assert!(out.contains("(5π)^2"));
    let (_, csv, _) = run(&["--format", "csv", "homology", "spectrum", "--n", "2", "--max-length", "5"]);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("1π,") && lines[3].starts_with("5π,"));
}

#[test]
fn shooting_the_first_level_gives_length_pi() {
    let v = json(&["geodesics", "shoot", "--metric", "round", "--n", "2", "--level", "0"]);
    let length = v["geodesic"]["length"].as_f64().unwrap();
    assert!((length - PI).abs() < 1e-6, "{}", length);
    assert!(v["geodesic"]["antipodal_residual"].as_f64().unwrap() < 1e-9);
    let v = json(&["geodesics", "shoot", "--metric", "round", "--n", "2", "--level", "1"]);
    assert!((v["geodesic"]["length"].as_f64().unwrap() - 3.0 * PI).abs() < 1e-6);
}

#[test]
fn index_on_the_round_sphere() {
    let v = json(&["geodesics", "index", "--metric", "round", "--n", "4", "--level", "1", "--iterates", "4"]);
    assert_eq!(v["index"]["index"], 6);
    assert_eq!(v["kernel"]["dimension"], 7);
    assert_eq!(v["decided"], true);
    let alpha = v["average_index"]["alpha"].as_f64().unwrap();
    assert!((alpha - 9.0).abs() < 0.5, "{}", alpha);
    let (_, csv, _) = run(&["--format", "csv", "geodesics", "index", "--n", "2", "--level", "2"]);
    assert_eq!(csv.lines().next(), Some("length,energy,index,nullity_flag"));
    assert!(csv.lines().nth(1).unwrap().ends_with(",4,true"));
}

#[test]
fn scan_lists_odd_multiples_of_pi() {
    let (code, csv, _) = run(&["--format", "csv", "geodesics", "scan", "--n", "2", "--samples", "6"]);
    assert_eq!(code, 0);
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let length: f64 = cols[0].parse().unwrap();
        let k = (length / PI).round();
        assert!((length - k * PI).abs() < 1e-6 && k as i64 % 2 == 1, "{}", line);
        assert_eq!(cols[2], ((k as i64 - 1)).to_string());
    }
}

#[test]
fn resonance_and_density() {
    let (code, csv, _) = run(&["resonance", "--n", "2", "--cutoff", "20", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(csv.lines().next(), Some("generator,degree,cr,deviation"));
    let v = json(&["resonance", "--n", "4", "--cutoff", "20"]);
    assert_eq!(v["alpha_bar"], "3/π");
    assert_eq!(v["beta"], "4");
    assert_eq!(v["passed"], true);

    let v = json(&["density", "--n", "4", "--eps", "0.1"]);
    assert_eq!(v["report"]["passed"], true);
    assert!((v["entries"][0]["alpha"].as_f64().unwrap() - 3.0).abs() < 0.15);
    // a geodesic too far from the mean frequency fails the bound
    let (code, _, _) = run(&["density", "--n", "2", "--eps", "0.1", "--entry", "far:3.14159:10"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["density", "--n", "2", "--eps", "0.1", "--entry", "prime:3.141592653589793:1"]);
    assert_eq!(code, 0);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let cases: [&[&str]; 4] = [
        &["--format", "json", "algebra", "verify", "--n", "3", "--cutoff", "6"],
        &["--format", "csv", "geodesics", "scan", "--n", "2", "--samples", "4"],
        &["--format", "json", "geodesics", "index", "--n", "2", "--level", "1"],
        &["homology", "diagram", "--space", "L", "--n", "2", "--levels", "3"],
    ];
    for args in cases {
        let a = bin().args(args).output().unwrap();
        let b = bin().args(args).output().unwrap();
        assert_eq!(a.stdout, b.stdout, "{:?}", args);
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn exit_codes() {
    // usage errors
    assert_eq!(run(&["algebra", "verify"]).0, 2);
    assert_eq!(run(&["algebra", "verify", "--n", "2", "--bogus"]).0, 2);
    assert_eq!(run(&["--format", "xml", "config"]).0, 2);
    assert_eq!(run(&["algebra", "verify", "--n", "5"]).0, 2);
    assert_eq!(run(&["algebra", "mul", "--n", "2", "Q[0]", "A[0]"]).0, 2);
    assert_eq!(run(&["homology", "table", "--space", "X", "--n", "2"]).0, 2);
    // non-convergence
    let (code, _, err) =
        run(&["geodesics", "shoot", "--n", "2", "--metric", "ellipsoid:1,1.3,1.1", "--direction", "0,1,1", "--max-iterations", "0"]);
    assert_eq!(code, 3);
    assert!(err.contains("did not converge"));
    // help and version succeed
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn version_banner_carries_the_table_hash() {
    let (code, out, _) = run(&["--version"]);
    assert_eq!(code, 0);
    assert!(out.contains(&sphere_strings::table_hash()), "{}", out);
    let v = json(&["homology", "table", "--n", "2", "--max-degree", "1"]);
    assert_eq!(v["provenance"]["table_hash"], sphere_strings::table_hash());
}

#[test]
fn config_file_and_flags_layer_over_defaults() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "format = \"json\"\nseed = 42\ncutoff = 4\n[shooting]\ntol = 1e-8").unwrap();
    let path = f.path().to_str().unwrap();
    let v: Value = serde_json::from_str(&run(&["--config", path, "config"]).1).unwrap();
    assert_eq!(v["seed"], 42);
    assert_eq!(v["shooting"]["tol"], 1e-8);
    assert_eq!(v["shooting"]["max_iterations"], 50);
    // the flag wins over the file
    let v: Value = serde_json::from_str(&run(&["--config", path, "--seed", "7", "config"]).1).unwrap();
    assert_eq!(v["seed"], 7);
    // the file's cutoff is used when --cutoff is absent
    let v: Value = serde_json::from_str(&run(&["--config", path, "algebra", "verify", "--n", "2"]).1).unwrap();
    assert_eq!(v["cutoff"], 4);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "tolerance = 3").unwrap();
    assert_eq!(run(&["--config", bad.path().to_str().unwrap(), "config"]).0, 2);
}

#[test]
fn metric_from_a_key_value_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "metric = \"ellipsoid:1,1,1.1\"").unwrap();
    let v = json(&["geodesics", "shoot", "--n", "2", "--metric", f.path().to_str().unwrap()]);
    assert_eq!(v["metric"], "ellipsoid:1,1,1.1");
    assert!((v["geodesic"]["length"].as_f64().unwrap() - PI).abs() < 1e-6);
}
