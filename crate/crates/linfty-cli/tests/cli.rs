use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../linfty/corpus").join(name)
}

fn linfty(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linfty")).args(args).output().expect("binary runs")
}

fn run(verb: &[&str], file: &str, extra: &[&str]) -> (i32, String) {
    let path = corpus(file);
    let mut args: Vec<&str> = verb.to_vec();
    args.push(path.to_str().unwrap());
    args.extend_from_slice(extra);
    let out = linfty(&args);
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn abelian_document_passes() {
    let (code, out) = run(&["check", "linfty"], "abelian.ldoc", &[]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("check linfty: pass"));
}

#[test]
fn perturbed_sl2_fails_with_a_residual() {
    let (code, out) = run(&["check", "linfty"], "sl2_perturbed.ldoc", &[]);
    assert_eq!(code, 1);
    assert!(out.contains("at h e f: 1*h"), "{out}");
}

#[test]
fn morphism_and_rb_documents() {
    assert_eq!(run(&["check", "morphism"], "aff1_gl2_morphism.ldoc", &[]).0, 0);
    assert_eq!(run(&["check", "rb"], "aff1_rb.ldoc", &[]).0, 0);
    let (code, out) = run(&["check", "rb"], "aff1_rb_perturbed.ldoc", &[]);
    assert_eq!(code, 1);
    assert!(out.contains("FAIL  RB relation arity 2"), "{out}");
    assert!(out.contains("at u*v->y"), "{out}");
}

#[test]
fn rmatrix_verbs() {
    assert_eq!(run(&["check", "rmatrix"], "sl2_rmatrix.ldoc", &[]).0, 0);
    let (code, out) = run(&["check", "rmatrix"], "sl2_bad_rmatrix.ldoc", &[]);
    assert_eq!(code, 1);
    assert!(out.contains("at h e f"), "{out}");
    assert_eq!(run(&["make", "bialgebra"], "sl2_rmatrix.ldoc", &[]).0, 0);
    // a failing r-matrix is an unmet precondition, not a failed certificate
    assert_eq!(run(&["make", "bialgebra"], "sl2_bad_rmatrix.ldoc", &[]).0, 2);
    let (code, out) = run(&["derive", "schouten"], "sl2_rmatrix.ldoc", &[]);
    assert_eq!(code, 0);
    assert!(out.contains("m2 (e f) (e f) = 2*h e f"), "{out}");
}

#[test]
fn conversion_emits_an_operator_that_checks() {
    let (code, out) = run(&["convert", "rmatrix-to-rb"], "sl2_rmatrix.ldoc", &["--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let doc = v["output"].as_str().unwrap();
    assert!(doc.contains("[operator sl2*[0] sl2]\nh* -> e : -1\ne* -> h : 1\n"), "{doc}");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.ldoc");
    std::fs::write(&path, doc).unwrap();
    let out = linfty(&["check", "rb", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bridge_verb() {
    assert_eq!(run(&["check", "bridge"], "sl2_rmatrix.ldoc", &[]).0, 0);
    // a quadratic r has nonzero degree at n = 3
    assert_eq!(run(&["check", "bridge"], "aff1_rmatrix.ldoc", &["--shift", "3"]).0, 2);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.ldoc");
    std::fs::write(&path, "linfty-doc/1\n[space g]\nx 0\ny 0\n[dgla g]\nx y -> y : 1/0\n").unwrap();
    let out = linfty(&["check", "linfty", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("line 6: zero denominator"));
    let out = linfty(&["check", "linfty", "/nonexistent.ldoc"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(run(&["check", "rb"], "sl2.ldoc", &[]).0, 2);
}

#[test]
fn json_reports_are_byte_identical() {
    for (verb, file) in [(&["check", "linfty"][..], "sl2_perturbed.ldoc"), (&["check", "rb"][..], "aff1_rb_perturbed.ldoc"), (&["make", "bialgebra"][..], "sl2_rmatrix.ldoc")] {
        let a = run(verb, file, &["--format", "json"]).1;
        let b = run(verb, file, &["--format", "json"]).1;
        assert_eq!(a, b);
    }
}

#[test]
fn stdin_and_output_file() {
    use std::io::Write;
    use std::process::Stdio;
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let mut child = Command::new(env!("CARGO_BIN_EXE_linfty"))
        .args(["check", "linfty", "-", "--format", "json", "-o", report.to_str().unwrap()])
        .stdin(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(std::fs::read(corpus("sl2.ldoc")).unwrap().as_slice()).unwrap();
    assert_eq!(child.wait().unwrap().code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["caps"]["arity"], 4);
}
