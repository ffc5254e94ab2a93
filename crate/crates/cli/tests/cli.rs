use std::path::PathBuf;
use std::process::{Command, Output};

fn frobvir(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frobvir"))
        .args(args)
        .output()
        .expect("run frobvir")
}

fn definition(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "definitions", name].iter().collect();
    path.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn validate_reports_charge_and_rank() {
    let o = frobvir(&["validate", &definition("dual.alg")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("charge <e,e> = 0"), "{out}");
    assert!(out.contains("form rank 2 of 2"), "{out}");
    assert!(out.contains("frobenius-axioms: pass"));
}

#[test]
fn machine_output_has_one_record_per_check() {
    let o = frobvir(&["--machine", "verify", "--degree", "4", &definition("dual.alg")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 10, "{out}");
    let mut names: Vec<&str> = lines.iter().map(|l| l.split('\t').next().unwrap()).collect();
    assert!(lines.iter().all(|l| l.split('\t').nth(1) == Some("pass")));
    names.dedup();
    assert_eq!(names.len(), 10);

    let o = frobvir(&["validate", "--machine", &definition("broken.alg")]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with("frobenius-axioms\tfail\t"), "{out}");
}

#[test]
fn verify_fails_on_broken_input() {
    let o = frobvir(&["verify", "--degree", "4", &definition("broken.alg")]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("frobenius-axioms: fail"), "{out}");
    assert!(out.contains("witness:"));
}

#[test]
fn parse_errors_exit_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.alg");
    std::fs::write(&path, "algebra kc\nbasis e\nunit e\nmul e e = 1 f\n").unwrap();
    let o = frobvir(&["validate", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line 4, column 13: undeclared label `f`"), "{err}");

    let o = frobvir(&["validate", dir.path().join("missing.alg").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = frobvir(&["character", "--degree", "x", &definition("kc.alg")]);
    assert_eq!(o.status.code(), Some(2));
    let o = frobvir(&["demo", "k_"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn algebroid_files() {
    for file in ["vir_k1.alg", "over_dual.alg"] {
        let o = frobvir(&["check-axioms", &definition(file)]);
        assert_eq!(o.status.code(), Some(0), "{file}: {}", stdout(&o));
        let out = stdout(&o);
        assert!(out.contains("form-op1: pass"), "{out}");
        let o = frobvir(&["validate", &definition(file)]);
        assert_eq!(o.status.code(), Some(0));
    }
    let o = frobvir(&["build", &definition("vir_k1.alg")]);
    assert_eq!(o.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad_vir.alg");
    std::fs::write(&path, "algebroid bad\nbasis e\nop1 e e = 2 e\nform e e = 1 k\n").unwrap();
    let o = frobvir(&["check-axioms", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("op0t-symmetric-part: fail"), "{}", stdout(&o));
}

#[test]
fn check_axioms_on_algebras() {
    let o = frobvir(&["check-axioms", &definition("truncated3.alg")]);
    assert_eq!(o.status.code(), Some(0));
    let o = frobvir(&["check-axioms", &definition("broken.alg")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not Frobenius"));
}

#[test]
fn build_lists_pbw_basis() {
    let o = frobvir(&["build", "--degree", "4", &definition("kc.alg")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("degree 4: dimension 2\n  L_-4(e)|0>\n  L_-2(e)L_-2(e)|0>\n"), "{out}");
    let o = frobvir(&["build", "--degree", "3", &definition("broken.alg")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn large_degrees_warn_on_stderr() {
    let o = frobvir(&["character", "--degree", "13", &definition("kc.alg")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning: degree 13 exceeds the safety bound 12"));
    assert_eq!(stdout(&o).trim(), "1 0 1 1 2 2 4 4 7 8 12 14 21 24");
    let o = frobvir(&["character", "--degree", "11", &definition("truncated3.alg")]);
    assert!(stderr(&o).contains("safety bound 10"));
    let o = frobvir(&["character", "--degree", "12", &definition("dual.alg")]);
    assert!(stderr(&o).is_empty());
}

#[test]
fn demo_prints_definition_and_suite() {
    let o = frobvir(&["demo", "dual_numbers(3)"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("algebra dual_numbers(3)\nbasis one t\n"), "{out}");
    assert!(out.contains("character: 1 0 2 2 5 6 13 16 30"), "{out}");
    assert!(out.contains("virasoro-vector: pass"));
    assert!(out.contains("Virasoro-convention charge 2<e,e> = 6"));
}
