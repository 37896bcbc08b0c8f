use std::process::{Command, Output};

fn mlbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mlbound"))
        .args(args)
        .output()
        .expect("run mlbound")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn markov_value_prints_exact_surd() {
    let o = mlbound(&["markov-value", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("= 2√2"), "{out}");
    assert!(out.contains("2.8284271247461900976033774484193961571393437507538"), "{out}");

    let o = mlbound(&["markov-value", "1122"]);
    assert!(stdout(&o).contains("√221/5"), "{}", stdout(&o));
}

#[test]
fn cover_verdict_sets_exit_code() {
    let o = mlbound(&["verify-cover", "sqrt10-sqrt13"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("1/35") && out.contains("41 - 4√105"), "{out}");
    assert!(out.contains("PASS"));

    // Far below the contracting exponent the sums exceed 1.
    let o = mlbound(&["verify-cover", "sqrt10-sqrt13", "--s", "0.1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn find_s_stays_below_the_case_exponent() {
    let o = mlbound(&["verify-cover", "sqrt10-sqrt13", "--find-s"]);
    let out = stdout(&o);
    let line = out.lines().find(|l| l.contains("smallest contracting s")).expect("search line");
    let s: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(s <= 0.174813 && s > 0.17, "{line}");
}

#[test]
fn malformed_spec_names_line_and_field() {
    let dir = std::env::temp_dir().join(format!("mlbound-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.sft");
    std::fs::write(&path, "name: bad\nalphabet: 1 2\nforbidden: 13\n").unwrap();
    let o = mlbound(&["extremal", path.to_str().unwrap(), "--min"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line 3") && err.contains("forbidden"), "{err}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn unknown_names_are_errors() {
    let o = mlbound(&["dim", "no-such-shift"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error:"));
    let o = mlbound(&["gap-constant", "no-such-gap"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gap_threshold_verdicts() {
    let o = mlbound(&["gap-constant", "sqrt10-sqrt13"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("√2 + √3"));
    let o = mlbound(&["gap-constant", "b-11-22", "k12", "--below", "3.1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn extremal_reports_expansion() {
    let o = mlbound(&["extremal", "k12", "--min"]);
    let out = stdout(&o);
    assert!(out.contains("[0; (21)^∞]") && out.contains("(-1 + √3)/2"), "{out}");
    let o = mlbound(&["extremal", "k12", "--max", "--prefix", "2"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn dim_with_oracle_bracket() {
    let o = mlbound(&["dim", "k12", "--order", "5", "--oracle-depth", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("HEURISTIC") && out.contains("RIGOROUS-UP-TO-DISTORTION-CONSTANT"), "{out}");
    assert!(out.contains("estimate inside bracket: PASS"));
    let o = mlbound(&["dim", "k12", "--oracle-depth", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn list_names_builtins() {
    let out = stdout(&mlbound(&["list"]));
    for name in ["k1234", "x4-14-41-24-42", "sqrt20-sqrt21", "3.92-4.01"] {
        assert!(out.contains(name), "{name}");
    }
}

#[test]
fn structured_report_is_byte_stable() {
    let args = ["report", "--mode", "rigorous", "--format", "structured"];
    let a = mlbound(&args);
    let b = mlbound(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    for field in ["\"mode\"", "\"pieces\"", "\"global_bound\"", "\"certificates\""] {
        assert!(out.contains(field), "{field}");
    }
}
