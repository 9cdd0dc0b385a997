use std::process::{Command, Output};

fn fschar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fschar"))
        .args(args)
        .env_remove("FSCHAR_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const GOLDEN: &str = include_str!("../../core/tests/golden/system_l2_k2.txt");

#[test]
fn oracle_and_fermionic_are_byte_identical() {
    let base = ["character", "--l", "2", "--weight", "1,0,0", "--zmax", "4", "--qmax", "10"];
    let o = fschar(&[&base[..], &["--method", "oracle"]].concat());
    let f = fschar(&[&base[..], &["--method", "fermionic"]].concat());
    assert!(o.status.success() && f.status.success());
    assert_eq!(o.stdout, f.stdout);

    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let first = &v["terms"][0];
    assert_eq!(first[0], serde_json::json!([0, 0]));
    assert_eq!(first[1]["terms"], serde_json::json!([[0, "1"]]));
}

#[test]
fn exit_codes() {
    assert_eq!(fschar(&["character", "--weight", "0,0"]).status.code(), Some(2));
    assert_eq!(fschar(&["character", "--weight", "1,x,0"]).status.code(), Some(2));
    assert_eq!(fschar(&["character", "--method", "fermionic", "--l", "3"]).status.code(), Some(1));
    assert_eq!(fschar(&["character", "--method", "fjmmt", "--weight", "0,0,2"]).status.code(), Some(2));
    assert_eq!(fschar(&["list-admissible", "--l", "3", "--init", "0,0"]).status.code(), Some(2));
    assert_eq!(fschar(&["bogus"]).status.code(), Some(2));
}

#[test]
fn verify_examples_pass() {
    let s = fschar(&["verify", "--suite", "system", "--l", "2", "--level", "2", "--zmax", "8", "--qmax", "20"]);
    assert!(s.status.success(), "{}", String::from_utf8_lossy(&s.stderr));
    let report: serde_json::Value = serde_json::from_slice(&s.stdout).unwrap();
    assert!(report["checks"].as_array().unwrap().len() > 6);

    let l = fschar(&["verify", "--suite", "lemmas", "--level", "3", "--format", "text"]);
    assert!(l.status.success());
    assert!(stdout(&l).contains("PASSED"));
}

#[test]
fn corrupted_golden_is_located() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.txt");
    std::fs::write(&good, GOLDEN).unwrap();
    let ok = fschar(&["verify", "--suite", "system", "--golden", good.to_str().unwrap()]);
    assert!(ok.status.success());

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, GOLDEN.replacen("A_{1,0,1}^{n1,n2-1}", "A_{1,0,1}^{n1,n2}", 1)).unwrap();
    let out = fschar(&["verify", "--suite", "system", "--golden", bad.to_str().unwrap(), "--format", "text"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 5"), "{err}");
    assert!(stdout(&out).contains("FAILED"));
}

#[test]
fn list_admissible_examples() {
    let q0 = fschar(&["list-admissible", "--qmax", "0"]);
    assert_eq!(stdout(&q0), "{\"a\":[],\"degree\":0,\"weight\":[0,0]}\n");

    let vac = stdout(&fschar(&["list-admissible", "--level", "1", "--qmax", "3"]));
    for a in ["[1]", "[0,0,1]", "[0,0,0,0,1]"] {
        let line = format!("{{\"a\":{a},");
        let hit = vac.lines().find(|l| l.starts_with(&line)).unwrap_or_else(|| panic!("{a} missing"));
        assert!(hit.ends_with("\"weight\":[1,0]}"), "{hit}");
    }

    let pinned = stdout(&fschar(&["list-admissible", "--level", "2", "--qmax", "2", "--init", "0,0"]));
    assert!(!pinned.is_empty());
    for line in pinned.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let a = v["a"].as_array().unwrap();
        assert!(a.iter().take(2).all(|x| x == 0), "{line}");
    }
}

#[test]
fn output_independent_of_jobs() {
    let args = ["character", "--method", "fermionic", "--level", "3", "--weight", "1,1,1", "--zmax", "5", "--qmax", "14"];
    let one = fschar(&[&args[..], &["--jobs", "1"]].concat());
    let many = fschar(&[&args[..], &["--jobs", "6"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);

    let env = Command::new(env!("CARGO_BIN_EXE_fschar"))
        .args(args)
        .env("FSCHAR_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(env.stdout, one.stdout);
}

#[test]
fn config_file_and_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    let out = dir.path().join("char.txt");
    std::fs::write(&cfg, format!("# run\nmethod = fjmmt\nweight = 1,1,0\nzmax = 3\nqmax = 8\nformat = text\noutput = {}\n", out.display())).unwrap();
    let r = fschar(&["character", "--config", cfg.to_str().unwrap(), "--qmax", "6"]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    assert!(r.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# fjmmt (1,1,0), z<=3, q<=6"), "{text}");

    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(fschar(&["character", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}
