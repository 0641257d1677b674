//! The binary end to end: gen → reduce → solve → verify → analyze.

use std::path::Path;
use std::process::{Command, Output};

fn dsteiner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dsteiner")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("dsteiner-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn dsn_reduction_round_trip() {
    let dir = scratch("dsn");
    let d = dir.to_str().unwrap();
    assert!(dsteiner(&["gen", "gridtiling", "--k", "2", "--n", "2", "--seed", "4", "--out", d]).status.success());
    let gt = dir.join("gt-k2-n2-s4.gt");
    assert!(dsteiner(&["reduce", "dsn-planar", "--shift", "1", gt.to_str().unwrap(), "--out", d]).status.success());
    let inst = dir.join("gt-k2-n2-s4.dsn-planar.inst");
    let meta = std::fs::read_to_string(dir.join("gt-k2-n2-s4.dsn-planar.meta")).unwrap();
    assert!(meta.lines().any(|l| l == "budget 772"), "{meta}");

    let solved = dsteiner(&["solve", "dsn", inst.to_str().unwrap(), "--out", d]);
    assert!(solved.status.success());
    let sol = std::fs::read_to_string(dir.join("gt-k2-n2-s4.dsn-planar.solution")).unwrap();
    assert!(sol.contains("weight 772\n") && sol.contains("optimal true\n"), "{sol}");

    let v = dsteiner(&["verify", inst.to_str().unwrap(), dir.join("gt-k2-n2-s4.dsn-planar.solution").to_str().unwrap(), "--budget", "772"]);
    assert!(v.status.success());
    assert!(stdout(&v).contains("verdict PASS"));
    let tight = dsteiner(&["verify", inst.to_str().unwrap(), dir.join("gt-k2-n2-s4.dsn-planar.solution").to_str().unwrap(), "--budget", "771"]);
    assert!(!tight.status.success());
    std::fs::remove_dir_all(&dir).unwrap();
}

fn write_triangle(dir: &Path) -> String {
    std::fs::create_dir_all(dir).unwrap();
    let p = dir.join("tri.inst");
    std::fs::write(&p, "V 3\nA 0 1 1\nA 1 2 1\nA 2 0 1\nA 1 0 5\nT 0 1 2\n").unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn every_scss_method_and_decision() {
    let dir = scratch("scss");
    let tri = write_triangle(&dir);
    for method in ["bnb", "twdp", "dst2x"] {
        let o = dsteiner(&["solve", "scss", &tri, "--method", method]);
        assert!(o.status.success());
        assert!(stdout(&o).contains("weight 3\n"), "{method}: {}", stdout(&o));
    }
    let no = stdout(&dsteiner(&["solve", "scss", &tri, "--budget", "2"]));
    assert!(no.contains("decision NO"));
    let yes = stdout(&dsteiner(&["solve", "scss", &tri, "--budget", "3"]));
    assert!(yes.contains("decision YES"));
    let s = stdout(&dsteiner(&["analyze", "structure", &tri]));
    assert!(s.trim_end().ends_with("verdict PASS"), "{s}");
    let tw = stdout(&dsteiner(&["analyze", "tw", &tri]));
    assert!(tw.starts_with("treewidth 2\nexact true\n"), "{tw}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn experiment_exit_codes_and_table() {
    let o = dsteiner(&["experiment", "dsn-roundtrip", "--n", "3", "--seeds", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("verdict PASS"));
    assert!(text.lines().filter(|l| l.starts_with("dsn-roundtrip\t")).count() == 4);
    let unknown = dsteiner(&["experiment", "psi-roundtrip", "--seeds", "1", "--timeout", "0"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(stdout(&unknown).contains("verdict INCONCLUSIVE"));
    let bad = dsteiner(&["experiment", "nope"]);
    assert_eq!(bad.status.code(), Some(3));
}
