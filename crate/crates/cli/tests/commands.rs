use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn k3count(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3count"))
        .args(args)
        .env_remove("K3COUNT_PRECISION")
        .env_remove("K3COUNT_SIEVE_SEGMENT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_s2_to_a_thousand() {
    let s2 = fixture("s2.json");
    let o = k3count(&["verify", s2.to_str().unwrap(), "--max", "1000"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("verified"));
}

#[test]
fn verify_with_coefficient_backend() {
    let s4 = fixture("s4.json");
    let o = k3count(&["verify", s4.to_str().unwrap(), "--max", "200", "--backend", "coefficient"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn init_reports_unknowns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.json");
    let s1 = fixture("s1.json");
    let o = k3count(&["init", s1.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("unknowns: 92"), "{text}");
    let largest: u64 = text
        .lines()
        .find_map(|l| l.strip_prefix("largest prime: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!(largest <= 1000);
    assert!(out.exists());
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let s4 = fixture("s4.json");
    let s4 = s4.to_str().unwrap();
    let mut tables = Vec::new();
    let mut ranges = Vec::new();
    for run in 0..2 {
        let t = dir.path().join(format!("t{run}.json"));
        let c = dir.path().join(format!("c{run}.csv"));
        let o = k3count(&["init", s4, "--method", "direct", "--out", t.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
        let jobs = if run == 0 { "1" } else { "2" };
        let o = k3count(&[
            "count-range",
            s4,
            "--table",
            t.to_str().unwrap(),
            "--max",
            "2000",
            "--jobs",
            jobs,
            "--out",
            c.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        tables.push(std::fs::read(&t).unwrap());
        ranges.push(std::fs::read(&c).unwrap());
    }
    assert_eq!(tables[0], tables[1]);
    assert_eq!(ranges[0], ranges[1]);
}

#[test]
fn small_range_framing() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    let s4 = fixture("s4.json");
    let s4 = s4.to_str().unwrap();
    k3count(&["init", s4, "--out", t.to_str().unwrap()]);
    let o = k3count(&["count-range", s4, "--table", t.to_str().unwrap(), "--max", "30"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "p,count,trace_mod16,class_index");
    assert_eq!(&lines[1..3], &["# bad 3", "# bad 5"]);
    let ps: Vec<&str> = lines[3..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ps, ["7", "11", "13", "17", "19", "23", "29"]);
}

#[test]
fn exit_codes() {
    let s1 = fixture("s1.json");
    let s1 = s1.to_str().unwrap();
    assert_eq!(k3count(&["--help"]).status.code(), Some(0));
    assert_eq!(k3count(&["--version"]).status.code(), Some(0));
    assert_eq!(k3count(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(k3count(&["validate", "/nonexistent/s.json"]).status.code(), Some(1));
    // bad prime
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    k3count(&["init", s1, "--out", t.to_str().unwrap()]);
    assert_eq!(
        k3count(&["count", s1, "--table", t.to_str().unwrap(), "-p", "13"]).status.code(),
        Some(2)
    );
    // five lines
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"name":"x","mode":"six-rational-lines","lines":[[1,0,0],[0,1,0],[0,0,1],[1,1,1],[1,2,3]],"picard_rank":16,"trivial_galois_pic":true}"#,
    )
    .unwrap();
    assert_eq!(k3count(&["validate", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn s5_needs_no_table() {
    let s5 = fixture("s5.json");
    let o = k3count(&["count", s5.to_str().unwrap(), "-p", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("count=64"));
}

#[test]
fn lattice_selftest_json() {
    let o = k3count(&["selftest", "lattice", "--json", "--trials", "50"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["trials"], 50);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn brauer_selftest_reports_structure() {
    let o = k3count(&["selftest", "brauer"]);
    let text = stdout(&o);
    assert!(text.contains("quotient: dim 6 (order 64)"));
    assert!(text.contains("Sym(6) orbit of b6: 12 (stabilizer 60)"));
    assert!(text.contains("(1 2)          -> (1 4)(2 5)(3 6)"));
    // the printed square of G4 is only conjugate to the computed one
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn precision_override_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_k3count"))
        .args(["selftest", "lattice", "--trials", "5"])
        .env("K3COUNT_PRECISION", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_k3count"))
        .args(["selftest", "lattice", "--trials", "20"])
        .env("K3COUNT_PRECISION", "16")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
}
