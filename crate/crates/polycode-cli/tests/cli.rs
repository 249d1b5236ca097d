use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polycode"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn round_trip(spec_text: &str, msg_text: &str, algo: &str) {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "code.spec", spec_text);
    let msg = write(dir.path(), "msg", msg_text);
    let cw = dir.path().join("cw");
    let w = dir.path().join("w");
    let dec = dir.path().join("dec");
    assert!(run(&["encode", "--spec", s(&spec), "--in", s(&msg), "--out", s(&cw)]).status.success());
    let out = run(&["corrupt", "--spec", s(&spec), "--in", s(&cw), "--out", s(&w), "--errors", "0", "--seed", "1"]);
    assert!(out.status.success());
    assert_eq!(std::fs::read(&cw).unwrap(), std::fs::read(&w).unwrap());
    let out = run(&["decode", "--spec", s(&spec), "--in", s(&w), "--algo", algo, "--out", s(&dec)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::read(&dec).unwrap(), msg_text.as_bytes(), "algo {algo}");
}

#[test]
fn round_trips_are_byte_exact() {
    round_trip("family=rs\np=7\nk=3\n", "1 0 5\n", "unique");
    round_trip("family=rs\np=17\nn=16\nk=4\n", "3 1 4 1\n", "gs");
    round_trip("family=rs\np=17\nn=16\nk=2\n", "9 2\n", "sudan");
    round_trip("family=mult\np=7\nk=3\ns=2\n", "2 6 1\n", "mult");
    round_trip("family=mult\np=11\nk=4\ns=3\nr=2\n", "1 2 3 4\n", "mult-cap");
    round_trip("family=rs\np=2\nd=4\nk=3\n", "0,1,1,0 1,0,0,0 0,0,0,1\n", "unique");
    round_trip("family=rs-subfield\np=5\nk=2\ns=2\nr=2\n", "1,2 3,4\n", "subfield");
}

#[test]
fn rm_local_corrects_clean_table() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "rm.spec", "family=rm\np=7\nm=2\nk=3\n");
    let msg = write(dir.path(), "msg", "0 0 : 1\n1 1 : 3\n2 0 : 5\n");
    let cw = dir.path().join("cw");
    let fixed = dir.path().join("fixed");
    assert!(run(&["encode", "--spec", s(&spec), "--in", s(&msg), "--out", s(&cw)]).status.success());
    let out = run(&["decode", "--spec", s(&spec), "--in", s(&cw), "--algo", "rm-local", "--out", s(&fixed)]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("bottom=0"));
    assert!(text.contains("queries_per_point=7"));
    assert_eq!(std::fs::read(&cw).unwrap(), std::fs::read(&fixed).unwrap());
}

#[test]
fn sudan_fixture_lists_both_constants() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "rs.spec", "family=rs\np=17\nn=16\nk=1\n");
    let mut word = String::new();
    for i in 0..16 {
        let v = match i {
            0..=6 => 3,
            7..=13 => 11,
            _ => 5,
        };
        word += &format!("{v}\n");
    }
    let w = write(dir.path(), "w", &word);
    let out = run(&["decode", "--spec", s(&spec), "--in", s(&w), "--algo", "sudan"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("threshold=6"));
    assert!(text.contains("count=2"));
    assert!(text.contains("agreement=7 message=3\n"));
    assert!(text.contains("agreement=7 message=11\n"));
}

#[test]
fn verify_twenty_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("family=rs\np=17\nn=16\nk=2\n", "sudan"),
        ("family=rs\np=7\nk=3\n", "unique"),
        ("family=mult\np=7\nk=3\ns=2\n", "mult"),
        ("family=rs-subfield\np=5\nk=2\ns=2\nr=2\n", "subfield"),
    ];
    for (i, (spec_text, algo)) in cases.iter().enumerate() {
        let spec = write(dir.path(), &format!("c{i}.spec"), spec_text);
        for seed in 0..20 {
            let out = run(&["verify", "--spec", s(&spec), "--algo", algo, "--seed", &seed.to_string()]);
            assert_eq!(out.status.code(), Some(0), "{algo} seed {seed}: {}", String::from_utf8_lossy(&out.stdout));
        }
    }
}

#[test]
fn identical_seeds_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "rs.spec", "family=rs\np=17\nn=16\nk=4\n");
    let msg = write(dir.path(), "msg", "1 2 3 4\n");
    let cw = dir.path().join("cw");
    assert!(run(&["encode", "--spec", s(&spec), "--in", s(&msg), "--out", s(&cw)]).status.success());
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let w = dir.path().join("w");
        let c = run(&["corrupt", "--spec", s(&spec), "--in", s(&cw), "--out", s(&w), "--error-rate", "0.3", "--seed", "42"]);
        let d = run(&["decode", "--spec", s(&spec), "--in", s(&w), "--algo", "gs", "--format", "structured"]);
        outputs.push((c.stderr, std::fs::read(&w).unwrap(), d.stdout, d.status.code()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let v1 = run(&["verify", "--spec", s(&spec), "--algo", "gs", "--seed", "9"]);
    let v2 = run(&["verify", "--spec", s(&spec), "--algo", "gs", "--seed", "9"]);
    assert_eq!(v1.stdout, v2.stdout);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "rs.spec", "family=rs\np=7\nk=3\n");
    let w = write(dir.path(), "w", "0\n1\n0\n1\n0\n1\n2\n");
    let out = run(&["decode", "--spec", s(&spec), "--in", s(&w), "--algo", "unique"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("count=0"));
    assert_eq!(run(&["decode", "--spec", s(&spec), "--in", s(&w), "--algo", "mult"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let bad = write(dir.path(), "bad.spec", "family=rs\n");
    assert_eq!(run(&["decode", "--spec", s(&bad), "--in", s(&w), "--algo", "unique"]).status.code(), Some(2));
    let out = run(&["corrupt", "--spec", s(&spec), "--in", s(&w), "--positions", "0,9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn explicit_positions_reported() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "rs.spec", "family=rs\np=7\nk=3\n");
    let w = write(dir.path(), "w", "0\n1\n2\n3\n4\n5\n6\n");
    let out_path = dir.path().join("out");
    let out = run(&["corrupt", "--spec", s(&spec), "--in", s(&w), "--out", s(&out_path), "--positions", "0,3", "--seed", "5"]);
    assert!(out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("positions=0,3"));
    let a = std::fs::read_to_string(&w).unwrap();
    let b = std::fs::read_to_string(&out_path).unwrap();
    let diff: Vec<usize> = a.lines().zip(b.lines()).enumerate().filter(|(_, (x, y))| x != y).map(|(i, _)| i).collect();
    assert_eq!(diff, vec![0, 3]);
}

#[test]
fn bounds_command() {
    let out = run(&["bounds", "--kind", "johnson", "--delta", "3/4", "--alpha", "2/5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("value=35/11"));
    assert!(text.contains("floor=3"));
    let out = run(&["bounds", "--kind", "johnson", "--delta", "3/4", "--alpha", "1/2"]);
    assert_eq!(out.status.code(), Some(2));
}
