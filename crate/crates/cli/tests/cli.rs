use std::path::{Path, PathBuf};
use std::process::Command;

use flw_core::gen::{random_deduction, random_micro_instance, rng};
use flw_core::{builtin_calculus, Fragment};

fn flw(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_flw"))
        .args(args)
        .env_remove("FLW_CONFIG")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn corpus(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus/lcs").join(name).display().to_string()
}

fn file(dir: &Path, name: &str, text: &str) -> String {
    let p: PathBuf = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn without_timing(report: &str) -> String {
    report.lines().filter(|l| !l.starts_with("wall_time_ms")).collect::<Vec<_>>().join("\n")
}

#[test]
fn decide_yes_no_and_malformed() {
    let dir = tempfile::tempdir().unwrap();
    let t = file(dir.path(), "t.flw", "p |- q\nq |- r\n");
    let yes = file(dir.path(), "yes.flw", "p |- r\n");
    let no = file(dir.path(), "no.flw", "q |- p\n");
    let (code, out) = flw(&["decide", "--theory", &t, "--goal", &yes, "--fragment", "*"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("verdict: yes") && out.contains("bounds: passed"));
    let (code, out) = flw(&["decide", "--theory", &t, "--goal", &no, "--fragment", "*"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("verdict: no"));
    let bad = file(dir.path(), "bad.flw", "p |- q |-\n");
    assert_eq!(flw(&["decide", "--theory", &bad, "--goal", &yes]).0, 2);
    let irregular = file(dir.path(), "irr.flw", "p * q |- r\n");
    assert_eq!(flw(&["decide", "--theory", &irregular, "--goal", &yes]).0, 2);
}

#[test]
fn proofs_check_and_normalize_unchanged() {
    let dir = tempfile::tempdir().unwrap();
    let t = file(dir.path(), "t.flw", "p |- q\nq |- r\n");
    let g = file(dir.path(), "g.flw", "p |- r\n");
    let proof = dir.path().join("proof.sexpr").display().to_string();
    let (code, out) = flw(&["decide", "--theory", &t, "--goal", &g, "--fragment", "*", "--proof", &proof]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = flw(&["check", "--derivation", &proof, "--theory", &t, "--require-standard"]);
    assert_eq!(code, 0, "{out}");
    let norm = dir.path().join("norm.sexpr").display().to_string();
    let (code, out) = flw(&["normalize", "--derivation", &proof, "--theory", &t, "--out", &norm]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(std::fs::read_to_string(&proof).unwrap(), std::fs::read_to_string(&norm).unwrap());
    let junk = file(dir.path(), "junk.sexpr", "(id \"p |- p\"");
    assert_eq!(flw(&["check", "--derivation", &junk, "--theory", &t]).0, 2);
    assert_eq!(flw(&["normalize", "--derivation", &junk, "--theory", &t, "--out", &norm]).0, 2);
}

#[test]
fn nonstandard_cuts_flagged_then_removed() {
    let dir = tempfile::tempdir().unwrap();
    let c = builtin_calculus(Fragment::parse("*").unwrap());
    let mut r = rng(5);
    let (theory, _) = random_micro_instance(&mut r, 6, 3);
    let d = random_deduction(&mut r, &c, &theory, 2).unwrap();
    let t = file(dir.path(), "t.flw", &theory.to_string());
    let dpath = file(dir.path(), "d.sexpr", &d.to_sexpr());
    assert_eq!(flw(&["check", "--derivation", &dpath, "--theory", &t]).0, 0);
    let (code, out) = flw(&["check", "--derivation", &dpath, "--theory", &t, "--require-standard"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("standard: false"));
    let norm = dir.path().join("n.sexpr").display().to_string();
    let (code, out) = flw(&["normalize", "--derivation", &dpath, "--theory", &t, "--out", &norm]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = flw(&["check", "--derivation", &norm, "--theory", &t, "--require-standard"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains(&format!("endsequent: {}", d.sequent)));
}

#[test]
fn reachability_modes() {
    let intro = corpus("intro.lcs");
    let (code, out) = flw(&["lcs-reach", "--lcs", &intro, "--mode", "exact"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("trace: q1 c1 a ? q2"));
    let (code, _) = flw(&["lcs-reach", "--lcs", &intro, "--from", "q2 : b ; a", "--to", "q2 : b ; a"]);
    assert_eq!(code, 0);
    let back = ["lcs-reach", "--lcs", &intro, "--from", "q2 : ;", "--to", "q1 : ;"];
    let (code, exact) = flw(&back);
    assert_eq!(code, 1);
    assert!(exact.contains("verdict: no\n"));
    let mut bounded = back.to_vec();
    bounded.extend(["--mode", "bounded", "--cap", "2"]);
    let (code, out) = flw(&bounded);
    assert_eq!(code, 1);
    assert!(out.contains("verdict: no_within_cap") && out.contains("cap: 2"));
    let (code, _) = flw(&["lcs-reach", "--lcs", &intro, "--from", "q3 : ;"]);
    assert_eq!(code, 2);
}

#[test]
fn encode_writes_parseable_files() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("enc").display().to_string();
    let (code, out) = flw(&["encode", "--lcs", &corpus("intro.lcs"), "--out", &out_dir, "--canonical-only"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("round_trip: true"));
    let goals = std::fs::read_to_string(dir.path().join("enc/goals.flw")).unwrap();
    assert_eq!(
        goals,
        "Q_q1, s_1, A_a, A_a, e_1, s_2, A_b, e_2 |- Q_q2 * (s_1 * (A_a * (e_1 * (s_2 * (A_b * e_2)))))\n"
    );
    let (code, _) = flw(&["encode", "--lcs", &corpus("intro.lcs"), "--out", &out_dir, "--to", "q2 : z ;"]);
    assert_eq!(code, 2);
}

#[test]
fn xcheck_mutation_detected() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(corpus("read-forward.lcs"), dir.path().join("read-forward.lcs")).unwrap();
    let d = dir.path().display().to_string();
    let (code, out) = flw(&["xcheck", "--corpus", &d]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = flw(&["xcheck", "--corpus", &d, "--mutate"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("disagreements: 1"));
}

#[test]
fn xcheck_random_is_deterministic() {
    let args = ["xcheck", "--random", "8", "--seed", "9", "--decide", "never"];
    let (code, a) = flw(&args);
    assert_eq!(code, 0, "{a}");
    assert!(a.contains("seed: 9"));
    assert_eq!(without_timing(&a), without_timing(&flw(&args).1));
}

#[test]
fn config_file_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = file(dir.path(), "flw.toml", "cap = 1\n");
    let out = Command::new(env!("CARGO_BIN_EXE_flw"))
        .args(["lcs-reach", "--lcs", &corpus("intro.lcs"), "--mode", "bounded", "--json"])
        .env("FLW_CONFIG", &cfg)
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["details"]["cap"], "1");
    assert_eq!(v["verdict"], "yes");
    let bad = file(dir.path(), "bad.toml", "cap = \"four\"\n");
    let (code, _) = flw(&["lcs-reach", "--lcs", &corpus("intro.lcs"), "--config", &bad]);
    assert_eq!(code, 2);
}
