use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tlcga(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tlcga")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn field(out: &str, key: &str) -> Option<String> {
    out.lines().find_map(|l| l.strip_prefix(&format!("{key}: ")).map(String::from))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

const GAMMA_A: &str = "<<{a,b} -> (p U q); {a} -> (true U !(p | q))>>";

#[test]
fn check_on_corpus_model() {
    let o = tlcga(&["check", "--model", "corpus:exampleA", "--formula", GAMMA_A, "--extension"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(field(&out, "holds").as_deref(), Some("true"));
    assert_eq!(field(&out, "state").as_deref(), Some("s"));
    assert!(field(&out, "extension").unwrap().contains('s'));
}

#[test]
fn exit_codes() {
    assert_eq!(tlcga(&["check", "--bogus"]).status.code(), Some(1));
    assert_eq!(tlcga(&["check", "--model", "/nonexistent.json", "--formula", "p"]).status.code(), Some(2));
    assert_eq!(tlcga(&["check", "--model", "corpus:exampleA", "--formula", "<<{a} ->"]).status.code(), Some(2));
    assert_eq!(tlcga(&["check", "--model", "corpus:nothing", "--formula", "p"]).status.code(), Some(2));
    assert_eq!(tlcga(&["--help"]).status.code(), Some(0));
}

#[test]
fn invalid_model_exits_two_with_violation() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"agents":["a"],"states":[]}"#);
    let o = tlcga(&["validate", "--model", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid model"));
}

#[test]
fn json_output_is_one_object() {
    let o = tlcga(&["--json", "check", "--model", "corpus:exampleA", "--formula", "p"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["holds"], Value::Bool(true));
    assert_eq!(v["model"].as_str().unwrap().len(), 16);
}

#[test]
fn timing_is_opt_in() {
    let plain = stdout(&tlcga(&["nf", "--formula", "<<{a} -> G p>>"]));
    assert!(field(&plain, "time_ms").is_none());
    let timed = stdout(&tlcga(&["--timing", "nf", "--formula", "<<{a} -> G p>>"]));
    assert!(field(&timed, "time_ms").is_some());
    assert_eq!(field(&plain, "command"), field(&timed, "command"));
}

#[test]
fn oracle_output_feeds_stability() {
    let dir = tempfile::tempdir().unwrap();
    let o = tlcga(&["oracle", "--model", "corpus:exampleA", "--formula", "<<{a} -> (true U q)>>"]);
    let out = stdout(&o);
    assert_eq!(field(&out, "result").as_deref(), Some("witness (verified)"));
    let profile = write(dir.path(), "profile.txt", &out);
    let goals = write(dir.path(), "goals.txt", "# goals\n<<{a} -> (true U q); {b} -> G !q>>\n");
    let s = stdout(&tlcga(&[
        "stability", "--model", "corpus:exampleA", "--notion", "nash", "--goals", &goals, "--profile", &profile,
    ]));
    assert_eq!(field(&s, "winners").as_deref(), Some("{a}"));
    assert_eq!(field(&s, "profile_is_nash").as_deref(), Some("true"));
    assert_eq!(field(&s, "holds").as_deref(), Some("true"));
}

#[test]
fn oracle_memory_matters() {
    let pos = stdout(&tlcga(&["oracle", "--model", "corpus:exampleA", "--formula", GAMMA_A]));
    assert_eq!(field(&pos, "result").as_deref(), Some("none (exact)"));
    let path = stdout(&tlcga(&["oracle", "--model", "corpus:exampleA", "--formula", GAMMA_A, "--mode", "path:2"]));
    assert_eq!(field(&path, "result").as_deref(), Some("witness (verified)"));
    assert_eq!(field(&path, "mode").as_deref(), Some("path:2"));
}

#[test]
fn stability_without_profile_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let goals = write(dir.path(), "g.txt", "<<{a} -> X q>>");
    let o = tlcga(&["stability", "--model", "corpus:exampleA", "--notion", "nash", "--goals", &goals]);
    assert_eq!(o.status.code(), Some(2));
    let o = tlcga(&["stability", "--model", "corpus:exampleA", "--notion", "coeq", "--goals", &goals]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn onestep_repaired_and_literal_differ() {
    let dir = tempfile::tempdir().unwrap();
    let seq = write(dir.path(), "seq.txt", "<<{a} -> X p>>\n!<<{a} -> X !q; {a,b} -> X !p>>\n");
    let con = write(dir.path(), "con.txt", "{p}\n{q}\n");
    let rep = stdout(&tlcga(&["onestep-sat", "--sequent", &seq, "--constraint", &con]));
    assert_eq!(field(&rep, "result").as_deref(), Some("SAT"));
    let lit = stdout(&tlcga(&["onestep-sat", "--sequent", &seq, "--constraint", &con, "--literal"]));
    assert_eq!(field(&lit, "result").as_deref(), Some("UNSAT"));
    assert!(field(&lit, "certificate").is_some());
}

#[test]
fn onestep_unsat_has_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let seq = write(dir.path(), "seq.txt", "<<{a} -> X p>>\n<<{b} -> X q>>\n");
    let con = write(dir.path(), "con.txt", "{p}\n{q}\n");
    let out = stdout(&tlcga(&["onestep-sat", "--sequent", &seq, "--constraint", &con]));
    assert_eq!(field(&out, "result").as_deref(), Some("UNSAT"));
    let w = stdout(&tlcga(&["onestep-sat", "--sequent", &seq, "--constraint", &con, "--agents", "a,b", "--witness"]));
    assert!(!w.contains("game form"));
}

#[test]
fn onestep_disjunction_uses_branches() {
    let dir = tempfile::tempdir().unwrap();
    let seq = write(dir.path(), "seq.txt", "<<{a} -> X p>> & <<{b} -> X q>> | <<{a} -> X p>>\n");
    let con = write(dir.path(), "con.txt", "{p}\n{q}\n");
    let out = stdout(&tlcga(&["onestep-sat", "--sequent", &seq, "--constraint", &con, "--witness"]));
    assert_eq!(field(&out, "result").as_deref(), Some("SAT"));
    assert!(out.contains("game form"));
}

#[test]
fn corpus_export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().display().to_string();
    let o = tlcga(&["corpus", "exampleA", "--out", &d]);
    assert_eq!(o.status.code(), Some(0));
    let model = dir.path().join("exampleA.json").display().to_string();
    let v = stdout(&tlcga(&["validate", "--model", &model]));
    assert_eq!(field(&v, "valid").as_deref(), Some("true"));
    let hash = field(&stdout(&o), "model");
    assert_eq!(field(&v, "model"), hash);
    let f = dir.path().join("exampleA.gamma_A.formula").display().to_string();
    let text = std::fs::read_to_string(&f).unwrap();
    assert!(text.starts_with("# corpus entry: exampleA"));
    let c = stdout(&tlcga(&["check", "--model", &model, "--formula-file", &f]));
    assert_eq!(field(&c, "holds").as_deref(), Some("true"));
}

#[test]
fn corpus_list_names_every_entry() {
    let out = stdout(&tlcga(&["corpus", "--list"]));
    for n in ["exampleA", "exampleB", "sheep-wolves", "password"] {
        assert!(out.contains(n), "{n}");
    }
}

#[test]
fn bisim_across_models() {
    let out = stdout(&tlcga(&[
        "bisim", "--model", "corpus:exampleA", "--other", "corpus:exampleA", "--query", "s", "s1",
    ]));
    assert_eq!(field(&out, "bisimilar").as_deref(), Some("false"));
    let f = field(&out, "distinguishing").expect("distinguishing formula");
    let a = stdout(&tlcga(&["check", "--model", "corpus:exampleA", "--state", "s", "--formula", &f]));
    let b = stdout(&tlcga(&["check", "--model", "corpus:exampleA", "--state", "s1", "--formula", &f]));
    assert_ne!(field(&a, "holds"), field(&b, "holds"));
}

#[test]
fn scos_makes_model_injective() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("scos.json").display().to_string();
    let out = stdout(&tlcga(&["scos", "--model", "corpus:exampleB", "--out", &out_path]));
    assert_eq!(field(&out, "injective").as_deref(), Some("true"));
    let v = stdout(&tlcga(&["validate", "--model", &out_path]));
    assert_eq!(field(&v, "injective").as_deref(), Some("true"));
}

#[test]
fn formula_commands() {
    let t = stdout(&tlcga(&["translate", "--formula", "<<{a} -> G p>>"]));
    assert!(field(&t, "result").unwrap().starts_with("nu "));
    let u = stdout(&tlcga(&["unfold", "--parts", "--formula", "<<{a} -> (p U q)>>"]));
    assert!(u.contains("finish: q"));
    let i = stdout(&tlcga(&["ind", "--formula", "<<{a} -> G p>>", "--phi", "p"]));
    assert!(field(&i, "result").is_some());
    let x = tlcga(&["oplus", "--formula", "p"]);
    assert_eq!(x.status.code(), Some(2));
}

#[test]
fn axioms_are_deterministic_across_jobs() {
    let a = stdout(&tlcga(&["axioms", "--samples", "10", "--jobs", "1"]));
    let b = stdout(&tlcga(&["axioms", "--samples", "10", "--jobs", "3"]));
    let strip = |s: &str| s.lines().filter(|l| !l.starts_with("command")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(field(&a, "counterexamples").as_deref(), Some("0"));
}

#[test]
fn limits_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let lits: Vec<String> = (0..17).map(|i| format!("<<{{a}} -> X p{i}>>")).collect();
    let seq = write(dir.path(), "seq.txt", &lits.join("\n"));
    let all: Vec<String> = (0..17).map(|i| format!("p{i}")).collect();
    let con = write(dir.path(), "con.txt", &format!("{{{}}}\n", all.join(",")));
    let o = tlcga(&["onestep-sat", "--sequent", &seq, "--constraint", &con]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}
