//! Named models and formulas used throughout the tests and by the CLI.

use std::collections::BTreeSet;

use crate::cgm::{build_password_model, build_river_crossing, sheep_names, wolf_names, Cgm, CrossingMode};
use crate::error::{Error, Result};
use crate::syntax::Dialect;

pub const GAMMA_A: &str = "<<{a,b} -> (p U q); {a} -> (true U !(p | q))>>";
pub const GAMMA_B: &str = "<<{1,2} -> G p; {1,3} -> G q>>";
pub const GAMMA_B_PRIME: &str = "<<{1,2} -> X <<{1} -> G p>>; {1,3} -> X <<{1} -> G q>>; {1,2,3} -> G (p & q)>>";
pub const PASSWORD_COMMON: &str = "<<{A,B} -> (true U H_A & H_B)>>";
pub const PASSWORD_UNTIL: &str = "<<{A,B} -> ((H_A -> H_B) & (H_B -> H_A) U H_A & H_B)>>";
pub const PASSWORD_GUARDED: &str =
    "<<{A,B} -> (true U H_A & H_B); {A} -> G (H_B -> H_A); {B} -> G (H_A -> H_B)>>";

/// A model with its query state and a list of formulas of interest.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub description: String,
    pub model: Cgm,
    pub start: String,
    pub formulas: Vec<CorpusFormula>,
}

#[derive(Clone, Debug)]
pub struct CorpusFormula {
    pub label: String,
    pub text: String,
    pub dialect: Dialect,
}

fn formula(label: &str, text: &str) -> CorpusFormula {
    CorpusFormula { label: label.into(), text: text.into(), dialect: Dialect::Tlcga }
}

fn labels(ps: &[&str]) -> BTreeSet<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

/// Two agents; `a` decides at `s` between `s1` (q) and `s2` (no labels).
/// Both return to `s`.
pub fn example_a() -> Cgm {
    let states = vec![("s".into(), labels(&["p"])), ("s1".into(), labels(&["q"])), ("s2".into(), labels(&[]))];
    let actions = vec![
        vec![strings(&["a1", "a2"]), strings(&["b"])],
        vec![strings(&["a"]), strings(&["b"])],
        vec![strings(&["a"]), strings(&["b"])],
    ];
    let outcome = vec![vec![1, 2], vec![0], vec![0]];
    Cgm::from_parts(strings(&["a", "b"]), states, actions, outcome).expect("well-formed")
}

/// Three players; any deviation from `(a1,a2,a3)` at `s` leads to `s2`,
/// where player 1 picks between a p-sink and a q-sink.
pub fn example_b() -> Cgm {
    let states = vec![
        ("s".into(), labels(&["p", "q"])),
        ("s1".into(), labels(&["p", "q"])),
        ("s2".into(), labels(&["p", "q"])),
        ("s31".into(), labels(&["p"])),
        ("s32".into(), labels(&["q"])),
    ];
    let star = || strings(&["*"]);
    let actions = vec![
        vec![strings(&["a1"]), strings(&["a2", "b2"]), strings(&["a3", "b3"])],
        vec![star(), star(), star()],
        vec![strings(&["a_p", "a_q"]), star(), star()],
        vec![star(), star(), star()],
        vec![star(), star(), star()],
    ];
    let outcome = vec![vec![1, 2, 2, 2], vec![1], vec![3, 4], vec![3], vec![4]];
    Cgm::from_parts(strings(&["1", "2", "3"]), states, actions, outcome).expect("well-formed")
}

pub fn sheep_wolves_formula(n_sheep: usize, n_wolves: usize) -> String {
    let all: Vec<String> = sheep_names(n_sheep).into_iter().chain(wolf_names(n_wolves)).collect();
    format!("<<{{{}}} -> (true U c); {{{}}} -> G !e>>", all.join(","), sheep_names(n_sheep).join(","))
}

pub const NAMES: [&str; 5] = ["exampleA", "exampleB", "exampleB-gamma-prime", "sheep-wolves", "password"];

/// Builds a registered corpus entry. `sheep-wolves` takes
/// `[n_sheep, n_wolves, mode]`, defaulting to `3 3 simultaneous`.
pub fn build(name: &str, params: &[String]) -> Result<CorpusEntry> {
    match name {
        "exampleA" => Ok(CorpusEntry {
            name: name.into(),
            description: "two agents; the goal needs a strategy with memory".into(),
            model: example_a(),
            start: "s".into(),
            formulas: vec![
                formula("gamma_A", GAMMA_A),
                formula("a-reaches-q", "<<{a} -> (true U q)>>"),
                formula("a-next-q", "<<{a} -> X q>>"),
                formula("b-next-q", "<<{b} -> X q>>"),
                formula("all-next-not-p", "<<{} -> X !p>>"),
                formula("grand-globally", "<<{a,b} -> G (p | q)>>"),
            ],
        }),
        "exampleB" | "exampleB-gamma-prime" => {
            let mut formulas = vec![
                formula("gamma_B", GAMMA_B),
                formula("gamma_B_prime", GAMMA_B_PRIME),
                formula("one-gp", "<<{1} -> G p>>"),
                formula("one-gq", "<<{1} -> G q>>"),
                formula("pair-gp", "<<{1,2} -> G p>>"),
                formula("implication", &format!("{GAMMA_B_PRIME} -> {GAMMA_B}")),
            ];
            if name == "exampleB-gamma-prime" {
                formulas.swap(0, 1);
            }
            Ok(CorpusEntry {
                name: name.into(),
                description: "three players; play-based and path-based strategies differ".into(),
                model: example_b(),
                start: "s".into(),
                formulas,
            })
        }
        "sheep-wolves" => {
            let n: usize = params.first().map(|p| p.parse()).transpose().map_err(bad_param)?.unwrap_or(3);
            let m: usize = params.get(1).map(|p| p.parse()).transpose().map_err(bad_param)?.unwrap_or(3);
            let mode: CrossingMode = params.get(2).map(|p| p.parse()).transpose()?.unwrap_or(CrossingMode::Simultaneous);
            let model = build_river_crossing(n, m, mode)?;
            let start = model.state_id(0).to_string();
            Ok(CorpusEntry {
                name: name.into(),
                description: format!("river crossing with {n} sheep and {m} wolves, {mode:?}"),
                model,
                start,
                formulas: vec![
                    formula("crossing-safe", &sheep_wolves_formula(n, m)),
                    formula(
                        "crossing-common",
                        &format!(
                            "<<{{{}}} -> (!e U c)>>",
                            sheep_names(n).into_iter().chain(wolf_names(m)).collect::<Vec<_>>().join(",")
                        ),
                    ),
                ],
            })
        }
        "password" => Ok(CorpusEntry {
            name: name.into(),
            description: "password exchange with simultaneous irreversible sends".into(),
            model: build_password_model(),
            start: "none".into(),
            formulas: vec![
                formula("common", PASSWORD_COMMON),
                formula("common-until", PASSWORD_UNTIL),
                formula("guarded", PASSWORD_GUARDED),
            ],
        }),
        other => Err(Error::Precondition(format!("unknown corpus entry `{other}`"))),
    }
}

fn bad_param(e: std::num::ParseIntError) -> Error {
    Error::Precondition(format!("bad corpus parameter: {e}"))
}

/// Small corpus used by the property sweeps: every entry has at most a few
/// dozen states.
pub fn sweep_corpus() -> Vec<CorpusEntry> {
    let mut v = vec![
        build("exampleA", &[]).unwrap(),
        build("exampleB", &[]).unwrap(),
        build("password", &[]).unwrap(),
    ];
    for (n, m, mode) in [(1, 1, "simultaneous"), (2, 1, "wolves_then_sheep")] {
        v.push(build("sheep-wolves", &[n.to_string(), m.to_string(), mode.to_string()]).unwrap());
    }
    v
}
