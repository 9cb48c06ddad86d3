use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::strategies::{verify_witness, MemoryMode};
use crate::syntax::{parse_state_formula, Dialect};

/// One-shot game at `s`: A has x,y; B has x,y,z. Outcome labels by profile.
fn game(labels: &[&[&str]]) -> Cgm {
    let agents = vec!["A".to_string(), "B".to_string()];
    let mut states = vec![("s".to_string(), BTreeSet::new())];
    let mut actions = vec![vec![vec!["x".to_string(), "y".to_string()], vec!["x".into(), "y".into(), "z".into()]]];
    let mut outcome = vec![(1..=6).collect::<Vec<usize>>()];
    for (i, l) in labels.iter().enumerate() {
        states.push((format!("t{i}"), l.iter().map(|s| s.to_string()).collect()));
        actions.push(vec![vec!["stay".to_string()], vec!["stay".to_string()]]);
        outcome.push(vec![i + 1]);
    }
    Cgm::from_parts(agents, states, actions, outcome).unwrap()
}

fn goals() -> GoalAssignment {
    match &*parse_state_formula("<<{A} -> X pA; {B} -> X pB>>", Dialect::Tlcga).unwrap() {
        StateFormula::Brak(g) => g.clone(),
        _ => unreachable!(),
    }
}

fn ga(text: &str) -> GoalAssignment {
    match &*parse_state_formula(text, Dialect::TlcgaPlus).unwrap() {
        StateFormula::Brak(g) => g.clone(),
        other => panic!("{other:?}"),
    }
}

fn play(m: &Cgm, a: usize, b: usize) -> FiniteStrategyProfile {
    FiniteStrategyProfile::from_fn(m, 0, MemoryMode::PathSuffix(1), |mem| if mem.last() == 0 { vec![a, b] } else { vec![0, 0] }).unwrap()
}

fn agents() -> Vec<String> {
    vec!["A".into(), "B".into()]
}

// A controls pA, B controls pB.
fn independent() -> Cgm {
    game(&[&["pA", "pB"], &["pA"], &["pA"], &["pB"], &[], &[]])
}

#[test]
fn partition_of_plays() {
    let m = independent();
    let p = partition_outcomes(&m, 0, &play(&m, 0, 0), &goals()).unwrap();
    assert_eq!(p.winners, vec!["A", "B"]);
    assert!(p.losers.is_empty());
    let p = partition_outcomes(&m, 0, &play(&m, 0, 1), &goals()).unwrap();
    assert_eq!((p.winners.clone(), p.losers.clone()), (vec!["A".to_string()], vec!["B".to_string()]));
    assert!(p.is_winning(&Coalition::new(["A"])));
    let top = partition_outcomes(&m, 0, &play(&m, 0, 1), &GoalAssignment::top()).unwrap();
    assert_eq!(top, OutcomePartition::default());
}

#[test]
fn nash_displays() {
    let m = independent();
    let both = partition_outcomes(&m, 0, &play(&m, 0, 0), &goals()).unwrap();
    assert_eq!(nash_ga(&agents(), &goals(), &both).unwrap(), ga("<<{A,B} -> X (pA & pB)>>"));
    let a_wins = partition_outcomes(&m, 0, &play(&m, 0, 1), &goals()).unwrap();
    assert_eq!(nash_ga(&agents(), &goals(), &a_wins).unwrap(), ga("<<{A,B} -> X (pA & !pB); {A} -> X !pB>>"));
    let none = partition_outcomes(&m, 0, &play(&m, 1, 1), &goals()).unwrap();
    assert_eq!(
        nash_ga(&agents(), &goals(), &none).unwrap(),
        ga("<<{A,B} -> X (!pA & !pB); {A} -> X !pB; {B} -> X !pA>>")
    );
    assert!(nash_ga(&agents(), &ga("<<{A,B} -> X pA>>"), &none).is_err());
}

#[test]
fn nash_matches_brute_force_here() {
    let m = independent();
    for a in 0..2 {
        for b in 0..3 {
            let sigma = play(&m, a, b);
            let part = partition_outcomes(&m, 0, &sigma, &goals()).unwrap();
            let witnessed = verify_witness(&m, 0, &sigma, &nash_ga(&agents(), &goals(), &part).unwrap()).unwrap();
            let dev = brute_force_nash(&m, 0, &sigma, &goals(), 10_000).unwrap();
            assert_eq!(witnessed, dev.is_none(), "profile ({a},{b})");
            // Every loser here can fix its own goal.
            assert_eq!(witnessed, part.losers.is_empty());
        }
    }
}

#[test]
fn nash_coherence_on_random_games() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let labels: Vec<Vec<&str>> = (0..6)
            .map(|_| ["pA", "pB"].into_iter().filter(|_| rng.gen_bool(0.5)).collect())
            .collect();
        let refs: Vec<&[&str]> = labels.iter().map(Vec::as_slice).collect();
        let m = game(&refs);
        let sigma = play(&m, rng.gen_range(0..2), rng.gen_range(0..3));
        let part = partition_outcomes(&m, 0, &sigma, &goals()).unwrap();
        let witnessed = verify_witness(&m, 0, &sigma, &nash_ga(&agents(), &goals(), &part).unwrap()).unwrap();
        let dev = brute_force_nash(&m, 0, &sigma, &goals(), 10_000).unwrap();
        assert_eq!(witnessed, dev.is_none(), "{labels:?}");
    }
}

#[test]
fn strong_and_coalitional() {
    let m = independent();
    let none = partition_outcomes(&m, 0, &play(&m, 1, 1), &goals()).unwrap();
    assert_eq!(
        strong_ga(&agents(), &goals(), &none).unwrap(),
        ga("<<{A} -> X !pB; {B} -> X !pA; {} -> X !(pA & pB)>>")
    );
    assert_eq!(
        coalitional_ga(&agents(), &goals(), &none).unwrap(),
        ga("<<{A} -> X !pB; {B} -> X !pA>>")
    );
    let both = partition_outcomes(&m, 0, &play(&m, 0, 0), &goals()).unwrap();
    assert_eq!(strong_ga(&agents(), &goals(), &both).unwrap(), ga("<<{A,B} -> X (pA & pB)>>"));
    assert_eq!(coalitional_ga(&agents(), &goals(), &both).unwrap(), ga("<<{A,B} -> X (pA & pB)>>"));
    assert!(strong_ga(&agents(), &ga("<<{A,B} -> X pA>>"), &both).is_err());
}

#[test]
fn g_goals_stay_in_tlcga() {
    let g = conj_goals([PathFormula::globally(prop("p")), PathFormula::globally(prop("q"))]).unwrap();
    assert_eq!(g, PathFormula::globally(and(prop("p"), prop("q"))));
    assert_eq!(negate_goal(&g).unwrap(), PathFormula::until(tt(), not(and(prop("p"), prop("q")))));
    let mixed = conj_goals([PathFormula::globally(prop("p")), PathFormula::next(prop("q"))]).unwrap();
    assert!(mixed.has_path_and());
    assert!(negate_goal(&mixed).is_err());
    assert!(negate_goal(&PathFormula::until(prop("p"), prop("q"))).is_err());
    assert_eq!(
        negate_goal(&PathFormula::eventually(prop("q"))).unwrap(),
        PathFormula::globally(not(prop("q")))
    );
}

#[test]
fn coequilibria() {
    let agents3: Vec<String> = vec!["a".into(), "b".into(), "c".into()];
    let g = ga("<<{a} -> X p; {b} -> X q; {a,b} -> X r; {a,c} -> X s; {a,b,c} -> X t>>");
    assert_eq!(coequilibrium_ga(&agents3, &g), ga("<<{a} -> X p; {b} -> X q; {a,b,c} -> X t>>"));
    assert_eq!(coequilibrium_ga(&agents(), &goals()), goals());
    let m = independent();
    assert!(check_coequilibrium(&m, 0, &GoalAssignment::top()).unwrap());
    assert!(check_coequilibrium(&m, 0, &goals()).unwrap());
    let m = game(&[&["pA"], &["pB"], &["pB"], &["pA"], &[], &[]]);
    assert!(!check_coequilibrium(&m, 0, &goals()).unwrap());
}

#[test]
fn core() {
    let f = core_nonempty_formula(&goals(), &agents()).unwrap();
    let expected = parse_state_formula(
        "!<<{A} -> X pA>> & !<<{B} -> X pB>> & !<<{A,B} -> X (pA & pB)>>",
        Dialect::Tlcga,
    )
    .unwrap();
    assert_eq!(f, expected);
    assert_eq!(core_nonempty_formula(&goals(), &[]).unwrap(), tt());
    let m = independent();
    assert!(has_beneficial_deviation(&m, 0, &goals(), &["B".to_string()]).unwrap());
    assert!(!crate::checker::check(&m, 0, &core_nonempty_formula(&goals(), &["B".to_string()]).unwrap()).unwrap());
    // B alone cannot force pB when A decides it.
    let m = game(&[&["pB"], &["pB"], &["pB"], &[], &[], &[]]);
    assert!(!has_beneficial_deviation(&m, 0, &goals(), &["B".to_string()]).unwrap());
}
