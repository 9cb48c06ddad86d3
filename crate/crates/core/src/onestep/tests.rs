use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::syntax::{parse_state_formula, Dialect};

fn agents(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn set(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn constraint(vars: &[&str], family: &[&[&str]]) -> SatConstraint {
    SatConstraint::new(vars.iter().copied(), family.iter().map(|z| set(z))).unwrap()
}

fn seq(ag: &[&str], lits: &[&str]) -> OneStepSequent {
    let fs: Vec<Formula> = lits.iter().map(|t| parse_state_formula(t, Dialect::Tlcga).unwrap()).collect();
    OneStepSequent::from_literals(agents(ag), &fs).unwrap()
}

fn voting() -> OneStepSequent {
    seq(&["a", "b"], &["<<{a} -> X p>>", "<<{b} -> X q>>", "!<<{b} -> X !r>>"])
}

#[test]
fn forced_sets() {
    let g = voting();
    let r = Redistribution { pairs: vec![(0b01, 0), (0b10, 1)] };
    assert_eq!(g.forced(&r), set(&["p", "q"]));
    assert_eq!(g.forced_against(&r, 0, 0b10).unwrap(), set(&["q", "r"]));
    assert!(g.forced_against(&r, 0, 0b01).is_err());
    assert!(g.forced(&Redistribution::default()).is_empty());
}

#[test]
fn voting_example() {
    let g = voting();
    let good = constraint(&["p", "q", "r"], &[&["p", "q"], &["q", "r"]]);
    assert!(g.satisfiable(&good).unwrap().is_sat());
    let form = witness_game_form(&g, &good).unwrap();
    assert_eq!(validate_game_form(&form, &g, &good).unwrap(), Ok(()));

    let bad = constraint(&["p", "q", "r"], &[&["p", "q"], &["p", "r"]]);
    assert!(!g.satisfiable(&bad).unwrap().is_sat());
    let r = Redistribution { pairs: vec![(0b01, 0), (0b10, 1)] };
    let cert = g.check_redistribution(&r, &bad).expect("a forces p, b forces q");
    assert_eq!(cert, Certificate::Blocked { redistribution: r, negative: 0 });
    let text = CertificateDisplay(&g, &cert).to_string();
    assert!(text.contains("{b} needs {q,r}"), "{text}");
    assert!(witness_game_form(&g, &bad).is_err());
    assert!(brute_force_satisfiable(&g, &bad, &BruteConfig::default()).unwrap().is_none());
}

#[test]
fn empty_sequent_and_empty_family() {
    let g = OneStepSequent::new(agents(&["a"]));
    assert!(g.satisfiable(&constraint(&[], &[&[]])).unwrap().is_sat());
    assert!(!g.satisfiable(&constraint(&[], &[])).unwrap().is_sat());
    let form = witness_game_form(&g, &constraint(&[], &[&[]])).unwrap();
    assert_eq!(validate_game_form(&form, &g, &constraint(&[], &[&[]])).unwrap(), Ok(()));
}

#[test]
fn undeclared_variable() {
    let g = voting();
    assert!(g.satisfiable(&constraint(&["p", "q"], &[&["p", "q"]])).is_err());
    assert!(SatConstraint::new(["p"], [set(&["z"])]).is_err());
}

#[test]
fn formulas_by_dnf() {
    let ag = agents(&["a"]);
    let f = parse_state_formula("<<{a} -> X p>> | <<{a} -> X q>>", Dialect::Tlcga).unwrap();
    let s = constraint(&["p", "q"], &[&["q"]]);
    let branch = formula_satisfiable(&ag, &f, &s).unwrap().expect("second disjunct");
    assert_eq!(branch.positives[0].entries, vec![(1, "q".to_string())]);

    let f = parse_state_formula("<<{a} -> X p>> & !<<{a} -> X !p>>", Dialect::Tlcga).unwrap();
    assert!(formula_satisfiable(&ag, &f, &constraint(&["p"], &[&["p"]])).unwrap().is_some());

    let f = parse_state_formula("<<{a} -> X p>>", Dialect::Tlcga).unwrap();
    assert!(formula_satisfiable(&ag, &f, &constraint(&["p", "q"], &[&["p", "q"]])).unwrap().is_some());

    let f = parse_state_formula("<<{a} -> G p>>", Dialect::Tlcga).unwrap();
    assert!(formula_satisfiable(&ag, &f, &constraint(&["p"], &[&["p"]])).is_err());
    let f = parse_state_formula("p & <<{a} -> X p>>", Dialect::Tlcga).unwrap();
    assert!(formula_satisfiable(&ag, &f, &constraint(&["p"], &[&["p"]])).is_err());
}

#[test]
fn single_positive_gets_small_witness() {
    let g = seq(&["a", "b"], &["<<{a} -> X p>>"]);
    let s = constraint(&["p", "q"], &[&["p", "q"]]);
    let form = witness_game_form(&g, &s).unwrap();
    assert_eq!(validate_game_form(&form, &g, &s).unwrap(), Ok(()));
    // Outcomes only mention sequent variables: q (bit 1) never appears.
    assert!(form.outcomes.iter().all(|&o| o & 0b10 == 0));
    assert!(form.outcomes.contains(&0b01));
    let tiny = brute_force_satisfiable(&g, &s, &BruteConfig::default()).unwrap().unwrap();
    assert_eq!(tiny.counts(), vec![1, 1]);
}

#[test]
fn corrupted_form_is_rejected() {
    let g = voting();
    let s = constraint(&["p", "q", "r"], &[&["p", "q"], &["q", "r"]]);
    let mut form = witness_game_form(&g, &s).unwrap();
    form.outcomes[0] = 0b111;
    assert!(matches!(validate_game_form(&form, &g, &s).unwrap(), Err(Violation::Outside { profile: 0 })));
}

#[test]
fn redistribution_count() {
    for g in 0..=3usize {
        let mut one = OneStepSequent::new(agents(&["a"]));
        let mut two = OneStepSequent::new(agents(&["a", "b"]));
        for i in 0..g {
            let a = OneStepAssignment { entries: vec![(1, format!("v{i}"))] };
            one.positives.push(a.clone());
            two.positives.push(a);
        }
        // ∅ is disjoint from everything: (g+1) choices for it, times the
        // families of pairwise disjoint non-empty coalitions.
        assert_eq!(one.redistributions().len(), (g + 1) * (g + 1));
        assert_eq!(two.redistributions().len(), (g + 1) * (1 + 3 * g + g * g));
        let all = two.redistributions();
        let distinct: BTreeSet<_> = all.iter().collect();
        assert_eq!(distinct.len(), all.len());
        assert!(all.len() <= (g + 1).pow(4));
    }
}

#[test]
fn empty_coalition_goal_breaks_literal_conditions() {
    // <<{} -> X p>> demands p in every outcome, but {} must contain one.
    let g = seq(&["a"], &["<<{} -> X p>>"]);
    let s = constraint(&["p"], &[&["p"], &[]]);
    assert!(g.satisfiable_with(&s, Conditions::Literal).unwrap().is_sat());
    assert!(!g.satisfiable_with(&s, Conditions::Repaired).unwrap().is_sat());
    assert!(brute_force_satisfiable(&g, &s, &BruteConfig::default()).unwrap().is_none());
    assert!(!cross_check(&g, &s, Conditions::Literal, &BruteConfig::default()).unwrap().agrees());
    assert!(cross_check(&g, &s, Conditions::Repaired, &BruteConfig::default()).unwrap().agrees());
}

#[test]
fn random_grid_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cfg = BruteConfig::default();
    for i in 0..300 {
        let (g, s) = random_instance(&mut rng);
        let r = cross_check(&g, &s, Conditions::Repaired, &cfg).unwrap();
        assert!(r.agrees(), "instance {i}: {g:?} {s:?} -> {r:?}");
    }
}

#[test]
fn exhaustive_grid_sizes() {
    // 1 agent, 1 variable: 4 maps, 8 literals, 1 + 8 sequents, 3 families.
    assert_eq!(exhaustive_grid(1, 1, 1).len(), 9 * 3);
    assert_eq!(exhaustive_grid(2, 1, 2).len(), (1 + 32 + 496) * 3);
}

#[test]
fn exhaustive_small_grid_agrees() {
    let cfg = BruteConfig::default();
    for (g, s) in exhaustive_grid(1, 1, 2) {
        let r = cross_check(&g, &s, Conditions::Repaired, &cfg).unwrap();
        assert!(r.agrees(), "{g:?} {s:?} -> {r:?}");
    }
}

#[test]
fn grand_coalition_clause_is_per_profile() {
    // a picks {p} or {q}; the {a,b} entry fails on the first, the {a}
    // entry on the second, so the negative holds everywhere.
    let mut g = OneStepSequent::new(agents(&["a", "b"]));
    g.positives.push(OneStepAssignment { entries: vec![(1, "p".into())] });
    g.negatives.push(OneStepAssignment { entries: vec![(1, "q".into()), (3, "p".into())] });
    let s = constraint(&["p", "q"], &[&["p"], &["q"]]);
    assert!(!g.satisfiable_with(&s, Conditions::Literal).unwrap().is_sat());
    assert!(g.satisfiable(&s).unwrap().is_sat());
    let form = witness_game_form(&g, &s).unwrap();
    assert_eq!(validate_game_form(&form, &g, &s).unwrap(), Ok(()));
    assert!(brute_force_satisfiable(&g, &s, &BruteConfig::default()).unwrap().is_some());
}

#[test]
fn deviation_targets_must_be_admissible() {
    // Unsat through the fixpoint only: each redistribution passes (1), (2).
    let cfg = BruteConfig::default();
    let mut found = 0;
    for (g, s) in exhaustive_grid(2, 2, 2) {
        let literal_ok = g.redistributions().iter().all(|r| g.check_redistribution(r, &s).is_none());
        let empty_ok = g.positives.iter().all(|p| p.get(0).is_none());
        if literal_ok && empty_ok && !g.satisfiable(&s).unwrap().is_sat() {
            assert!(brute_force_satisfiable(&g, &s, &cfg).unwrap().is_none(), "{g:?} {s:?}");
            found += 1;
            if found == 20 {
                break;
            }
        }
    }
    assert!(found > 0);
}
