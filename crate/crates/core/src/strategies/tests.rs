use super::*;
use crate::checker::{check, extension};
use crate::corpus::{example_a, example_b, GAMMA_A, GAMMA_B, GAMMA_B_PRIME};
use crate::syntax::*;

fn ga(text: &str) -> GoalAssignment {
    match &*parse_state_formula(text, Dialect::TlcgaPlus).unwrap() {
        StateFormula::Brak(g) => g.clone(),
        other => panic!("not a goal assignment: {other}"),
    }
}

/// The memory strategy for agent `a`: go to s1 first, to s2 after returning.
fn example_a_witness(mode: MemoryMode) -> FiniteStrategyProfile {
    let m = example_a();
    let s = m.state("s").unwrap();
    let s1 = m.state("s1").unwrap();
    FiniteStrategyProfile::from_fn(&m, s, mode, |mem| {
        if mem.last() == s && mem.states.ends_with(&[s1, s]) {
            vec![1, 0]
        } else {
            vec![0, 0]
        }
    })
    .unwrap()
}

#[test]
fn memory_modes_parse() {
    assert_eq!("positional".parse::<MemoryMode>().unwrap(), MemoryMode::Positional);
    assert_eq!("path:3".parse::<MemoryMode>().unwrap(), MemoryMode::PathSuffix(3));
    assert_eq!("play:2".parse::<MemoryMode>().unwrap().to_string(), "play:2");
    assert!("play:0".parse::<MemoryMode>().is_err());
    assert!("tape:2".parse::<MemoryMode>().is_err());
}

#[test]
fn play_memory_keeps_profiles() {
    let mode = MemoryMode::PlaySuffix(2);
    let m0 = mode.initial(0);
    let m1 = mode.step(&m0, 3, 2);
    assert_eq!(m1, Memory { states: vec![0, 2], profiles: vec![3] });
    let m2 = mode.step(&m1, 1, 4);
    assert_eq!(m2, Memory { states: vec![2, 4], profiles: vec![1] });
    let path = MemoryMode::PathSuffix(2);
    assert_eq!(path.step(&m0, 3, 2).profiles, Vec::<usize>::new());
}

#[test]
fn example_a_memory_witness_verifies() {
    let m = example_a();
    let s = m.state("s").unwrap();
    let sigma = example_a_witness(MemoryMode::PlaySuffix(3));
    assert!(verify_witness(&m, s, &sigma, &ga(GAMMA_A)).unwrap());
}

#[test]
fn example_a_positional_profiles_fail() {
    let m = example_a();
    let s = m.state("s").unwrap();
    for a in [0, 1] {
        let sigma = FiniteStrategyProfile::from_fn(&m, s, MemoryMode::Positional, |mem| {
            if mem.last() == s {
                vec![a, 0]
            } else {
                vec![0, 0]
            }
        })
        .unwrap();
        assert!(!verify_witness(&m, s, &sigma, &ga(GAMMA_A)).unwrap());
    }
}

#[test]
fn empty_support_is_always_witnessed() {
    let m = example_b();
    let sigma = FiniteStrategyProfile::from_fn(&m, 0, MemoryMode::Positional, |_| vec![0, 0, 0]).unwrap();
    assert!(verify_witness(&m, 0, &sigma, &GoalAssignment::top()).unwrap());
}

#[test]
fn partial_table_is_an_error() {
    let m = example_a();
    let mut sigma = example_a_witness(MemoryMode::Positional);
    sigma.table.retain(|mem, _| mem.last() == 0);
    assert!(matches!(verify_witness(&m, 0, &sigma, &ga(GAMMA_A)), Err(crate::Error::PartialStrategy(_))));
}

#[test]
fn oracle_on_example_a() {
    let m = example_a();
    let s = m.state("s").unwrap();
    let g = ga(GAMMA_A);
    let cfg = OracleConfig::default();
    let pos = search_witness(&m, s, &g, MemoryMode::Positional, &cfg).unwrap();
    assert!(pos.witness.is_none());
    assert!(pos.exact);
    for mode in [MemoryMode::PlaySuffix(3), MemoryMode::PathSuffix(3)] {
        let w = find_witness(&m, s, &g, mode).unwrap().expect("witness");
        assert!(verify_witness(&m, s, &w, &g).unwrap());
    }
}

#[test]
fn oracle_on_example_b() {
    let m = example_b();
    let s = m.state("s").unwrap();
    let g = ga(GAMMA_B);
    let cfg = OracleConfig::default();
    let path = search_witness(&m, s, &g, MemoryMode::PathSuffix(2), &cfg).unwrap();
    assert!(path.witness.is_none());
    assert!(path.exact);
    let play = find_witness(&m, s, &g, MemoryMode::PlaySuffix(2)).unwrap().expect("play witness");
    assert!(verify_witness(&m, s, &play, &g).unwrap());
    let gp = ga(GAMMA_B_PRIME);
    assert!(find_witness(&m, s, &gp, MemoryMode::PathSuffix(2)).unwrap().is_some());
}

#[test]
fn witness_search_is_deterministic() {
    let m = example_b();
    let g = ga(GAMMA_B);
    let a = find_witness(&m, 0, &g, MemoryMode::PlaySuffix(2)).unwrap();
    let b = find_witness(&m, 0, &g, MemoryMode::PlaySuffix(2)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn search_limit_is_reported() {
    let m = example_a();
    let cfg = OracleConfig { limit: 1, max_nodes: 1000 };
    let r = search_witness(&m, 0, &ga(GAMMA_A), MemoryMode::PlaySuffix(3), &cfg);
    assert!(matches!(r, Err(crate::Error::LimitExceeded(_))));
}

#[test]
fn positional_witness_lifts() {
    let m = example_b();
    let g = ga("<<{1} -> X p>>");
    let w = find_witness(&m, 2, &g, MemoryMode::Positional).unwrap().unwrap();
    for mode in [MemoryMode::PathSuffix(3), MemoryMode::PlaySuffix(2)] {
        let lifted = w.lift(&m, 2, mode).unwrap();
        assert!(verify_witness(&m, 2, &lifted, &g).unwrap());
    }
}

#[test]
fn lasso_of_example_a_witness() {
    let m = example_a();
    let sigma = example_a_witness(MemoryMode::PlaySuffix(3));
    let lasso = play_lasso(&m, 0, &sigma).unwrap();
    let first: Vec<&str> = (0..4).map(|i| m.state_id(lasso.state_at(i))).collect();
    assert_eq!(first, ["s", "s1", "s", "s2"]);
    let pu = parse_path_formula("(p U q)", Dialect::Tlcga).unwrap();
    let fnot = parse_path_formula("(true U !(p | q))", Dialect::Tlcga).unwrap();
    assert!(eval_on_lasso(&lasso, &pu, &path_labels(&m, &pu).unwrap()));
    assert!(eval_on_lasso(&lasso, &fnot, &path_labels(&m, &fnot).unwrap()));
    let gp = parse_path_formula("G p", Dialect::Tlcga).unwrap();
    assert!(!eval_on_lasso(&lasso, &gp, &path_labels(&m, &gp).unwrap()));
}

#[test]
fn lasso_until_at_position_zero() {
    let m = example_b();
    let sigma = FiniteStrategyProfile::from_fn(&m, 3, MemoryMode::Positional, |_| vec![0, 0, 0]).unwrap();
    let lasso = play_lasso(&m, 3, &sigma).unwrap();
    assert!(lasso.prefix.is_empty());
    let u = parse_path_formula("(q U p)", Dialect::Tlcga).unwrap();
    assert!(eval_on_lasso(&lasso, &u, &path_labels(&m, &u).unwrap()));
    let g = parse_path_formula("G p", Dialect::Tlcga).unwrap();
    assert!(eval_on_lasso(&lasso, &g, &path_labels(&m, &g).unwrap()));
}

#[test]
fn atl_examples() {
    let m = example_a();
    let a = Coalition::new(["a"]);
    let f = parse_path_formula("(true U !(p | q))", Dialect::Tlcga).unwrap();
    assert!(atl_check(&m, &a, &f).unwrap().contains(0));
    let agt = Coalition::new(["a", "b"]);
    let x = parse_path_formula("X q", Dialect::Tlcga).unwrap();
    let e = atl_check(&m, &agt, &x).unwrap();
    assert_eq!(e.ids(&m), ["s"]);
    let mb = example_b();
    let g = parse_path_formula("G p", Dialect::Tlcga).unwrap();
    let e = atl_check(&mb, &Coalition::empty(), &g).unwrap();
    assert_eq!(e.ids(&mb), ["s1", "s31"]);
    let and = parse_path_formula("X p && X q", Dialect::TlcgaPlus).unwrap();
    assert!(atl_check(&mb, &Coalition::empty(), &and).is_err());
}

#[test]
fn atl_matches_checker_on_examples() {
    for m in [example_a(), example_b()] {
        let agents: Vec<String> = m.agents().to_vec();
        for bits in 0..1u32 << agents.len() {
            let c = Coalition::new(agents.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, a)| a.clone()));
            for t in ["X p", "G p", "(p U q)", "(true U !p)", "G (p | q)"] {
                let theta = parse_path_formula(t, Dialect::Tlcga).unwrap();
                let f = brak(GoalAssignment::single(c.clone(), theta.clone()));
                assert_eq!(atl_check(&m, &c, &theta).unwrap(), extension(&m, &f).unwrap(), "{c} {t}");
            }
        }
    }
}

#[test]
fn found_witnesses_imply_truth() {
    let m = example_b();
    for text in [GAMMA_B, GAMMA_B_PRIME, "<<{1} -> G p>>", "<<{2,3} -> (p U !q)>>"] {
        let g = ga(text);
        for s in 0..m.num_states() {
            if let Some(w) = find_witness(&m, s, &g, MemoryMode::PlaySuffix(2)).unwrap() {
                assert!(verify_witness(&m, s, &w, &g).unwrap());
                assert!(check(&m, s, &brak(g.clone())).unwrap(), "{text} at {}", m.state_id(s));
            }
        }
    }
}

#[test]
fn profile_text_round_trip() {
    let m = example_b();
    let s = m.state("s").unwrap();
    let w = find_witness(&m, s, &ga(GAMMA_B), MemoryMode::PlaySuffix(2)).unwrap().unwrap();
    let text = w.to_text(&m);
    assert_eq!(FiniteStrategyProfile::parse(&m, &format!("# header\nresult: witness\n{text}")).unwrap(), w);
    let a = example_a_witness(MemoryMode::PathSuffix(2));
    assert_eq!(FiniteStrategyProfile::parse(&example_a(), &a.to_text(&example_a())).unwrap(), a);
    assert!(FiniteStrategyProfile::parse(&m, "[s] -> 1=a1, 2=a2, 3=a3").is_err());
    assert!(FiniteStrategyProfile::parse(&m, "mode: positional\n[s,s1] -> 1=a1, 2=a2, 3=a3").is_err());
    assert!(FiniteStrategyProfile::parse(&m, "mode: positional\n[s] -> 1=a1, 2=zz, 3=a3").is_err());
}
