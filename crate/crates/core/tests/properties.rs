use proptest::prelude::*;

use tlcga::bisim::{greatest_bisimulation, hm_agreement, hm_converse, is_bisimulation};
use tlcga::cgm::{scos, Cgm};
use tlcga::checker::{extension, Checker};
use tlcga::gametheory::{coequilibrium_ga, core_nonempty_formula};
use tlcga::onestep::{cross_check, random_instance, BruteConfig, Conditions};
use tlcga::random::*;
use tlcga::strategies::{atl_check, search_witness, verify_witness, MemoryMode, OracleConfig};
use tlcga::syntax::*;
use tlcga::transform::axioms::{axiom_instance, Scheme};
use tlcga::transform::{to_mu, unfold};
use tlcga::Error;

fn model(seed: u64, max_states: usize) -> (Cgm, ChaCha8Rng) {
    let mut r = rng(seed);
    let cfg = ModelConfig { max_states, agents: names(&["a", "b", "c"]), ..Default::default() };
    (random_model_any_agents(&mut r, &cfg), r)
}

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig { cases: n, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cases(96))]

    #[test]
    fn print_parse_round_trip(seed in any::<u64>()) {
        let (m, mut r) = model(seed, 2);
        let cfg = FormulaConfig { plus: true, ..FormulaConfig::for_model(&m, 3) };
        let f = random_formula(&mut r, &cfg);
        let back = parse_state_formula(&f.to_string(), Dialect::TlcgaPlus).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn negation_is_complement(seed in any::<u64>()) {
        let (m, mut r) = model(seed, 6);
        let f = random_formula(&mut r, &FormulaConfig::for_model(&m, 2));
        let pos = extension(&m, &f).unwrap();
        prop_assert_eq!(extension(&m, &not(f)).unwrap(), pos.complement());
    }

    #[test]
    fn goal_monotonicity(seed in any::<u64>()) {
        let (m, mut r) = model(seed, 6);
        let cfg = FormulaConfig::for_model(&m, 1);
        let ga = random_goal_assignment(&mut r, &cfg);
        let c = random_coalition(&mut r, m.agents());
        let (phi, psi) = (random_formula(&mut r, &cfg), random_formula(&mut r, &cfg));
        let weak = brak(ga.update(c.clone(), PathFormula::next(phi.clone())));
        let strong = brak(ga.update(c, PathFormula::next(or(phi, psi))));
        prop_assert!(extension(&m, &weak).unwrap().is_subset(&extension(&m, &strong).unwrap()));
    }

    #[test]
    fn fixpoint_property(seed in any::<u64>()) {
        let (m, mut r) = model(seed, 6);
        let cfg = FormulaConfig { plus: seed % 2 == 0, ..FormulaConfig::for_model(&m, 1) };
        let ga = random_goal_assignment(&mut r, &cfg);
        let f = brak(ga.clone());
        let direct = extension(&m, &f).unwrap();
        prop_assert_eq!(&extension(&m, &unfold(&ga).0).unwrap(), &direct);
        let mu = to_mu(&f).unwrap();
        let mut ch = Checker::new(&m);
        prop_assert_eq!(&ch.eval(&mu, &Default::default()).unwrap(), &direct);
    }

    #[test]
    fn atl_agrees_on_singleton_supports(seed in any::<u64>()) {
        let (m, mut r) = model(seed, 6);
        let cfg = FormulaConfig { max_coalitions: 1, ..FormulaConfig::for_model(&m, 1) };
        let c = random_coalition(&mut r, m.agents());
        let theta = random_path_formula(&mut r, &cfg);
        let f = brak(GoalAssignment::single(c.clone(), theta.clone()));
        prop_assert_eq!(atl_check(&m, &c, &theta).unwrap(), extension(&m, &f).unwrap());
    }

    #[test]
    fn bisimulation_invariance(seed in any::<u64>()) {
        let (m, mut r) = model(seed, 5);
        let rel = greatest_bisimulation(&m);
        prop_assert!(rel.is_equivalence());
        prop_assert!(is_bisimulation(&m, &rel));
        let cfg = FormulaConfig::for_model(&m, 2);
        let corpus: Vec<Formula> = (0..8).map(|_| random_formula(&mut r, &cfg)).collect();
        prop_assert!(hm_agreement(&m, &rel, &corpus).unwrap().is_none());
        prop_assert_eq!(hm_converse(&m, &rel).unwrap(), None);
    }

    #[test]
    fn scos_is_injective_and_bisimilar(seed in any::<u64>()) {
        let (m, _) = model(seed, 4);
        let s = scos(&m);
        prop_assert!(s.model.is_injective());
        for (w, copies) in s.copies.iter().enumerate() {
            for &c in copies {
                prop_assert!(tlcga::bisim::are_bisimilar(&m, w, &s.model, c).unwrap());
            }
        }
    }

    #[test]
    fn oracle_witnesses_are_sound(seed in any::<u64>()) {
        let (m, mut r) = model(seed, 4);
        let cfg = FormulaConfig { max_coalitions: 2, ..FormulaConfig::for_model(&m, 0) };
        let ga = random_goal_assignment(&mut r, &cfg);
        let mode: MemoryMode = ["positional", "path:2", "play:2"][(seed % 3) as usize].parse().unwrap();
        let limits = OracleConfig { limit: 20_000, max_nodes: 5_000 };
        match search_witness(&m, 0, &ga, mode, &limits) {
            Ok(out) => {
                if let Some(sigma) = out.witness {
                    prop_assert!(verify_witness(&m, 0, &sigma, &ga).unwrap());
                    prop_assert!(extension(&m, &brak(ga)).unwrap().contains(0));
                }
            }
            Err(Error::LimitExceeded(_)) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn axiom_instances_are_valid(seed in any::<u64>()) {
        let (m, mut r) = model(seed, 5);
        let cfg = FormulaConfig { max_coalitions: 2, ..FormulaConfig::for_model(&m, 1) };
        for scheme in Scheme::ALL {
            let sub = random_substitution(&mut r, scheme, &cfg);
            let f = axiom_instance(scheme, &sub).unwrap();
            prop_assert!(extension(&m, &f).unwrap().is_full(), "{} fails: {}", scheme, f);
        }
    }

    #[test]
    fn coequilibrium_support(seed in any::<u64>()) {
        let (m, mut r) = model(seed, 2);
        let ga = random_goal_assignment(&mut r, &FormulaConfig { max_coalitions: 5, ..FormulaConfig::for_model(&m, 0) });
        let star = coequilibrium_ga(m.agents(), &ga);
        prop_assert!(star.support().all(|c| c.len() == 1 || c.len() == m.num_agents()));
        prop_assert!(star.iter().all(|(c, g)| ga.get(c) == Some(g)));
    }

    #[test]
    fn one_step_cross_check(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (g, s) = random_instance(&mut r);
        let res = cross_check(&g, &s, Conditions::Repaired, &BruteConfig::default()).unwrap();
        prop_assert!(res.agrees(), "{:?}", res);
    }
}

#[test]
fn empty_core_formula_is_valid() {
    for seed in 0..20 {
        let (m, _) = model(seed, 6);
        let f = core_nonempty_formula(&GoalAssignment::top(), &[]).unwrap();
        assert!(extension(&m, &f).unwrap().is_full());
    }
}

#[test]
fn memory_modes_round_trip() {
    for text in ["positional", "path:1", "path:3", "play:2", "play:8"] {
        let m: MemoryMode = text.parse().unwrap();
        assert_eq!(m.to_string(), text);
    }
    assert!("play:9".parse::<MemoryMode>().is_err());
    assert!("path:0".parse::<MemoryMode>().is_err());
}
