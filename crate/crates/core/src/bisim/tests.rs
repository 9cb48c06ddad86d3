use std::collections::BTreeSet;

use super::*;
use crate::cgm::scos;
use crate::checker::extension;
use crate::corpus::{example_a, example_b, GAMMA_B, GAMMA_B_PRIME};

fn single(props: &[&str]) -> Cgm {
    Cgm::from_parts(
        vec!["a".into()],
        vec![("w".into(), props.iter().map(|p| p.to_string()).collect::<BTreeSet<_>>())],
        vec![vec![vec!["x".into()]]],
        vec![vec![0]],
    )
    .unwrap()
}

#[test]
fn example_b_with_its_scos() {
    let m = example_b();
    let sc = scos(&m);
    let (u, off) = m.disjoint_union(&sc.model).unwrap();
    let r = greatest_bisimulation(&u);
    let s2 = m.state("s2").unwrap();
    for &copy in &sc.copies[s2] {
        assert!(r.contains(s2, off + copy), "s2 vs {}", sc.model.state_id(copy));
    }
    let s = m.state("s").unwrap();
    assert!(r.contains(s, off + sc.copies[s][0]));
    assert!(are_bisimilar(&m, s, &sc.model, sc.copies[s][0]).unwrap());
}

#[test]
fn different_atoms_are_unrelated() {
    let m = example_b();
    let r = greatest_bisimulation(&m);
    assert!(!r.contains(m.state("s31").unwrap(), m.state("s32").unwrap()));
    assert!(!are_bisimilar(&single(&["p"]), 0, &single(&["q"]), 0).unwrap());
    assert!(are_bisimilar(&single(&["p"]), 0, &single(&["p"]), 0).unwrap());
}

#[test]
fn output_is_an_equivalence_and_a_bisimulation() {
    for m in [example_a(), example_b()] {
        let r = greatest_bisimulation(&m);
        assert!(Relation::identity(m.num_states()).is_subset(&r));
        assert!(r.is_equivalence());
        assert!(is_bisimulation(&m, &r));
    }
}

#[test]
fn parallel_rounds_agree() {
    let m = crate::cgm::build_river_crossing(2, 1, crate::cgm::CrossingMode::WolvesThenSheep).unwrap();
    assert_eq!(greatest_bisimulation(&m), greatest_bisimulation_jobs(&m, 4));
}

#[test]
fn invariance_on_example_b() {
    let m = example_b();
    let r = greatest_bisimulation(&m);
    let corpus: Vec<Formula> = [GAMMA_B, GAMMA_B_PRIME, "<<{1} -> G p>>", "<<{2} -> X q>>"]
        .iter()
        .map(|t| parse_state_formula(t, Dialect::Tlcga).unwrap())
        .collect();
    assert!(hm_agreement(&m, &r, &corpus).unwrap().is_none());
    assert!(hm_agreement(&m, &Relation::empty(m.num_states()), &corpus).unwrap().is_none());
    // A relation that is not a bisimulation gets caught.
    let mut bad = Relation::identity(m.num_states());
    bad.insert(0, 2);
    let p = parse_state_formula("<<{1,2,3} -> X !q>>", Dialect::Tlcga).unwrap();
    let cx = hm_agreement(&m, &bad, &[p]).unwrap().expect("disagreement");
    assert_eq!((cx.s1, cx.s2), (0, 2));
}

#[test]
fn characteristic_formulas_separate_unrelated_states() {
    for m in [example_a(), example_b()] {
        let r = greatest_bisimulation(&m);
        assert!(hm_converse(&m, &r).unwrap().is_none());
        let ch = characteristic_formulas(&m).unwrap();
        for a in 0..m.num_states() {
            for b in 0..m.num_states() {
                assert_eq!(r.contains(a, b), !ch.separated(a, b));
                if let Some(f) = ch.distinguishing(a, b) {
                    let e = extension(&m, f).unwrap();
                    assert_ne!(e.contains(a), e.contains(b));
                }
            }
        }
    }
}

#[test]
fn s_and_s1_of_example_b_are_distinguished() {
    // Same atoms, but only s can reach a p-only state.
    let m = example_b();
    let r = greatest_bisimulation(&m);
    assert!(!r.contains(0, 1));
    assert!(characteristic_formulas(&m).unwrap().distinguishing(0, 1).is_some());
}
