use std::collections::BTreeSet;

use super::ast::*;
use crate::error::{Error, Result};
use crate::transform::{is_normal_form, unfold};

/// `φ̄`: strips one leading negation, otherwise adds one.
pub fn bar(f: &Formula) -> Formula {
    match &**f {
        StateFormula::Not(a) => a.clone(),
        _ => not(f.clone()),
    }
}

fn components(f: &Formula) -> Vec<Formula> {
    match &**f {
        StateFormula::And(a, b) | StateFormula::Or(a, b) => vec![a.clone(), b.clone()],
        StateFormula::Brak(ga) => brak_components(ga),
        StateFormula::Not(inner) => match &**inner {
            StateFormula::Not(a) => vec![a.clone()],
            StateFormula::And(a, b) | StateFormula::Or(a, b) => vec![not(a.clone()), not(b.clone())],
            StateFormula::Brak(ga) if ga.is_long_term() => vec![not(unfold(ga).0)],
            StateFormula::Brak(ga) => brak_components(ga).into_iter().map(not).collect(),
            _ => vec![],
        },
        _ => vec![],
    }
}

fn brak_components(ga: &GoalAssignment) -> Vec<Formula> {
    if ga.is_long_term() {
        return vec![unfold(ga).0];
    }
    let mut out = Vec::new();
    for (_, g) in ga.iter() {
        for part in g.conjuncts() {
            if let PathFormula::Next(b) = part {
                out.push(b.clone());
            }
        }
    }
    out
}

/// Extended Fischer-Ladner closure of a set of formulas in normal form.
pub fn ecl_set<'a, I: IntoIterator<Item = &'a Formula>>(roots: I) -> Result<BTreeSet<Formula>> {
    let mut seen = BTreeSet::new();
    let mut todo: Vec<Formula> = Vec::new();
    for r in roots {
        let mut binder = false;
        r.visit(&mut |g| binder |= matches!(g, StateFormula::Mu(..) | StateFormula::Nu(..)));
        if binder || !is_normal_form(r) {
            return Err(Error::Precondition(format!("{r} is not in normal form")));
        }
        todo.push(desugar(r));
    }
    while let Some(f) = todo.pop() {
        if seen.contains(&f) {
            continue;
        }
        seen.insert(f.clone());
        todo.push(bar(&f));
        todo.extend(components(&f));
    }
    Ok(seen)
}

pub fn ecl(f: &Formula) -> Result<BTreeSet<Formula>> {
    ecl_set([f])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_state_formula, Dialect};
    use crate::transform::induction_formula;

    fn p(s: &str) -> Formula {
        parse_state_formula(s, Dialect::TlcgaPlus).unwrap()
    }

    #[test]
    fn literal() {
        let e = ecl(&prop("p")).unwrap();
        assert_eq!(e, [prop("p"), not(prop("p"))].into_iter().collect());
    }

    #[test]
    fn local_brak() {
        let f = p("<<{a} -> X p>>");
        let e = ecl(&f).unwrap();
        for g in [f.clone(), not(f), prop("p"), not(prop("p"))] {
            assert!(e.contains(&g), "missing {g}");
        }
    }

    #[test]
    fn temporal_brak_is_finite_and_contains_ind() {
        let f = p("<<{a} -> G q>>");
        let StateFormula::Brak(ga) = &*f else { panic!() };
        let e = ecl(&f).unwrap();
        assert!(e.contains(&induction_formula(ga, &f).unwrap()));
        assert!(e.len() < 50);
    }

    #[test]
    fn closed_under_bar_and_idempotent() {
        let f = p("<<{a,b} -> (p U q); {b} -> G r>> & !<<{a} -> X (p | q)>>");
        let e = ecl(&f).unwrap();
        for g in &e {
            assert!(e.contains(&bar(g)));
        }
        assert_eq!(ecl_set(e.iter()).unwrap(), e);
    }

    #[test]
    fn rejects_mixed() {
        assert!(ecl(&p("<<{a} -> X p; {b} -> G q>>")).is_err());
    }
}
