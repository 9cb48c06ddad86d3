//! Fixpoint rewritings of goal assignments and the translation into the
//! fixpoint language.

pub mod axioms;

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::syntax::*;

/// The three families that make up an unfolding.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UnfoldParts {
    pub finish: Vec<Formula>,
    pub uholds: Vec<Formula>,
    pub gholds: Vec<Formula>,
}

fn push_unique(v: &mut Vec<Formula>, f: Formula) {
    if !v.contains(&f) {
        v.push(f);
    }
}

/// Conjunction with `true` conjuncts removed.
fn conj_reduced<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
    conj(items.into_iter().filter(|f| !f.is_true()))
}

/// `⊕γ`, the nexttime extension.
pub fn nexttime_extension(ga: &GoalAssignment) -> GoalAssignment {
    let support: Vec<Coalition> = ga.support().cloned().collect();
    let mut unions: BTreeSet<Coalition> = support.iter().cloned().collect();
    loop {
        let mut added = Vec::new();
        for a in &unions {
            for b in &support {
                let u = a.union(b);
                if !unions.contains(&u) {
                    added.push(u);
                }
            }
        }
        if added.is_empty() {
            break;
        }
        unions.extend(added);
    }
    let mut entries = Vec::new();
    for c in unions {
        let mut bodies = Vec::new();
        for (k, g) in ga.iter() {
            if !k.is_subset(&c) {
                continue;
            }
            for part in g.conjuncts() {
                if let PathFormula::Next(body) = part {
                    if !body.is_true() {
                        push_unique(&mut bodies, body.clone());
                    }
                }
            }
        }
        let (lfor, _) = ga.restrict(&c).split_lfor_xfor();
        bodies.push(brak(lfor));
        entries.push((c, PathFormula::next(conj_reduced(bodies))));
    }
    GoalAssignment::from_entries(entries)
}

/// `γ⟨φ⟩ = ⊕γ[⋃Support ↦ Xφ]`.
pub fn gamma_of(ga: &GoalAssignment, phi: &Formula) -> Result<GoalAssignment> {
    if ga.is_empty() {
        return Err(Error::Precondition("gamma_of needs a non-empty support".into()));
    }
    Ok(nexttime_extension(ga).update(ga.support_union(), PathFormula::next(phi.clone())))
}

fn parts(ga: &GoalAssignment) -> UnfoldParts {
    let mut parts = UnfoldParts::default();
    for (c, g) in ga.iter() {
        let conjuncts = g.conjuncts();
        for (i, part) in conjuncts.iter().enumerate() {
            match part {
                PathFormula::Until(alpha, beta) => {
                    let rest = PathFormula::conj(
                        conjuncts.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, p)| (*p).clone()),
                    );
                    let remaining = match rest {
                        Some(r) => ga.update(c.clone(), r),
                        None => ga.remove(c),
                    };
                    push_unique(&mut parts.finish, conj_reduced([beta.clone(), brak(remaining)]));
                    if !alpha.is_true() {
                        push_unique(&mut parts.uholds, alpha.clone());
                    }
                }
                PathFormula::Globally(chi) => {
                    if !chi.is_true() {
                        push_unique(&mut parts.gholds, chi.clone());
                    }
                }
                _ => {}
            }
        }
    }
    parts
}

fn assemble(parts: &UnfoldParts, step: Formula) -> Formula {
    let mut conjuncts: Vec<Formula> = parts.uholds.clone();
    conjuncts.extend(parts.gholds.iter().cloned());
    conjuncts.push(step);
    let mut disjuncts = parts.finish.clone();
    disjuncts.push(conj_reduced(conjuncts));
    disj(disjuncts.into_iter().filter(|f| !matches!(**f, StateFormula::False)))
}

/// `unf(γ)` together with its Finish/UHolds/GHolds families.
pub fn unfold(ga: &GoalAssignment) -> (Formula, UnfoldParts) {
    let p = parts(ga);
    let f = assemble(&p, brak(nexttime_extension(ga)));
    (f, p)
}

/// `ind(γ)(φ)`; γ must be long-term temporal.
pub fn induction_formula(ga: &GoalAssignment, phi: &Formula) -> Result<Formula> {
    if !ga.is_long_term() {
        return Err(Error::Precondition(format!("{ga} is not a long-term temporal goal assignment")));
    }
    let p = parts(ga);
    Ok(assemble(&p, brak(gamma_of(ga, phi)?)))
}

fn has_binder(f: &StateFormula) -> bool {
    let mut found = false;
    f.visit(&mut |g| found |= matches!(g, StateFormula::Mu(..) | StateFormula::Nu(..)));
    found
}

/// Rewrites every mixed goal assignment by its unfolding, innermost first.
pub fn normal_form(f: &Formula) -> Result<Formula> {
    if has_binder(f) {
        return Err(Error::Dialect("normal_form expects a formula without fixpoint binders".into()));
    }
    Ok(nf(f))
}

fn nf(f: &Formula) -> Formula {
    match &**f {
        StateFormula::True | StateFormula::False | StateFormula::Prop(_) | StateFormula::Var(_) => f.clone(),
        StateFormula::Not(a) => not(nf(a)),
        StateFormula::And(a, b) => and(nf(a), nf(b)),
        StateFormula::Or(a, b) => or(nf(a), nf(b)),
        StateFormula::Implies(a, b) => implies(nf(a), nf(b)),
        StateFormula::Mu(z, a) => mu(z.clone(), nf(a)),
        StateFormula::Nu(z, a) => nu(z.clone(), nf(a)),
        StateFormula::Brak(ga) => {
            let inner = ga.map_bodies(&mut |s| nf(s));
            if inner.classify() == GoalKind::Mixed {
                nf(&unfold(&inner).0)
            } else {
                brak(inner)
            }
        }
    }
}

/// True iff every goal assignment in `f` is nexttime, long-term U or long-term G.
pub fn is_normal_form(f: &StateFormula) -> bool {
    let mut ok = true;
    f.visit(&mut |g| {
        if let StateFormula::Brak(ga) = g {
            ok &= ga.classify() != GoalKind::Mixed;
        }
    });
    ok
}

/// Prefix reserved for variables introduced by [`to_mu`].
pub const FRESH_PREFIX: &str = "_z";

pub const DEFAULT_FUEL: usize = 5_000_000;

/// Translation into the fixpoint language whose goal assignments are all nexttime.
pub fn to_mu(f: &Formula) -> Result<Formula> {
    to_mu_with_fuel(f, DEFAULT_FUEL)
}

pub fn to_mu_with_fuel(f: &Formula, fuel: usize) -> Result<Formula> {
    let f = desugar(f);
    let mut next = 0usize;
    f.visit(&mut |g| {
        if let StateFormula::Var(n) | StateFormula::Prop(n) | StateFormula::Mu(n, _) | StateFormula::Nu(n, _) = g {
            if let Some(k) = n.strip_prefix(FRESH_PREFIX).and_then(|d| d.parse::<usize>().ok()) {
                next = next.max(k + 1);
            }
        }
    });
    let mut t = Translator { memo: HashMap::new(), next, fuel };
    t.go(&f)
}

struct Translator {
    memo: HashMap<Formula, Formula>,
    next: usize,
    fuel: usize,
}

impl Translator {
    fn fresh(&mut self) -> String {
        let z = format!("{FRESH_PREFIX}{}", self.next);
        self.next += 1;
        z
    }

    fn go(&mut self, f: &Formula) -> Result<Formula> {
        if let Some(r) = self.memo.get(f) {
            return Ok(r.clone());
        }
        if self.fuel == 0 {
            return Err(Error::LimitExceeded("translation fuel exhausted".into()));
        }
        self.fuel -= 1;
        let r = match &**f {
            StateFormula::True | StateFormula::Prop(_) | StateFormula::Var(_) => f.clone(),
            StateFormula::False => not(tt()),
            StateFormula::Not(a) => not(self.go(a)?),
            StateFormula::And(a, b) => and(self.go(a)?, self.go(b)?),
            StateFormula::Or(a, b) => or(self.go(a)?, self.go(b)?),
            StateFormula::Implies(a, b) => or(not(self.go(a)?), self.go(b)?),
            StateFormula::Mu(z, a) => mu(z.clone(), self.go(a)?),
            StateFormula::Nu(z, a) => nu(z.clone(), self.go(a)?),
            StateFormula::Brak(ga) => match ga.classify() {
                GoalKind::Nexttime => {
                    let mut entries = Vec::new();
                    for (c, g) in ga.iter() {
                        let mut bodies = Vec::new();
                        for part in g.conjuncts() {
                            if let PathFormula::Next(b) = part {
                                bodies.push(self.go(b)?);
                            }
                        }
                        entries.push((c.clone(), PathFormula::next(conj(bodies))));
                    }
                    brak(GoalAssignment::from_entries(entries))
                }
                GoalKind::LongTermTypeU => {
                    let z = self.fresh();
                    let body = induction_formula(ga, &var(z.clone()))?;
                    mu(z, self.go(&body)?)
                }
                GoalKind::LongTermTypeG => {
                    let z = self.fresh();
                    let body = induction_formula(ga, &var(z.clone()))?;
                    nu(z, self.go(&body)?)
                }
                GoalKind::Mixed => {
                    let (u, _) = unfold(ga);
                    self.go(&u)?
                }
            },
        };
        self.memo.insert(f.clone(), r.clone());
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(names: &[&str]) -> Coalition {
        Coalition::new(names.iter().copied())
    }

    fn p(s: &str) -> Formula {
        parse_state_formula(s, Dialect::Mu).unwrap()
    }

    fn ga(s: &str) -> GoalAssignment {
        match &*parse_state_formula(s, Dialect::TlcgaPlus).unwrap() {
            StateFormula::Brak(g) => g.clone(),
            other => panic!("not a goal assignment: {other}"),
        }
    }

    #[test]
    fn oplus_worked_example() {
        let g = ga("<<{a,b} -> (p U q); {c} -> G r; {b,c} -> X s>>");
        let expected = ga(
            "<<{a,b} -> X <<{a,b} -> (p U q)>>; {c} -> X <<{c} -> G r>>; \
             {b,c} -> X (s & <<{c} -> G r>>); {a,b,c} -> X (s & <<{a,b} -> (p U q); {c} -> G r>>)>>",
        );
        assert_eq!(nexttime_extension(&g), expected);
    }

    #[test]
    fn oplus_pushes_eventuality() {
        let g = ga("<<{a} -> (p U q)>>");
        assert_eq!(nexttime_extension(&g), ga("<<{a} -> X <<{a} -> (p U q)>>>>"));
    }

    #[test]
    fn oplus_nexttime() {
        let g = ga("<<{a} -> X p; {b} -> X q>>");
        assert_eq!(nexttime_extension(&g), ga("<<{a} -> X p; {b} -> X q; {a,b} -> X (p & q)>>"));
    }

    #[test]
    fn gamma_of_examples() {
        let g = ga("<<{c} -> G x>>");
        assert_eq!(gamma_of(&g, &var("z")).unwrap(), GoalAssignment::single(c(&["c"]), PathFormula::next(var("z"))));
        let g = ga("<<{a,b} -> (p U q); {c} -> G r>>");
        let expected = nexttime_extension(&g).update(c(&["a", "b", "c"]), PathFormula::next(var("z")));
        assert_eq!(gamma_of(&g, &var("z")).unwrap(), expected);
        assert_eq!(expected.len(), 3);
        assert_eq!(gamma_of(&g, &brak(g.clone())).unwrap(), nexttime_extension(&g));
        assert!(gamma_of(&GoalAssignment::top(), &tt()).is_err());
    }

    #[test]
    fn unfold_g_and_u() {
        let (u, _) = unfold(&ga("<<{a} -> G x>>"));
        assert_eq!(u, p("x & <<{a} -> X <<{a} -> G x>>>>"));
        let (u, parts) = unfold(&ga("<<{a} -> (y U x)>>"));
        assert_eq!(u, p("x | y & <<{a} -> X <<{a} -> (y U x)>>>>"));
        assert_eq!(parts.finish, vec![prop("x")]);
    }

    #[test]
    fn unfold_nexttime() {
        let g = ga("<<{a} -> X p; {b} -> X q>>");
        let (u, _) = unfold(&g);
        assert_eq!(u, brak(nexttime_extension(&g)));
    }

    #[test]
    fn induction_formula_examples() {
        let g = ga("<<{a} -> G x>>");
        let step = brak(GoalAssignment::single(c(&["a"]), PathFormula::next(var("z"))));
        assert_eq!(induction_formula(&g, &var("z")).unwrap(), and(prop("x"), step.clone()));
        let g = ga("<<{a} -> (y U x)>>");
        assert_eq!(
            induction_formula(&g, &var("z")).unwrap(),
            or(prop("x"), and(prop("y"), step))
        );
        assert!(induction_formula(&ga("<<{a} -> X p>>"), &tt()).is_err());
    }

    #[test]
    fn ind_of_self_is_unfold() {
        for s in [
            "<<{a,b} -> (p U q); {c} -> G r>>",
            "<<{a} -> G p; {b} -> G q; {a,b} -> G (p | q)>>",
            "<<{a} -> (p U q) && G r; {b} -> (true U s)>>",
        ] {
            let g = ga(s);
            assert_eq!(induction_formula(&g, &brak(g.clone())).unwrap(), unfold(&g).0, "{s}");
        }
    }

    #[test]
    fn tlcga_plus_finish_removes_one_conjunct() {
        let g = ga("<<{a} -> (p U q) && G r>>");
        let (_, parts) = unfold(&g);
        assert_eq!(parts.finish, vec![p("q & <<{a} -> G r>>")]);
        assert_eq!(parts.gholds, vec![prop("r")]);
        assert_eq!(parts.uholds, vec![prop("p")]);
    }

    #[test]
    fn normal_form_examples() {
        let f = p("<<{a,b} -> (p U q); {b,c} -> X s>>");
        let n = normal_form(&f).unwrap();
        assert!(is_normal_form(&n));
        let already = p("p & <<{a} -> X q>>");
        assert_eq!(normal_form(&already).unwrap(), already);
        assert_eq!(normal_form(&n).unwrap(), n);
        assert!(normal_form(&p("mu z . z")).is_err());
    }

    #[test]
    fn to_mu_shapes() {
        let t = to_mu(&p("<<{a} -> (y U x)>>")).unwrap();
        assert_eq!(t.to_string(), "mu _z0 . x | y & <<{a} -> X _z0>>");
        let t = to_mu(&p("<<{a} -> G x>>")).unwrap();
        assert_eq!(t.to_string(), "nu _z0 . x & <<{a} -> X _z0>>");
        let f = p("<<{a} -> X x>>");
        assert_eq!(to_mu(&f).unwrap(), f);
    }

    #[test]
    fn to_mu_avoids_capture() {
        let f = p("mu _z0 . x | <<{a} -> X _z0>> & <<{a} -> G y>>");
        let t = to_mu(&f).unwrap();
        assert!(t.to_string().contains("_z1"));
    }

    #[test]
    fn to_mu_fuel() {
        let f = p("<<{a} -> G x; {b} -> (x U y)>>");
        assert!(matches!(to_mu_with_fuel(&f, 2), Err(Error::LimitExceeded(_))));
    }
}
