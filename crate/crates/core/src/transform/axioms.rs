//! Instantiation of the axiom schemes and derived validities, used as
//! semantic test vectors.

use std::fmt;
use std::str::FromStr;

use super::unfold;
use crate::error::{Error, Result};
use crate::syntax::*;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Scheme {
    Triv,
    Safe,
    Merge,
    GrandCoalition,
    Case,
    Con,
    Fix,
    FpG,
    FpU,
    Superadditivity,
    AgtMaximality,
}

impl Scheme {
    pub const ALL: [Scheme; 11] = [
        Scheme::Triv,
        Scheme::Safe,
        Scheme::Merge,
        Scheme::GrandCoalition,
        Scheme::Case,
        Scheme::Con,
        Scheme::Fix,
        Scheme::FpG,
        Scheme::FpU,
        Scheme::Superadditivity,
        Scheme::AgtMaximality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::Triv => "Triv",
            Scheme::Safe => "Safe",
            Scheme::Merge => "Merge",
            Scheme::GrandCoalition => "GrandCoalition",
            Scheme::Case => "Case",
            Scheme::Con => "Con",
            Scheme::Fix => "Fix",
            Scheme::FpG => "FP(G)",
            Scheme::FpU => "FP(U)",
            Scheme::Superadditivity => "Superadditivity",
            Scheme::AgtMaximality => "Agt-Maximality",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Precondition(format!("unknown axiom scheme `{s}`")))
    }
}

/// Values for the metavariables of a scheme. Only the fields a scheme
/// mentions need to be set.
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    pub agents: Coalition,
    pub gamma: Option<GoalAssignment>,
    pub c: Option<Coalition>,
    pub c2: Option<Coalition>,
    pub phi: Option<Formula>,
    pub psi: Option<Formula>,
    pub alpha: Option<Formula>,
    pub beta: Option<Formula>,
    pub chi: Option<Formula>,
    pub parts: Vec<(Coalition, PathFormula)>,
}

fn need<T: Clone>(v: &Option<T>, scheme: Scheme, what: &str) -> Result<T> {
    v.clone()
        .ok_or_else(|| Error::Precondition(format!("{scheme} needs `{what}` in the substitution")))
}

fn next_body(ga: &GoalAssignment, c: &Coalition, scheme: Scheme) -> Result<Formula> {
    match ga.get(c) {
        Some(PathFormula::Next(b)) => Ok(b.clone()),
        None => Ok(tt()),
        _ => Err(Error::Precondition(format!("{scheme}: the goal of {c} must be a nexttime goal"))),
    }
}

pub fn axiom_instance(scheme: Scheme, s: &Substitution) -> Result<Formula> {
    let agt = s.agents.clone();
    Ok(match scheme {
        Scheme::Triv => brak(GoalAssignment::top()),
        Scheme::Safe => not(brak(GoalAssignment::single(agt, PathFormula::next(ff())))),
        Scheme::Merge => {
            for (i, (a, _)) in s.parts.iter().enumerate() {
                for (b, _) in &s.parts[i + 1..] {
                    if !a.is_disjoint(b) || a == b {
                        return Err(Error::Precondition(format!("Merge: coalitions {a} and {b} overlap")));
                    }
                }
                if !a.is_subset(&agt) {
                    return Err(Error::Precondition(format!("Merge: {a} is not a coalition of {agt}")));
                }
            }
            let left = conj(s.parts.iter().map(|(c, g)| brak(GoalAssignment::single(c.clone(), g.clone()))));
            implies(left, brak(GoalAssignment::from_entries(s.parts.iter().cloned())))
        }
        Scheme::GrandCoalition => {
            let ga = need(&s.gamma, scheme, "gamma")?;
            let psi = need(&s.psi, scheme, "psi")?;
            let phi = next_body(&ga, &agt, scheme)?;
            let with = |x: Formula| brak(ga.update(agt.clone(), PathFormula::next(and(phi.clone(), x))));
            implies(brak(ga.clone()), or(with(psi.clone()), with(not(psi))))
        }
        Scheme::Case => {
            let ga = need(&s.gamma, scheme, "gamma")?;
            let c = need(&s.c, scheme, "c")?;
            let psi = need(&s.psi, scheme, "psi")?;
            let phi = next_body(&ga, &c, scheme)?;
            let left = brak(ga.update(c.clone(), PathFormula::next(and(phi, psi.clone()))));
            let right = brak(ga.restrict(&c).update(agt, PathFormula::next(not(psi))));
            implies(brak(ga), or(left, right))
        }
        Scheme::Con => {
            let ga = need(&s.gamma, scheme, "gamma")?;
            let c = need(&s.c, scheme, "c")?;
            let c2 = need(&s.c2, scheme, "c2")?;
            if !c2.is_subset(&c) {
                return Err(Error::Precondition(format!("Con: {c2} is not a subset of {c}")));
            }
            let phi = next_body(&ga, &c, scheme)?;
            let psi = next_body(&ga, &c2, scheme)?;
            implies(brak(ga.clone()), brak(ga.update(c, PathFormula::next(and(phi, psi)))))
        }
        Scheme::Fix => {
            let ga = need(&s.gamma, scheme, "gamma")?;
            iff(unfold(&ga).0, brak(ga))
        }
        Scheme::FpG => {
            let c = need(&s.c, scheme, "c")?;
            let chi = need(&s.chi, scheme, "chi")?;
            let g = brak(GoalAssignment::single(c.clone(), PathFormula::globally(chi.clone())));
            let step = brak(GoalAssignment::single(c, PathFormula::next(g.clone())));
            iff(g, and(chi, step))
        }
        Scheme::FpU => {
            let c = need(&s.c, scheme, "c")?;
            let alpha = need(&s.alpha, scheme, "alpha")?;
            let beta = need(&s.beta, scheme, "beta")?;
            let g = brak(GoalAssignment::single(c.clone(), PathFormula::until(alpha.clone(), beta.clone())));
            let step = brak(GoalAssignment::single(c, PathFormula::next(g.clone())));
            iff(g, or(beta, and(alpha, step)))
        }
        Scheme::Superadditivity => {
            let c1 = need(&s.c, scheme, "c")?;
            let c2 = need(&s.c2, scheme, "c2")?;
            if !c1.is_disjoint(&c2) {
                return Err(Error::Precondition(format!("Superadditivity: {c1} and {c2} overlap")));
            }
            let phi1 = need(&s.phi, scheme, "phi")?;
            let phi2 = need(&s.psi, scheme, "psi")?;
            let one = |c: &Coalition, f: &Formula| brak(GoalAssignment::single(c.clone(), PathFormula::next(f.clone())));
            let joint = GoalAssignment::from_entries([
                (c1.union(&c2), PathFormula::next(and(phi1.clone(), phi2.clone()))),
                (c1.clone(), PathFormula::next(phi1.clone())),
                (c2.clone(), PathFormula::next(phi2.clone())),
            ]);
            implies(and(one(&c1, &phi1), one(&c2, &phi2)), brak(joint))
        }
        Scheme::AgtMaximality => {
            let phi = need(&s.phi, scheme, "phi")?;
            or(
                brak(GoalAssignment::single(Coalition::empty(), PathFormula::next(phi.clone()))),
                brak(GoalAssignment::single(agt, PathFormula::next(not(phi)))),
            )
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse_state_formula(s, Dialect::TlcgaPlus).unwrap()
    }

    fn agt() -> Coalition {
        Coalition::new(["a", "b"])
    }

    #[test]
    fn safe_instance() {
        let s = Substitution { agents: agt(), ..Default::default() };
        assert_eq!(axiom_instance(Scheme::Safe, &s).unwrap(), p("!<<{a,b} -> X false>>"));
    }

    #[test]
    fn grand_coalition_instance() {
        let s = Substitution {
            agents: agt(),
            gamma: Some(GoalAssignment::single(agt(), PathFormula::next(prop("p")))),
            psi: Some(prop("q")),
            ..Default::default()
        };
        assert_eq!(
            axiom_instance(Scheme::GrandCoalition, &s).unwrap(),
            p("<<{a,b} -> X p>> -> <<{a,b} -> X (p & q)>> | <<{a,b} -> X (p & !q)>>")
        );
    }

    #[test]
    fn fp_u_instance() {
        let s = Substitution {
            agents: agt(),
            c: Some(Coalition::new(["a"])),
            alpha: Some(prop("p")),
            beta: Some(prop("q")),
            ..Default::default()
        };
        let f = axiom_instance(Scheme::FpU, &s).unwrap();
        let g = "<<{a} -> (p U q)>>";
        let rhs = format!("q | p & <<{{a}} -> X {g}>>");
        assert_eq!(f, iff(p(g), p(&rhs)));
    }

    #[test]
    fn merge_side_condition() {
        let s = Substitution {
            agents: agt(),
            parts: vec![
                (Coalition::new(["a"]), PathFormula::next(prop("p"))),
                (agt(), PathFormula::next(prop("q"))),
            ],
            ..Default::default()
        };
        assert!(matches!(axiom_instance(Scheme::Merge, &s), Err(Error::Precondition(_))));
    }

    #[test]
    fn scheme_names_round_trip() {
        for k in Scheme::ALL {
            assert_eq!(k.name().parse::<Scheme>().unwrap(), k);
        }
    }
}
