//! One-step satisfiability: positive one-step sequents, redistributions,
//! forced-goal sets and the combinatorial satisfiability test, with an
//! explicit witness game form and a brute-force cross-check.

mod brute;
mod fixpoint;
mod game_form;

use std::collections::BTreeSet;
use std::fmt;

pub use brute::{brute_force_satisfiable, cross_check, exhaustive_grid, random_instance, BruteConfig, CrossCheck};
pub use fixpoint::{Admissible, MAX_SEQUENT_VARS};
pub use game_form::{construct, validate_game_form, witness_game_form, GameForm, Violation};

use crate::error::{Error, Result};
use crate::syntax::*;

/// Bitmask over the agent list of a sequent.
pub type Mask = u64;

/// A one-step goal assignment `C ↦ X p` (positive) or `C ↦ X ¬p`
/// (negative); entries sorted by coalition mask.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct OneStepAssignment {
    pub entries: Vec<(Mask, String)>,
}

impl OneStepAssignment {
    pub fn get(&self, c: Mask) -> Option<&str> {
        self.entries.iter().find(|(m, _)| *m == c).map(|(_, v)| v.as_str())
    }
}

/// A finite set of formulas `⟨⟨γ⟩⟩` (γ positive) and `¬⟨⟨γ⟩⟩` (γ negative).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OneStepSequent {
    pub agents: Vec<String>,
    pub positives: Vec<OneStepAssignment>,
    pub negatives: Vec<OneStepAssignment>,
}

/// A satisfiability constraint: a family of subsets of the variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SatConstraint {
    pub vars: BTreeSet<String>,
    pub family: BTreeSet<BTreeSet<String>>,
}

impl SatConstraint {
    pub fn new<I, J, S>(vars: I, family: J) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
        J: IntoIterator<Item = BTreeSet<String>>,
    {
        let vars: BTreeSet<String> = vars.into_iter().map(Into::into).collect();
        let family: BTreeSet<BTreeSet<String>> = family.into_iter().collect();
        for z in &family {
            if let Some(v) = z.iter().find(|v| !vars.contains(*v)) {
                return Err(Error::Precondition(format!("constraint mentions undeclared variable `{v}`")));
            }
        }
        Ok(SatConstraint { vars, family })
    }

    /// Variables are taken to be those occurring in the family and in `extra`.
    pub fn infer(family: &[BTreeSet<String>], extra: &BTreeSet<String>) -> Self {
        let mut vars: BTreeSet<String> = family.iter().flatten().cloned().collect();
        vars.extend(extra.iter().cloned());
        SatConstraint { vars, family: family.iter().cloned().collect() }
    }

    fn covers(&self, need: &BTreeSet<String>) -> bool {
        self.family.iter().any(|z| need.is_subset(z))
    }
}

/// A redistribution `(C₁,γ₁,…,Cₙ,γₙ)`: pairwise disjoint coalitions, each
/// paired with the index of a positive assignment.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Redistribution {
    pub pairs: Vec<(Mask, usize)>,
}

/// Which reading of the satisfiability conditions to apply.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Conditions {
    /// Conditions (1) and (2) exactly as stated.
    Literal,
    /// Conditions (1) and (2) with the grand coalition's clause read as
    /// `F(R) ∪ {q}` fitting in a member, plus the empty-coalition check and
    /// the admissible-outcome fixpoint. Exact for the satisfaction clauses.
    #[default]
    Repaired,
}

impl OneStepSequent {
    pub fn new(agents: Vec<String>) -> Self {
        OneStepSequent { agents, positives: Vec::new(), negatives: Vec::new() }
    }

    pub fn full_mask(&self) -> Mask {
        (1u64 << self.agents.len()) - 1
    }

    fn mask_of(&self, c: &Coalition) -> Result<Mask> {
        let mut m = 0;
        for a in c.members() {
            let i = self.agents.iter().position(|x| x == a).ok_or_else(|| Error::UnknownAgent(a.to_string()))?;
            m |= 1 << i;
        }
        Ok(m)
    }

    fn assignment(&self, ga: &GoalAssignment, negative: bool) -> Result<OneStepAssignment> {
        let mut entries = Vec::new();
        for (c, g) in ga.iter() {
            let var = match (g, negative) {
                (PathFormula::Next(b), false) => match &**b {
                    StateFormula::Prop(p) => p.clone(),
                    _ => return Err(not_one_step(ga, "positive goals must be X p")),
                },
                (PathFormula::Next(b), true) => match &**b {
                    StateFormula::Not(x) => match &**x {
                        StateFormula::Prop(p) => p.clone(),
                        _ => return Err(not_one_step(ga, "negative goals must be X !p")),
                    },
                    _ => return Err(not_one_step(ga, "negative goals must be X !p")),
                },
                _ => return Err(not_one_step(ga, "goals must be nexttime")),
            };
            entries.push((self.mask_of(c)?, var));
        }
        entries.sort();
        Ok(OneStepAssignment { entries })
    }

    /// Adds `⟨⟨γ⟩⟩` or `¬⟨⟨γ⟩⟩`; duplicates are ignored.
    pub fn push(&mut self, literal: &Formula) -> Result<()> {
        match &**literal {
            StateFormula::Brak(ga) => {
                let a = self.assignment(ga, false)?;
                if !self.positives.contains(&a) {
                    self.positives.push(a);
                }
            }
            StateFormula::Not(x) => match &**x {
                StateFormula::Brak(ga) => {
                    let a = self.assignment(ga, true)?;
                    if !self.negatives.contains(&a) {
                        self.negatives.push(a);
                    }
                }
                _ => return Err(Error::Precondition(format!("not a one-step literal: {literal}"))),
            },
            _ => return Err(Error::Precondition(format!("not a one-step literal: {literal}"))),
        }
        Ok(())
    }

    pub fn from_literals(agents: Vec<String>, literals: &[Formula]) -> Result<Self> {
        let mut s = OneStepSequent::new(agents);
        for l in literals {
            s.push(l)?;
        }
        Ok(s)
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.positives.iter().chain(&self.negatives).flat_map(|g| g.entries.iter().map(|(_, v)| v.clone())).collect()
    }

    /// Every redistribution, enumerated as maps from coalitions (in mask
    /// order) to positives or `*`, skipping overlapping choices.
    pub fn redistributions(&self) -> Vec<Redistribution> {
        let k = 1usize << self.agents.len();
        let g = self.positives.len();
        let mut out = Vec::new();
        let mut cur: Vec<(Mask, usize)> = Vec::new();
        fn go(c: usize, k: usize, g: usize, used: Mask, cur: &mut Vec<(Mask, usize)>, out: &mut Vec<Redistribution>) {
            if c == k {
                out.push(Redistribution { pairs: cur.clone() });
                return;
            }
            go(c + 1, k, g, used, cur, out);
            let m = c as Mask;
            if m & used == 0 {
                for i in 0..g {
                    cur.push((m, i));
                    go(c + 1, k, g, used | m, cur, out);
                    cur.pop();
                }
            }
        }
        go(0, k, g, 0, &mut cur, &mut out);
        out
    }

    /// `F(R)`: variables forced by the coalitions formed in `R`.
    pub fn forced(&self, r: &Redistribution) -> BTreeSet<String> {
        self.forced_within(r, self.full_mask())
    }

    fn forced_within(&self, r: &Redistribution, within: Mask) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for &(ci, i) in &r.pairs {
            let allowed = ci & within;
            for (b, p) in &self.positives[i].entries {
                if b & !allowed == 0 {
                    out.insert(p.clone());
                }
            }
        }
        out
    }

    /// `F(R, γ′, C′)`; errors if `C′` is outside the support of `γ′`.
    pub fn forced_against(&self, r: &Redistribution, negative: usize, c: Mask) -> Result<BTreeSet<String>> {
        let q = self.negatives[negative]
            .get(c)
            .ok_or_else(|| Error::Precondition("coalition outside the negative assignment's support".into()))?;
        let mut out = self.forced_within(r, c);
        out.insert(q.to_string());
        Ok(out)
    }

    pub fn satisfiable(&self, s: &SatConstraint) -> Result<SatResult> {
        self.satisfiable_with(s, Conditions::default())
    }

    pub fn satisfiable_with(&self, s: &SatConstraint, mode: Conditions) -> Result<SatResult> {
        if let Some(v) = self.variables().into_iter().find(|v| !s.vars.contains(v)) {
            return Err(Error::Precondition(format!("sequent variable `{v}` is not declared by the constraint")));
        }
        if mode == Conditions::Repaired {
            for (i, g) in self.positives.iter().enumerate() {
                if let Some(p) = g.get(0) {
                    if !s.family.iter().all(|z| z.contains(p)) {
                        return Ok(SatResult::Unsat(Certificate::EmptyCoalition { positive: i, var: p.to_string() }));
                    }
                }
            }
        }
        for r in self.redistributions() {
            if let Some(c) = self.check_redistribution_with(&r, s, mode) {
                return Ok(SatResult::Unsat(c));
            }
        }
        if mode == Conditions::Repaired {
            let adm = Admissible::new(self, s)?;
            if let Some(r) = adm.empty_redistribution() {
                return Ok(SatResult::Unsat(Certificate::NoOutcome { redistribution: r.clone() }));
            }
            let free = adm.get(&Redistribution::default(), self.full_mask());
            for z in &s.family {
                if !free.iter().any(|&o| adm.to_set(o).is_subset(z)) {
                    return Ok(SatResult::Unsat(Certificate::Unrealized { member: z.clone() }));
                }
            }
        }
        Ok(SatResult::Sat)
    }

    /// Conditions (1) and (2) for a single redistribution, repaired reading.
    pub fn check_redistribution(&self, r: &Redistribution, s: &SatConstraint) -> Option<Certificate> {
        self.check_redistribution_with(r, s, Conditions::Repaired)
    }

    pub fn check_redistribution_with(&self, r: &Redistribution, s: &SatConstraint, mode: Conditions) -> Option<Certificate> {
        let full = self.full_mask();
        if !s.covers(&self.forced(r)) {
            return Some(Certificate::Forced { redistribution: r.clone() });
        }
        for (j, neg) in self.negatives.iter().enumerate() {
            let blocked_ok = neg.entries.iter().any(|(c, q)| {
                if *c == full && mode == Conditions::Literal {
                    s.family.iter().all(|z| z.contains(q))
                } else if *c == full {
                    let mut need = self.forced(r);
                    need.insert(q.clone());
                    s.covers(&need)
                } else {
                    s.covers(&self.forced_against(r, j, *c).expect("in support"))
                }
            });
            if !blocked_ok {
                return Some(Certificate::Blocked { redistribution: r.clone(), negative: j });
            }
        }
        None
    }

    pub fn render_redistribution(&self, r: &Redistribution) -> String {
        let parts: Vec<String> = r
            .pairs
            .iter()
            .map(|&(c, i)| format!("{} -> {}", self.render_mask(c), self.render_positive(i)))
            .collect();
        format!("({})", parts.join(", "))
    }

    pub fn render_mask(&self, c: Mask) -> String {
        let names: Vec<&str> =
            (0..self.agents.len()).filter(|a| c >> a & 1 == 1).map(|a| self.agents[a].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn render_positive(&self, i: usize) -> String {
        let e: Vec<String> =
            self.positives[i].entries.iter().map(|(c, p)| format!("{} -> X {p}", self.render_mask(*c))).collect();
        format!("<<{}>>", e.join("; "))
    }

    pub fn render_negative(&self, i: usize) -> String {
        let e: Vec<String> =
            self.negatives[i].entries.iter().map(|(c, p)| format!("{} -> X !{p}", self.render_mask(*c))).collect();
        format!("!<<{}>>", e.join("; "))
    }
}

fn not_one_step(ga: &GoalAssignment, why: &str) -> Error {
    Error::Precondition(format!("{ga} is not a one-step goal assignment: {why}"))
}

/// Why a sequent is not satisfiable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Certificate {
    /// Condition (1) fails: no member of the constraint contains `F(R)`.
    Forced { redistribution: Redistribution },
    /// Condition (2) fails for this redistribution and negative assignment.
    Blocked { redistribution: Redistribution, negative: usize },
    /// A positive assignment's empty-coalition goal is missing from some member.
    EmptyCoalition { positive: usize, var: String },
    /// Every candidate outcome of this redistribution violates some
    /// negative assignment, directly or through the deviations it relies on.
    NoOutcome { redistribution: Redistribution },
    /// No admissible outcome fits inside this constraint member.
    Unrealized { member: BTreeSet<String> },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SatResult {
    Sat,
    Unsat(Certificate),
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat)
    }
}

/// Human-readable certificate.
pub struct CertificateDisplay<'a>(pub &'a OneStepSequent, pub &'a Certificate);

impl fmt::Display for CertificateDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (seq, cert) = (self.0, self.1);
        let set = |s: &BTreeSet<String>| format!("{{{}}}", s.iter().cloned().collect::<Vec<_>>().join(","));
        match cert {
            Certificate::Forced { redistribution } => write!(
                f,
                "redistribution {} forces {} but no constraint member contains it",
                seq.render_redistribution(redistribution),
                set(&seq.forced(redistribution))
            ),
            Certificate::Blocked { redistribution, negative } => {
                write!(
                    f,
                    "redistribution {} blocks {}:",
                    seq.render_redistribution(redistribution),
                    seq.render_negative(*negative)
                )?;
                let parts: Vec<String> = seq.negatives[*negative]
                    .entries
                    .iter()
                    .map(|(c, _)| {
                        let need = seq.forced_against(redistribution, *negative, *c).expect("in support");
                        format!("{} needs {}", seq.render_mask(*c), set(&need))
                    })
                    .collect();
                write!(f, " {}", parts.join("; "))
            }
            Certificate::EmptyCoalition { positive, var } => write!(
                f,
                "{} makes the empty coalition force {var}, which some constraint member lacks",
                seq.render_positive(*positive)
            ),
            Certificate::NoOutcome { redistribution } => write!(
                f,
                "redistribution {} has no outcome compatible with every negative assignment",
                seq.render_redistribution(redistribution)
            ),
            Certificate::Unrealized { member } => {
                write!(f, "no outcome compatible with the sequent fits inside {}", set(member))
            }
        }
    }
}

/// Disjunctive normal form of a positive one-step formula: a list of
/// branches, each a list of literals. `true` is the empty branch list entry,
/// `false` yields no branches.
pub fn dnf(f: &Formula) -> Result<Vec<Vec<Formula>>> {
    Ok(match &**f {
        StateFormula::True => vec![vec![]],
        StateFormula::False => vec![],
        StateFormula::Brak(_) => vec![vec![f.clone()]],
        StateFormula::Not(x) if matches!(&**x, StateFormula::Brak(_)) => vec![vec![f.clone()]],
        StateFormula::Not(x) if matches!(&**x, StateFormula::True) => vec![],
        StateFormula::Not(x) if matches!(&**x, StateFormula::False) => vec![vec![]],
        StateFormula::Or(a, b) => {
            let mut v = dnf(a)?;
            v.extend(dnf(b)?);
            v
        }
        StateFormula::And(a, b) => {
            let (x, y) = (dnf(a)?, dnf(b)?);
            let mut v = Vec::new();
            for l in &x {
                for r in &y {
                    v.push(l.iter().chain(r).cloned().collect());
                }
            }
            v
        }
        _ => return Err(Error::Precondition(format!("not a positive one-step formula: {f}"))),
    })
}

/// S-satisfiability of a positive one-step formula: some DNF branch is a
/// satisfiable sequent. Returns the first satisfiable branch.
pub fn formula_satisfiable(agents: &[String], f: &Formula, s: &SatConstraint) -> Result<Option<OneStepSequent>> {
    for branch in dnf(f)? {
        let seq = OneStepSequent::from_literals(agents.to_vec(), &branch)?;
        if seq.satisfiable(s)?.is_sat() {
            return Ok(Some(seq));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests;
