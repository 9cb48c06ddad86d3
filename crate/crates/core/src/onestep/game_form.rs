use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::fixpoint::Admissible;
use super::{Conditions, Mask, OneStepSequent, Redistribution, SatConstraint};
use crate::error::{Error, Result};

/// A finite game form whose outcomes are sets of variables.
/// Profiles are numbered mixed-radix with agent 0 most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameForm {
    pub agents: Vec<String>,
    pub vars: Vec<String>,
    /// Action labels per agent.
    pub actions: Vec<Vec<String>>,
    /// Outcome of every profile, as a bitmask over `vars`.
    pub outcomes: Vec<u32>,
}

impl GameForm {
    pub fn num_profiles(&self) -> usize {
        self.outcomes.len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.actions.iter().map(Vec::len).collect()
    }

    pub fn outcome_set(&self, profile: usize) -> BTreeSet<String> {
        bits_to_set(&self.vars, self.outcomes[profile])
    }

    pub fn profile(&self, mut p: usize) -> Vec<usize> {
        let counts = self.counts();
        let mut out = vec![0; counts.len()];
        for a in (0..counts.len()).rev() {
            out[a] = p % counts[a];
            p /= counts[a];
        }
        out
    }

    /// Short description; the full table only when it is small.
    pub fn render(&self, max_rows: usize) -> String {
        let mut s = format!(
            "game form: {} agents, actions {:?}, {} profiles, {} distinct outcomes\n",
            self.agents.len(),
            self.counts(),
            self.num_profiles(),
            self.outcomes.iter().collect::<BTreeSet<_>>().len()
        );
        if self.num_profiles() <= max_rows {
            for p in 0..self.num_profiles() {
                let acts: Vec<String> = self
                    .profile(p)
                    .iter()
                    .enumerate()
                    .map(|(a, &x)| format!("{}={}", self.agents[a], self.actions[a][x]))
                    .collect();
                let o: Vec<String> = self.outcome_set(p).into_iter().collect();
                s.push_str(&format!("  {} -> {{{}}}\n", acts.join(", "), o.join(",")));
            }
        }
        s
    }
}

fn bits_to_set(vars: &[String], b: u32) -> BTreeSet<String> {
    vars.iter().enumerate().filter(|(i, _)| b >> i & 1 == 1).map(|(_, v)| v.clone()).collect()
}

fn set_to_bits(vars: &[String], s: &BTreeSet<String>) -> Result<u32> {
    let mut b = 0;
    for v in s {
        let i = vars
            .iter()
            .position(|x| x == v)
            .ok_or_else(|| Error::Precondition(format!("variable `{v}` is not declared")))?;
        b |= 1 << i;
    }
    Ok(b)
}

/// A failed satisfaction clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// No profile makes every coalition of this positive assignment force its goal.
    Positive(usize),
    /// At this profile no coalition of the negative assignment can reach its variable.
    Negative { negative: usize, profile: usize },
    /// The outcome of this profile is contained in no member of the constraint.
    Outside { profile: usize },
    /// No outcome is contained in this member of the constraint.
    Unrealized { member: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Positive(i) => write!(f, "positive assignment #{i} is not enforced by any profile"),
            Violation::Negative { negative, profile } => {
                write!(f, "negative assignment #{negative} is violated at profile {profile}")
            }
            Violation::Outside { profile } => write!(f, "outcome of profile {profile} lies in no constraint member"),
            Violation::Unrealized { member } => write!(f, "constraint member #{member} contains no outcome"),
        }
    }
}

/// Sequent and constraint compiled to bitmasks over a variable list.
pub(super) struct Compiled {
    n: usize,
    pos: Vec<Vec<(Mask, u32)>>,
    neg: Vec<Vec<(Mask, u32)>>,
    family: Vec<u32>,
    masks: Vec<Mask>,
}

impl Compiled {
    pub(super) fn new(seq: &OneStepSequent, s: &SatConstraint, vars: &[String]) -> Result<Self> {
        let conv = |gs: &[super::OneStepAssignment]| -> Result<Vec<Vec<(Mask, u32)>>> {
            gs.iter()
                .map(|g| {
                    g.entries
                        .iter()
                        .map(|(c, p)| Ok((*c, set_to_bits(vars, &BTreeSet::from([p.clone()]))?)))
                        .collect()
                })
                .collect()
        };
        let pos = conv(&seq.positives)?;
        let neg = conv(&seq.negatives)?;
        let family = s.family.iter().map(|z| set_to_bits(vars, z)).collect::<Result<_>>()?;
        let masks: BTreeSet<Mask> = pos.iter().chain(&neg).flatten().map(|(c, _)| *c).collect();
        Ok(Compiled { n: seq.agents.len(), pos, neg, family, masks: masks.into_iter().collect() })
    }

    /// Checks the four satisfaction clauses on a game form given by action
    /// counts and outcome bitmasks.
    pub(super) fn check(&self, counts: &[usize], outcomes: &[u32]) -> Option<Violation> {
        let np = outcomes.len();
        for (p, &o) in outcomes.iter().enumerate() {
            if !self.family.iter().any(|&z| o & !z == 0) {
                return Some(Violation::Outside { profile: p });
            }
        }
        for (i, &z) in self.family.iter().enumerate() {
            if !outcomes.iter().any(|&o| o & !z == 0) {
                return Some(Violation::Unrealized { member: i });
            }
        }
        // Per coalition: block of each profile, and the intersection and
        // union of the outcomes in each block.
        let mut tables: HashMap<Mask, (Vec<usize>, Vec<u32>, Vec<u32>)> = HashMap::new();
        let mut digits = vec![0usize; self.n];
        for &c in &self.masks {
            let mut block_of = Vec::with_capacity(np);
            for p in 0..np {
                let mut r = p;
                for a in (0..self.n).rev() {
                    digits[a] = r % counts[a];
                    r /= counts[a];
                }
                let mut b = 0;
                for a in 0..self.n {
                    if c >> a & 1 == 1 {
                        b = b * counts[a] + digits[a];
                    }
                }
                block_of.push(b);
            }
            let nb = block_of.iter().max().map_or(0, |b| b + 1);
            let mut all = vec![u32::MAX; nb];
            let mut any = vec![0u32; nb];
            for (p, &b) in block_of.iter().enumerate() {
                all[b] &= outcomes[p];
                any[b] |= outcomes[p];
            }
            tables.insert(c, (block_of, all, any));
        }
        for (i, g) in self.pos.iter().enumerate() {
            let ok = (0..np).any(|p| {
                g.iter().all(|(c, bit)| {
                    let (bo, all, _) = &tables[c];
                    all[bo[p]] & bit != 0
                })
            });
            if !ok {
                return Some(Violation::Positive(i));
            }
        }
        for (i, g) in self.neg.iter().enumerate() {
            for p in 0..np {
                let ok = g.iter().any(|(c, bit)| {
                    let (bo, _, any) = &tables[c];
                    any[bo[p]] & bit != 0
                });
                if !ok {
                    return Some(Violation::Negative { negative: i, profile: p });
                }
            }
        }
        None
    }
}

/// Checks the four satisfaction clauses by direct enumeration of profiles.
/// Clauses 3 and 4 are read with inclusion: every outcome lies inside some
/// member of `s`, and every member contains some outcome.
pub fn validate_game_form(
    form: &GameForm,
    seq: &OneStepSequent,
    s: &SatConstraint,
) -> Result<std::result::Result<(), Violation>> {
    if form.agents != seq.agents {
        return Err(Error::Precondition("game form and sequent have different agents".into()));
    }
    let expected: usize = form.counts().iter().product();
    if expected != form.outcomes.len() || form.counts().contains(&0) {
        return Err(Error::Precondition("malformed game form".into()));
    }
    if form.vars.len() > 32 || form.outcomes.iter().any(|&o| form.vars.len() < 32 && o >> form.vars.len() != 0) {
        return Err(Error::Precondition("outcome mentions an undeclared variable".into()));
    }
    let comp = Compiled::new(seq, s, &form.vars)?;
    Ok(match comp.check(&form.counts(), &form.outcomes) {
        None => Ok(()),
        Some(v) => Err(v),
    })
}

/// Voting and betting game form built from a satisfiable sequent.
///
/// Every agent picks a positive assignment to vote for (or `*`), an outcome
/// function f from vote vectors to admissible outcomes, and a bet k < |Agt|.
/// The agents voting for the same assignment form a coalition; the bets' sum
/// modulo |Agt| names the agent whose f decides the outcome. Only the
/// functions the argument actually uses are offered: a default choosing the
/// first admissible outcome for every vote vector, and its one-point
/// variations at vote vectors containing `*`.
pub fn witness_game_form(seq: &OneStepSequent, s: &SatConstraint) -> Result<GameForm> {
    if let super::SatResult::Unsat(_) = seq.satisfiable_with(s, Conditions::Repaired)? {
        return Err(Error::Precondition("sequent is not satisfiable under the constraint".into()));
    }
    construct(seq, s)
}

/// The construction without the satisfiability precondition; fails only if
/// some vote vector has no admissible outcome.
pub fn construct(seq: &OneStepSequent, s: &SatConstraint) -> Result<GameForm> {
    let n = seq.agents.len();
    if n == 0 {
        return Err(Error::Precondition("no agents".into()));
    }
    let g = seq.positives.len();
    let adm = Admissible::new(seq, s)?;
    let vars = adm.vars.clone();
    let radix = g + 1;
    let num_votes = radix.pow(n as u32);
    let decode = |mut v: usize| -> Vec<usize> {
        let mut out = vec![0; n];
        for a in (0..n).rev() {
            out[a] = v % radix;
            v /= radix;
        }
        out
    };
    let red = |votes: &[usize]| -> Redistribution {
        let mut pairs = Vec::new();
        for i in 0..g {
            let c: Mask = votes.iter().enumerate().filter(|(_, &x)| x == i).fold(0, |m, (a, _)| m | 1 << a);
            if c != 0 {
                pairs.push((c, i));
            }
        }
        pairs.sort();
        Redistribution { pairs }
    };
    let mut admissible: Vec<&[u32]> = Vec::with_capacity(num_votes);
    for v in 0..num_votes {
        let ok = adm.get(&red(&decode(v)), seq.full_mask());
        if ok.is_empty() {
            return Err(Error::Precondition("some vote vector has no admissible outcome".into()));
        }
        admissible.push(ok);
    }
    let default: Vec<u32> = admissible.iter().map(|a| a[0]).collect();
    let mut fs: Vec<Vec<u32>> = vec![default.clone()];
    for v in 0..num_votes {
        if decode(v).contains(&g) {
            for &z in &admissible[v][1..] {
                let mut f = default.clone();
                f[v] = z;
                fs.push(f);
            }
        }
    }
    // action index = (vote * |fs| + f) * n + k
    let per_agent = radix * fs.len() * n;
    let label = |x: usize| {
        let (rest, k) = (x / n, x % n);
        let (vote, f) = (rest / fs.len(), rest % fs.len());
        let v = if vote == g { "*".to_string() } else { format!("g{vote}") };
        format!("({v},f{f},{k})")
    };
    let actions: Vec<Vec<String>> = (0..n).map(|_| (0..per_agent).map(label).collect()).collect();
    let total = per_agent.pow(n as u32);
    let mut outcomes = Vec::with_capacity(total);
    let mut acts = vec![0usize; n];
    for p in 0..total {
        let mut r = p;
        for a in (0..n).rev() {
            acts[a] = r % per_agent;
            r /= per_agent;
        }
        let mut vote_index = 0;
        let mut bet = 0;
        for &x in &acts {
            vote_index = vote_index * radix + x / n / fs.len();
            bet += x % n;
        }
        let winner = acts[bet % n];
        let f = winner / n % fs.len();
        outcomes.push(fs[f][vote_index]);
    }
    Ok(GameForm { agents: seq.agents.clone(), vars, actions, outcomes })
}
