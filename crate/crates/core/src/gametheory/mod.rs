//! Solution concepts as goal assignments: winners and losers of an induced
//! play, Nash equilibria, strong and coalitional stability, co-equilibria
//! and the core of a cooperative game.

use std::collections::BTreeMap;

use crate::cgm::Cgm;
use crate::checker::check;
use crate::error::{Error, Result};
use crate::strategies::{eval_on_lasso, path_labels, play_lasso, FiniteStrategyProfile};
use crate::syntax::*;

/// Classification of the supported coalitions and of the agents with an
/// individual goal. Agents without a singleton goal are in neither list.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct OutcomePartition {
    pub winning_coalitions: Vec<Coalition>,
    pub losing_coalitions: Vec<Coalition>,
    pub winners: Vec<String>,
    pub losers: Vec<String>,
}

impl OutcomePartition {
    pub fn is_winning(&self, c: &Coalition) -> bool {
        self.winning_coalitions.contains(c)
    }
}

/// Evaluates every goal of `ga` on the play of `sigma` from `w`.
pub fn partition_outcomes(m: &Cgm, w: usize, sigma: &FiniteStrategyProfile, ga: &GoalAssignment) -> Result<OutcomePartition> {
    let lasso = play_lasso(m, w, sigma)?;
    let mut part = OutcomePartition::default();
    for (c, g) in ga.iter() {
        let won = eval_on_lasso(&lasso, g, &path_labels(m, g)?);
        if won {
            part.winning_coalitions.push(c.clone());
        } else {
            part.losing_coalitions.push(c.clone());
        }
        if c.len() == 1 {
            let a = c.members().next().expect("singleton").to_string();
            if won {
                part.winners.push(a);
            } else {
                part.losers.push(a);
            }
        }
    }
    Ok(part)
}

/// Conjunction of goals, staying in plain TLCGA when all are nexttime or
/// all are `G` goals; `None` for the empty conjunction.
pub fn conj_goals<I: IntoIterator<Item = PathFormula>>(goals: I) -> Option<PathFormula> {
    let goals: Vec<PathFormula> = goals.into_iter().flat_map(|g| g.conjuncts().into_iter().cloned().collect::<Vec<_>>()).collect();
    let goals: Vec<PathFormula> = goals.into_iter().filter(|g| !g.is_trivial()).collect();
    if goals.is_empty() {
        return None;
    }
    if goals.iter().all(PathFormula::is_next) {
        return Some(PathFormula::next(conj(goals.iter().map(|g| match g {
            PathFormula::Next(f) => f.clone(),
            _ => unreachable!(),
        }))));
    }
    if goals.iter().all(|g| matches!(g, PathFormula::Globally(_))) {
        return Some(PathFormula::globally(conj(goals.iter().map(|g| match g {
            PathFormula::Globally(f) => f.clone(),
            _ => unreachable!(),
        }))));
    }
    PathFormula::conj(goals)
}

/// A path goal equivalent to the negation of `g` on every play.
pub fn negate_goal(g: &PathFormula) -> Result<PathFormula> {
    match g {
        PathFormula::Next(f) => Ok(PathFormula::next(not(f.clone()))),
        PathFormula::Globally(f) => Ok(PathFormula::until(tt(), not(f.clone()))),
        PathFormula::Until(a, b) if a.is_true() => Ok(PathFormula::globally(not(b.clone()))),
        PathFormula::Until(..) => Err(Error::Precondition(format!("cannot express the negation of {g} as a goal"))),
        PathFormula::And(..) => match conj_goals(g.conjuncts().into_iter().cloned()) {
            Some(c @ (PathFormula::Next(_) | PathFormula::Globally(_))) => negate_goal(&c),
            _ => Err(Error::Precondition(format!("cannot express the negation of {g} as a goal"))),
        },
    }
}

/// Individual goals by agent; errors on any non-singleton entry.
fn individual(ga: &GoalAssignment) -> Result<BTreeMap<String, PathFormula>> {
    ga.iter()
        .map(|(c, g)| match c.len() {
            1 => Ok((c.members().next().expect("singleton").to_string(), g.clone())),
            _ => Err(Error::Precondition(format!("{c} is not an individual goal holder"))),
        })
        .collect()
}

fn goal_of<'a>(goals: &'a BTreeMap<String, PathFormula>, a: &str) -> Result<&'a PathFormula> {
    goals.get(a).ok_or_else(|| Error::Precondition(format!("agent {a} has no individual goal")))
}

fn without(agents: &[String], out: &[&String]) -> Coalition {
    Coalition::new(agents.iter().filter(|a| !out.contains(a)).cloned())
}

fn assemble(entries: Vec<(Coalition, Option<PathFormula>)>) -> GoalAssignment {
    GoalAssignment::from_entries(entries.into_iter().filter_map(|(c, g)| g.map(|g| (c, g))))
}

/// Goal assignment witnessed exactly by the Nash equilibria with the given
/// winners and losers: the grand coalition achieves the winners' goals and
/// defeats the losers' goals, and each loser is defeated by everyone else.
pub fn nash_ga(agents: &[String], ga: &GoalAssignment, part: &OutcomePartition) -> Result<GoalAssignment> {
    let goals = individual(ga)?;
    let mut grand = Vec::new();
    for a in &part.winners {
        grand.push(goal_of(&goals, a)?.clone());
    }
    let mut entries = Vec::new();
    for a in &part.losers {
        let neg = negate_goal(goal_of(&goals, a)?)?;
        grand.push(neg.clone());
        entries.push((without(agents, &[a]), Some(neg)));
    }
    entries.insert(0, (Coalition::new(agents.iter().cloned()), conj_goals(grand)));
    Ok(assemble(entries))
}

/// Strong individual stability: no set of losers can jointly deviate so as
/// to all win.
pub fn strong_ga(agents: &[String], ga: &GoalAssignment, part: &OutcomePartition) -> Result<GoalAssignment> {
    let goals = individual(ga)?;
    let winners = part.winners.iter().map(|a| goal_of(&goals, a).cloned()).collect::<Result<Vec<_>>>()?;
    let mut entries = vec![(Coalition::new(agents.iter().cloned()), conj_goals(winners))];
    let losers = &part.losers;
    for bits in 1u64..1 << losers.len() {
        let group: Vec<&String> = (0..losers.len()).filter(|i| bits >> i & 1 == 1).map(|i| &losers[i]).collect();
        let joint = group.iter().map(|a| goal_of(&goals, a).cloned()).collect::<Result<Vec<_>>>()?;
        let g = conj_goals(joint).map(|g| negate_goal(&g)).transpose()?;
        entries.push((without(agents, &group), g));
    }
    Ok(assemble(entries))
}

/// Coalitional stability: no losing coalition can deviate so as to win.
/// A losing empty coalition contributes its negated goal to the grand
/// coalition's conjunction.
pub fn coalitional_ga(agents: &[String], ga: &GoalAssignment, part: &OutcomePartition) -> Result<GoalAssignment> {
    let all = Coalition::new(agents.iter().cloned());
    let mut grand: Vec<PathFormula> = Vec::new();
    for c in &part.winning_coalitions {
        grand.push(ga.get(c).ok_or_else(|| Error::Precondition(format!("{c} is not supported")))?.clone());
    }
    let mut entries = Vec::new();
    for d in &part.losing_coalitions {
        let g = ga.get(d).ok_or_else(|| Error::Precondition(format!("{d} is not supported")))?;
        let neg = negate_goal(g)?;
        let c = all.difference(d);
        if c == all {
            grand.push(neg);
        } else {
            entries.push((c, Some(neg)));
        }
    }
    entries.insert(0, (all, conj_goals(grand)));
    Ok(assemble(entries))
}

/// `γ*`: the restriction of `ga` to the grand coalition and singletons.
pub fn coequilibrium_ga(agents: &[String], ga: &GoalAssignment) -> GoalAssignment {
    let all = Coalition::new(agents.iter().cloned());
    GoalAssignment::from_entries(ga.iter().filter(|(c, _)| c.len() == 1 || **c == all).map(|(c, g)| (c.clone(), g.clone())))
}

/// Whether a co-equilibrium for `ga` exists at `w`.
pub fn check_coequilibrium(m: &Cgm, w: usize, ga: &GoalAssignment) -> Result<bool> {
    check(m, w, &brak(coequilibrium_ga(m.agents(), ga)))
}

fn joint_goal(goals: &BTreeMap<String, PathFormula>, c: &[&String]) -> Result<GoalAssignment> {
    let g = c.iter().map(|a| goal_of(goals, a).cloned()).collect::<Result<Vec<_>>>()?;
    Ok(match conj_goals(g) {
        Some(g) => GoalAssignment::single(Coalition::new(c.iter().map(|a| a.to_string())), g),
        None => GoalAssignment::top(),
    })
}

/// `⋀ ¬⟨⟨C ↦ ⋀_{i∈C} γ(i)⟩⟩` over the non-empty sets of losers: true at `w`
/// iff no individually losing coalition has a beneficial deviation.
pub fn core_nonempty_formula(ga: &GoalAssignment, losers: &[String]) -> Result<Formula> {
    let goals = individual(ga)?;
    let mut parts = Vec::new();
    for bits in 1u64..1 << losers.len() {
        let c: Vec<&String> = (0..losers.len()).filter(|i| bits >> i & 1 == 1).map(|i| &losers[i]).collect();
        parts.push(not(brak(joint_goal(&goals, &c)?)));
    }
    Ok(conj(parts))
}

/// Whether `c` can jointly enforce all its members' individual goals.
pub fn has_beneficial_deviation(m: &Cgm, w: usize, ga: &GoalAssignment, c: &[String]) -> Result<bool> {
    let goals = individual(ga)?;
    let c: Vec<&String> = c.iter().collect();
    check(m, w, &brak(joint_goal(&goals, &c)?))
}

/// A loser's profitable unilateral deviation.
#[derive(Clone, Debug)]
pub struct Deviation {
    pub agent: String,
    pub profile: FiniteStrategyProfile,
}

/// Independent Nash check: tries every table of each loser over the memory
/// values of `sigma` and reports the first one that makes the loser win.
/// Deviations are restricted to the memory class of `sigma`.
pub fn brute_force_nash(
    m: &Cgm,
    w: usize,
    sigma: &FiniteStrategyProfile,
    ga: &GoalAssignment,
    limit: usize,
) -> Result<Option<Deviation>> {
    let goals = individual(ga)?;
    let part = partition_outcomes(m, w, sigma, ga)?;
    let keys: Vec<_> = sigma.table.keys().cloned().collect();
    for name in &part.losers {
        let a = m.agent(name)?;
        let goal = goal_of(&goals, name)?;
        let labels = path_labels(m, goal)?;
        let radix: Vec<usize> = keys.iter().map(|k| m.actions(k.last(), a).len()).collect();
        let total = radix.iter().try_fold(1usize, |acc, &r| acc.checked_mul(r)).filter(|&t| t <= limit);
        if total.is_none() {
            return Err(Error::LimitExceeded(format!("more than {limit} deviation tables for {name}")));
        }
        let mut digits = vec![0usize; keys.len()];
        loop {
            let mut dev = sigma.clone();
            for (k, &d) in keys.iter().zip(&digits) {
                dev.table.get_mut(k).expect("same domain")[a] = d;
            }
            if eval_on_lasso(&play_lasso(m, w, &dev)?, goal, &labels) {
                return Ok(Some(Deviation { agent: name.clone(), profile: dev }));
            }
            let mut i = digits.len();
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < radix[i] {
                    break;
                }
                digits[i] = 0;
            }
            if digits.iter().all(|&d| d == 0) {
                break;
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests;
