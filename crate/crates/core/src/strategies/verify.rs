use std::collections::{HashMap, VecDeque};

use super::memory::{FiniteStrategyProfile, Memory};
use crate::cgm::{AgentMask, Cgm};
use crate::checker::{Checker, Extension};
use crate::error::Result;
use crate::syntax::*;

/// Extensions of the state operands of every goal in `ga`.
pub fn goal_labels(m: &Cgm, ga: &GoalAssignment) -> Result<HashMap<Formula, Extension>> {
    let mut c = Checker::new(m);
    let mut out = HashMap::new();
    for (_, g) in ga.iter() {
        for f in g.state_operands() {
            if !out.contains_key(f) {
                out.insert(f.clone(), c.extension(f)?);
            }
        }
    }
    Ok(out)
}

/// The sub-product of memory nodes reachable from `s` when the coalition
/// `mask` follows `sigma` and everybody else acts arbitrarily.
pub(crate) struct Restricted {
    pub states: Vec<usize>,
    pub succ: Vec<Vec<usize>>,
}

pub(crate) fn restricted_product(
    m: &Cgm,
    s: usize,
    sigma: &FiniteStrategyProfile,
    mask: AgentMask,
) -> Result<Restricted> {
    let mode = sigma.mode;
    let mut index: HashMap<Memory, usize> = HashMap::new();
    let mut mems = vec![mode.initial(s)];
    index.insert(mems[0].clone(), 0);
    let mut succ = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(n) = queue.pop_front() {
        let mem = mems[n].clone();
        let st = mem.last();
        let chosen = sigma.profile_at(m, &mem)?;
        let blocks = m.blocks(st, mask);
        let b = blocks.block_of[chosen];
        let mut out = Vec::new();
        for p in (0..m.num_profiles(st)).filter(|&p| blocks.block_of[p] == b) {
            let next = mode.step(&mem, p, m.succ(st, p));
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = mems.len();
                    index.insert(next.clone(), id);
                    mems.push(next);
                    queue.push_back(id);
                    id
                }
            };
            if !out.contains(&id) {
                out.push(id);
            }
        }
        if succ.len() <= n {
            succ.resize(n + 1, Vec::new());
        }
        succ[n] = out;
    }
    succ.resize(mems.len(), Vec::new());
    Ok(Restricted { states: mems.iter().map(Memory::last).collect(), succ })
}

/// Whether every path of a total transition system from node 0 satisfies `g`.
pub(crate) fn all_paths_satisfy(
    states: &[usize],
    succ: &[Vec<usize>],
    g: &PathFormula,
    labels: &HashMap<Formula, Extension>,
) -> bool {
    let holds = |f: &Formula, n: usize| labels[f].contains(states[n]);
    match g {
        PathFormula::Next(f) => succ[0].iter().all(|&u| holds(f, u)),
        PathFormula::Globally(f) => (0..states.len()).all(|n| holds(f, n)),
        PathFormula::Until(a, b) => {
            let mut z: Vec<bool> = (0..states.len()).map(|n| holds(b, n)).collect();
            loop {
                let mut changed = false;
                for n in 0..states.len() {
                    if !z[n] && holds(a, n) && succ[n].iter().all(|&u| z[u]) {
                        z[n] = true;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
            z[0]
        }
        PathFormula::And(x, y) => all_paths_satisfy(states, succ, x, labels) && all_paths_satisfy(states, succ, y, labels),
    }
}

/// `Σ, s ⊩ γ`: every supported coalition's goal holds on all plays where
/// the coalition follows Σ.
pub fn verify_witness(m: &Cgm, s: usize, sigma: &FiniteStrategyProfile, ga: &GoalAssignment) -> Result<bool> {
    let labels = goal_labels(m, ga)?;
    for (c, g) in ga.iter() {
        let r = restricted_product(m, s, sigma, m.mask(c)?)?;
        if !all_paths_satisfy(&r.states, &r.succ, g, &labels) {
            return Ok(false);
        }
    }
    Ok(true)
}
