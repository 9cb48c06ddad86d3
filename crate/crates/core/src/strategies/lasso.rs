use std::collections::HashMap;

use super::memory::FiniteStrategyProfile;
use crate::cgm::Cgm;
use crate::checker::{Checker, Extension};
use crate::error::Result;
use crate::syntax::*;

/// An ultimately periodic play: `prefix` followed by `cycle` forever.
/// Entries are (state, profile played there).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lasso {
    pub prefix: Vec<(usize, usize)>,
    pub cycle: Vec<(usize, usize)>,
}

impl Lasso {
    /// State at position `i` of the infinite play.
    pub fn state_at(&self, i: usize) -> usize {
        if i < self.prefix.len() {
            self.prefix[i].0
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()].0
        }
    }

    /// Number of positions that determine every path property.
    pub fn span(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn render(&self, m: &Cgm) -> String {
        let ids = |xs: &[(usize, usize)]| xs.iter().map(|&(s, _)| m.state_id(s).to_string()).collect::<Vec<_>>();
        format!("{} ({})^w", ids(&self.prefix).join(" "), ids(&self.cycle).join(" "))
    }
}

/// The play induced by Σ at `s`, cut at the first repeated memory node.
pub fn play_lasso(m: &Cgm, s: usize, sigma: &FiniteStrategyProfile) -> Result<Lasso> {
    let mode = sigma.mode;
    let mut seen = HashMap::new();
    let mut steps = Vec::new();
    let mut mem = mode.initial(s);
    loop {
        if let Some(&j) = seen.get(&mem) {
            let cycle = steps.split_off(j);
            return Ok(Lasso { prefix: steps, cycle });
        }
        seen.insert(mem.clone(), steps.len());
        let st = mem.last();
        let p = sigma.profile_at(m, &mem)?;
        steps.push((st, p));
        mem = mode.step(&mem, p, m.succ(st, p));
    }
}

/// Extensions of the state operands of a path formula.
pub fn path_labels(m: &Cgm, theta: &PathFormula) -> Result<HashMap<Formula, Extension>> {
    let mut c = Checker::new(m);
    let mut out = HashMap::new();
    for f in theta.state_operands() {
        if !out.contains_key(f) {
            out.insert(f.clone(), c.extension(f)?);
        }
    }
    Ok(out)
}

pub fn eval_on_lasso(lasso: &Lasso, theta: &PathFormula, labels: &HashMap<Formula, Extension>) -> bool {
    let holds = |f: &Formula, i: usize| labels[f].contains(lasso.state_at(i));
    match theta {
        PathFormula::Next(f) => holds(f, 1),
        PathFormula::Globally(f) => (0..lasso.span()).all(|i| holds(f, i)),
        PathFormula::Until(a, b) => {
            for i in 0..lasso.span() {
                if holds(b, i) {
                    return true;
                }
                if !holds(a, i) {
                    return false;
                }
            }
            false
        }
        PathFormula::And(x, y) => eval_on_lasso(lasso, x, labels) && eval_on_lasso(lasso, y, labels),
    }
}
