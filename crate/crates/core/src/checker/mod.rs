//! Play-based model checking by fixpoint iteration.
//!
//! Formulas are translated with [`to_mu`] and evaluated bottom-up. The only
//! modality left after translation is the one-step goal assignment, which is
//! decided by enumerating action profiles grouped per coalition.

mod extension;

use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;
use std::sync::Arc;

pub use extension::Extension;

use crate::cgm::{AgentMask, Cgm};
use crate::error::{Error, Result};
use crate::syntax::*;
use crate::transform::to_mu;

/// Variable valuation for open formulas.
pub type Environment = HashMap<String, Extension>;

/// Evaluator bound to one model. Caches survive across calls on the same
/// checker, so repeated queries on a model should share one instance.
pub struct Checker<'m> {
    model: &'m Cgm,
    /// Keeps every cached formula alive so pointer keys stay unique.
    pins: HashMap<usize, (Formula, Rc<Vec<String>>)>,
    cache: HashMap<(usize, Vec<Extension>), Extension>,
    blocks: HashMap<(usize, AgentMask), Rc<BlockTable>>,
    iterations: usize,
}

struct BlockTable {
    block_of: Vec<usize>,
    outcomes: Vec<Vec<usize>>,
}

impl<'m> Checker<'m> {
    pub fn new(model: &'m Cgm) -> Self {
        Checker { model, pins: HashMap::new(), cache: HashMap::new(), blocks: HashMap::new(), iterations: 0 }
    }

    pub fn model(&self) -> &'m Cgm {
        self.model
    }

    /// Total number of fixpoint rounds performed so far.
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Extension of a formula in any dialect (translated first).
    pub fn extension(&mut self, f: &Formula) -> Result<Extension> {
        let t = to_mu(f)?;
        self.eval(&t, &Environment::new())
    }

    pub fn holds_at(&mut self, s: usize, f: &Formula) -> Result<bool> {
        Ok(self.extension(f)?.contains(s))
    }

    /// Evaluates a formula whose goal assignments are all nexttime.
    pub fn eval(&mut self, f: &Formula, env: &Environment) -> Result<Extension> {
        let free = self.free_vars(f);
        let mut key_env = Vec::with_capacity(free.len());
        for z in free.iter() {
            match env.get(z) {
                Some(e) => key_env.push(e.clone()),
                None => return Err(Error::UnboundVariable(z.clone())),
            }
        }
        let key = (Arc::as_ptr(f) as usize, key_env);
        if let Some(e) = self.cache.get(&key) {
            return Ok(e.clone());
        }
        let n = self.model.num_states();
        let r = match &**f {
            StateFormula::True => Extension::full(n),
            StateFormula::False => Extension::empty(n),
            StateFormula::Prop(p) => Extension::from_states(n, (0..n).filter(|&s| self.model.holds(p, s))),
            StateFormula::Var(z) => env[z].clone(),
            StateFormula::Not(a) => self.eval(a, env)?.complement(),
            StateFormula::And(a, b) => {
                let x = self.eval(a, env)?;
                x.intersection(&self.eval(b, env)?)
            }
            StateFormula::Or(a, b) => {
                let x = self.eval(a, env)?;
                x.union(&self.eval(b, env)?)
            }
            StateFormula::Implies(a, b) => {
                let x = self.eval(a, env)?.complement();
                x.union(&self.eval(b, env)?)
            }
            StateFormula::Mu(z, body) => self.fixpoint(z, body, env, Extension::empty(n))?,
            StateFormula::Nu(z, body) => self.fixpoint(z, body, env, Extension::full(n))?,
            StateFormula::Brak(ga) => self.one_step(ga, env)?,
        };
        self.cache.insert(key, r.clone());
        Ok(r)
    }

    fn fixpoint(&mut self, z: &str, body: &Formula, env: &Environment, start: Extension) -> Result<Extension> {
        let mut env = env.clone();
        let mut cur = start;
        loop {
            self.iterations += 1;
            env.insert(z.to_string(), cur.clone());
            let next = self.eval(body, &env)?;
            if next == cur {
                return Ok(cur);
            }
            cur = next;
        }
    }

    fn one_step(&mut self, ga: &GoalAssignment, env: &Environment) -> Result<Extension> {
        let m = self.model;
        let mut goals: Vec<(AgentMask, Extension)> = Vec::new();
        for (c, g) in ga.iter() {
            let mut target = Extension::full(m.num_states());
            for part in g.conjuncts() {
                match part {
                    PathFormula::Next(b) => target = target.intersection(&self.eval(b, env)?),
                    _ => return Err(Error::NotNexttime(ga.to_string())),
                }
            }
            goals.push((m.mask(c)?, target));
        }
        let mut out = Extension::empty(m.num_states());
        for s in 0..m.num_states() {
            if self.one_step_at(s, &goals) {
                out.insert(s);
            }
        }
        Ok(out)
    }

    /// Whether some profile at `s` forces every goal for its coalition.
    pub(crate) fn one_step_at(&mut self, s: usize, goals: &[(AgentMask, Extension)]) -> bool {
        let mut tables = Vec::with_capacity(goals.len());
        for (mask, target) in goals {
            let t = self.block_table(s, *mask);
            let good: Vec<bool> = t.outcomes.iter().map(|o| o.iter().all(|&u| target.contains(u))).collect();
            if !good.iter().any(|&g| g) {
                return false;
            }
            tables.push((t, good));
        }
        (0..self.model.num_profiles(s)).any(|p| tables.iter().all(|(t, good)| good[t.block_of[p]]))
    }

    fn block_table(&mut self, s: usize, mask: AgentMask) -> Rc<BlockTable> {
        let m = self.model;
        self.blocks
            .entry((s, mask))
            .or_insert_with(|| {
                let b = m.blocks(s, mask);
                Rc::new(BlockTable { block_of: b.block_of, outcomes: b.outcomes })
            })
            .clone()
    }

    /// Free variables, memoized per node so shared subformulas are visited once.
    fn free_vars(&mut self, f: &Formula) -> Rc<Vec<String>> {
        let ptr = Arc::as_ptr(f) as usize;
        if let Some((_, fv)) = self.pins.get(&ptr) {
            return fv.clone();
        }
        let mut set: BTreeSet<String> = BTreeSet::new();
        match &**f {
            StateFormula::True | StateFormula::False | StateFormula::Prop(_) => {}
            StateFormula::Var(z) => {
                set.insert(z.clone());
            }
            StateFormula::Not(a) => set.extend(self.free_vars(a).iter().cloned()),
            StateFormula::And(a, b) | StateFormula::Or(a, b) | StateFormula::Implies(a, b) => {
                set.extend(self.free_vars(a).iter().cloned());
                set.extend(self.free_vars(b).iter().cloned());
            }
            StateFormula::Mu(z, b) | StateFormula::Nu(z, b) => {
                set.extend(self.free_vars(b).iter().filter(|v| *v != z).cloned());
            }
            StateFormula::Brak(ga) => {
                for (_, g) in ga.iter() {
                    for x in g.state_operands() {
                        set.extend(self.free_vars(x).iter().cloned());
                    }
                }
            }
        }
        let fv = Rc::new(set.into_iter().collect::<Vec<_>>());
        self.pins.insert(ptr, (f.clone(), fv.clone()));
        fv
    }
}

/// Evaluates a closed or open formula; goal assignments must be nexttime.
pub fn eval(m: &Cgm, f: &Formula, env: &Environment) -> Result<Extension> {
    Checker::new(m).eval(f, env)
}

/// Extension of a formula of any dialect.
pub fn extension(m: &Cgm, f: &Formula) -> Result<Extension> {
    Checker::new(m).extension(f)
}

/// `M, s ⊨ φ` under the play-based semantics.
pub fn check(m: &Cgm, s: usize, f: &Formula) -> Result<bool> {
    Ok(extension(m, f)?.contains(s))
}

/// Parses and checks in one go.
pub fn check_str(m: &Cgm, state: &str, text: &str, dialect: Dialect) -> Result<bool> {
    let f = parse_state_formula(text, dialect)?;
    check(m, m.state(state)?, &f)
}

/// Result of a check with the number of fixpoint rounds used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub holds: bool,
    pub iterations: usize,
}

pub fn check_report(m: &Cgm, s: usize, f: &Formula) -> Result<CheckReport> {
    let mut c = Checker::new(m);
    let holds = c.holds_at(s, f)?;
    Ok(CheckReport { holds, iterations: c.iterations() })
}

pub fn valid_on(m: &Cgm, f: &Formula) -> Result<bool> {
    Ok(extension(m, f)?.is_full())
}

/// A model and state falsifying a formula.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub model: Cgm,
    pub state: usize,
    pub formula: Formula,
}

/// Returns the first sampled (model, formula) pair where the formula fails
/// somewhere, reporting the least failing state.
pub fn falsify<I>(samples: I) -> Result<Option<Counterexample>>
where
    I: IntoIterator<Item = (Cgm, Formula)>,
{
    for (model, formula) in samples {
        let ext = extension(&model, &formula)?;
        if let Some(state) = ext.complement().iter().next() {
            return Ok(Some(Counterexample { model, state, formula }));
        }
    }
    Ok(None)
}
