use std::collections::{BTreeSet, HashMap};

use super::memory::{reachable_memories, FiniteStrategyProfile, Memory, MemoryMode};
use super::verify::{goal_labels, verify_witness};
use crate::cgm::{AgentMask, Cgm};
use crate::checker::Extension;
use crate::error::{Error, Result};
use crate::syntax::*;

pub const DEFAULT_SEARCH_LIMIT: usize = 2_000_000;
pub const DEFAULT_NODE_LIMIT: usize = 200_000;

#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    /// Maximum number of table assignments tried.
    pub limit: usize,
    /// Maximum number of memory nodes in the product.
    pub max_nodes: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { limit: DEFAULT_SEARCH_LIMIT, max_nodes: DEFAULT_NODE_LIMIT }
    }
}

#[derive(Clone, Debug)]
pub struct OracleOutcome {
    pub witness: Option<FiniteStrategyProfile>,
    /// True when the absence of a witness is a genuine refutation for the
    /// memory class: either positional, or no decision is ever taken with
    /// a truncated history.
    pub exact: bool,
    pub steps: usize,
    pub product_nodes: usize,
    /// log10 of the number of candidate tables on the full product.
    pub log10_candidates: f64,
}

/// Searches for a finite-memory witness of `γ` at `s`.
pub fn find_witness(m: &Cgm, s: usize, ga: &GoalAssignment, mode: MemoryMode) -> Result<Option<FiniteStrategyProfile>> {
    Ok(search_witness(m, s, ga, mode, &OracleConfig::default())?.witness)
}

pub fn search_witness(
    m: &Cgm,
    s: usize,
    ga: &GoalAssignment,
    mode: MemoryMode,
    cfg: &OracleConfig,
) -> Result<OracleOutcome> {
    let mut search = Search::new(m, s, ga, mode, cfg)?;
    let log10_candidates = search.cands.iter().map(|c| (c.len() as f64).log10()).sum();
    let witness = search.run()?;
    let exact = witness.is_none() && (mode.depth() == 1 || !search.late_decision(s));
    Ok(OracleOutcome { witness, exact, steps: search.steps, product_nodes: search.mems.len(), log10_candidates })
}

enum Status {
    Fail,
    Need(usize),
    Done,
}

struct Search<'a> {
    m: &'a Cgm,
    s: usize,
    ga: &'a GoalAssignment,
    mode: MemoryMode,
    limit: usize,
    mems: Vec<Memory>,
    /// Successor node per profile.
    succ: Vec<Vec<usize>>,
    /// Candidate profiles per node: agents outside every supported
    /// coalition are pinned to their first action.
    cands: Vec<Vec<usize>>,
    assign: Vec<Option<usize>>,
    goals: Vec<(AgentMask, Vec<PathFormula>)>,
    labels: HashMap<Formula, Extension>,
    blocks: HashMap<(usize, AgentMask), Vec<usize>>,
    steps: usize,
}

impl<'a> Search<'a> {
    fn new(m: &'a Cgm, s: usize, ga: &'a GoalAssignment, mode: MemoryMode, cfg: &OracleConfig) -> Result<Self> {
        let mems = reachable_memories(m, s, mode, cfg.max_nodes)?;
        let index: HashMap<&Memory, usize> = mems.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let succ = mems
            .iter()
            .map(|mem| {
                let st = mem.last();
                (0..m.num_profiles(st)).map(|p| index[&mode.step(mem, p, m.succ(st, p))]).collect()
            })
            .collect();
        let relevant = m.mask(&ga.support_union())?;
        let cands = mems
            .iter()
            .map(|mem| {
                let st = mem.last();
                (0..m.num_profiles(st))
                    .filter(|&p| m.profile(st, p).iter().enumerate().all(|(a, &x)| relevant >> a & 1 == 1 || x == 0))
                    .collect()
            })
            .collect();
        let mut goals = Vec::new();
        for (c, g) in ga.iter() {
            goals.push((m.mask(c)?, g.conjuncts().into_iter().cloned().collect()));
        }
        Ok(Search {
            m,
            s,
            ga,
            mode,
            limit: cfg.limit,
            assign: vec![None; mems.len()],
            mems,
            succ,
            cands,
            goals,
            labels: goal_labels(m, ga)?,
            blocks: HashMap::new(),
            steps: 0,
        })
    }

    fn holds(&self, f: &Formula, n: usize) -> bool {
        self.labels[f].contains(self.mems[n].last())
    }

    /// Successors of an assigned node when `mask` sticks to the assignment.
    fn c_succ(&mut self, n: usize, mask: AgentMask) -> Vec<usize> {
        let st = self.mems[n].last();
        let m = self.m;
        let block_of = self.blocks.entry((st, mask)).or_insert_with(|| m.blocks(st, mask).block_of);
        let b = block_of[self.assign[n].expect("assigned")];
        let mut out: Vec<usize> = Vec::new();
        for (p, &bp) in block_of.iter().enumerate() {
            if bp == b && !out.contains(&self.succ[n][p]) {
                out.push(self.succ[n][p]);
            }
        }
        out
    }

    fn evaluate(&mut self) -> Status {
        let mut need: Option<usize> = None;
        let n = self.mems.len();
        let goals = self.goals.clone();
        for (mask, conjs) in &goals {
            for g in conjs {
                match g {
                    PathFormula::Next(f) => {
                        if self.assign[0].is_none() {
                            need.get_or_insert(0);
                        } else if self.c_succ(0, *mask).into_iter().any(|u| !self.holds(f, u)) {
                            return Status::Fail;
                        }
                    }
                    PathFormula::Globally(f) => {
                        let mut seen = vec![false; n];
                        let mut queue = std::collections::VecDeque::from([0usize]);
                        seen[0] = true;
                        while let Some(v) = queue.pop_front() {
                            if !self.holds(f, v) {
                                return Status::Fail;
                            }
                            if self.assign[v].is_none() {
                                need.get_or_insert(v);
                                continue;
                            }
                            for u in self.c_succ(v, *mask) {
                                if !seen[u] {
                                    seen[u] = true;
                                    queue.push_back(u);
                                }
                            }
                        }
                    }
                    PathFormula::Until(a, b) => {
                        let mut seen = vec![false; n];
                        let mut queue = std::collections::VecDeque::from([0usize]);
                        seen[0] = true;
                        let mut pending: Vec<(usize, Vec<usize>)> = Vec::new();
                        while let Some(v) = queue.pop_front() {
                            if self.holds(b, v) {
                                continue;
                            }
                            if !self.holds(a, v) {
                                return Status::Fail;
                            }
                            if self.assign[v].is_none() {
                                need.get_or_insert(v);
                                continue;
                            }
                            let next = self.c_succ(v, *mask);
                            for &u in &next {
                                if !seen[u] {
                                    seen[u] = true;
                                    queue.push_back(u);
                                }
                            }
                            pending.push((v, next));
                        }
                        if has_cycle(&pending, n) {
                            return Status::Fail;
                        }
                    }
                    PathFormula::And(..) => unreachable!("conjuncts are flattened"),
                }
            }
        }
        match need {
            Some(v) => Status::Need(v),
            None => Status::Done,
        }
    }

    fn assign_next(&mut self, node: usize, idx: usize) -> Result<()> {
        self.steps += 1;
        if self.steps > self.limit {
            return Err(Error::LimitExceeded(format!("oracle search exceeded {} steps", self.limit)));
        }
        self.assign[node] = Some(self.cands[node][idx]);
        Ok(())
    }

    fn run(&mut self) -> Result<Option<FiniteStrategyProfile>> {
        let mut stack: Vec<(usize, usize)> = Vec::new();
        loop {
            let backtrack = match self.evaluate() {
                Status::Fail => true,
                Status::Need(v) => {
                    stack.push((v, 0));
                    self.assign_next(v, 0)?;
                    false
                }
                Status::Done => {
                    let sigma = self.complete();
                    if verify_witness(self.m, self.s, &sigma, self.ga)? {
                        return Ok(Some(sigma));
                    }
                    true
                }
            };
            if backtrack {
                loop {
                    let Some(top) = stack.last_mut() else { return Ok(None) };
                    top.1 += 1;
                    let (v, i) = *top;
                    if i < self.cands[v].len() {
                        self.assign_next(v, i)?;
                        break;
                    }
                    self.assign[v] = None;
                    stack.pop();
                }
            }
        }
    }

    /// Total profile: unassigned nodes take their first candidate.
    fn complete(&self) -> FiniteStrategyProfile {
        let table = self
            .mems
            .iter()
            .enumerate()
            .map(|(n, mem)| {
                let p = self.assign[n].unwrap_or(self.cands[n][0]);
                (mem.clone(), self.m.profile(mem.last(), p))
            })
            .collect();
        FiniteStrategyProfile { mode: self.mode, table }
    }

    /// Whether some state with a real choice is reachable by a history with
    /// more states than the memory holds.
    fn late_decision(&self, s: usize) -> bool {
        let m = self.m;
        let mut frontier: BTreeSet<usize> = BTreeSet::from([s]);
        for _ in 0..self.mode.depth() {
            frontier = frontier.iter().flat_map(|&u| m.successors(u)).collect();
        }
        let mut seen = frontier.clone();
        let mut stack: Vec<usize> = frontier.into_iter().collect();
        while let Some(u) = stack.pop() {
            for v in m.successors(u) {
                if seen.insert(v) {
                    stack.push(v);
                }
            }
        }
        let relevant = m.mask(&self.ga.support_union()).unwrap_or(0);
        seen.into_iter().any(|u| m.num_blocks(u, relevant) > 1)
    }
}

/// Cycle detection in the graph induced on the listed nodes.
fn has_cycle(nodes: &[(usize, Vec<usize>)], n: usize) -> bool {
    let mut inside = vec![false; n];
    for (v, _) in nodes {
        inside[*v] = true;
    }
    let mut indeg = vec![0usize; n];
    for (_, out) in nodes {
        for &u in out {
            if inside[u] {
                indeg[u] += 1;
            }
        }
    }
    let adj: HashMap<usize, &Vec<usize>> = nodes.iter().map(|(v, o)| (*v, o)).collect();
    let mut stack: Vec<usize> = nodes.iter().map(|(v, _)| *v).filter(|&v| indeg[v] == 0).collect();
    let mut removed = 0;
    while let Some(v) = stack.pop() {
        removed += 1;
        for &u in adj[&v].iter() {
            if inside[u] {
                indeg[u] -= 1;
                if indeg[u] == 0 {
                    stack.push(u);
                }
            }
        }
    }
    removed < nodes.len()
}
