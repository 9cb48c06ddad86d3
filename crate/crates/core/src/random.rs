//! Seeded generators for models, formulas and axiom substitutions used by
//! the property suites and the falsification harness.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore};
pub use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

use crate::cgm::Cgm;
use crate::syntax::*;
use crate::transform::axioms::{Scheme, Substitution};

/// Default seed of every randomized harness.
pub const DEFAULT_SEED: u64 = 20240601;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug)]
pub struct ModelConfig {
    pub max_states: usize,
    pub agents: Vec<String>,
    pub max_actions: usize,
    pub props: Vec<String>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            max_states: 6,
            agents: names(&["a", "b"]),
            max_actions: 2,
            props: names(&["p", "q", "r"]),
        }
    }
}

pub fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// A model with 1..=max_states states, random labels, action counts and
/// transitions. States are `s0`, `s1`, ...; actions `x0`, `x1`, ...
pub fn random_model(rng: &mut impl Rng, cfg: &ModelConfig) -> Cgm {
    let n = rng.gen_range(1..=cfg.max_states);
    let states: Vec<(String, BTreeSet<String>)> = (0..n)
        .map(|i| (format!("s{i}"), cfg.props.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect()))
        .collect();
    let mut actions = Vec::with_capacity(n);
    let mut outcome = Vec::with_capacity(n);
    for _ in 0..n {
        let acts: Vec<Vec<String>> = cfg
            .agents
            .iter()
            .map(|_| (0..rng.gen_range(1..=cfg.max_actions)).map(|i| format!("x{i}")).collect())
            .collect();
        let profiles: usize = acts.iter().map(Vec::len).product();
        outcome.push((0..profiles).map(|_| rng.gen_range(0..n)).collect());
        actions.push(acts);
    }
    Cgm::from_parts(cfg.agents.clone(), states, actions, outcome).expect("generated model is well formed")
}

/// Random models with a random agent count between 1 and `agents.len()`.
pub fn random_model_any_agents(rng: &mut impl Rng, cfg: &ModelConfig) -> Cgm {
    let k = rng.gen_range(1..=cfg.agents.len());
    random_model(rng, &ModelConfig { agents: cfg.agents[..k].to_vec(), ..cfg.clone() })
}

#[derive(Clone, Debug)]
pub struct FormulaConfig {
    pub agents: Vec<String>,
    pub props: Vec<String>,
    /// Nesting depth of state formulas.
    pub depth: usize,
    pub max_coalitions: usize,
    /// Allow conjunctions of path goals.
    pub plus: bool,
}

impl FormulaConfig {
    pub fn for_model(m: &Cgm, depth: usize) -> Self {
        FormulaConfig {
            agents: m.agents().to_vec(),
            props: ["p", "q", "r"].into_iter().map(String::from).chain(m.propositions()).collect::<BTreeSet<_>>().into_iter().collect(),
            depth,
            max_coalitions: 3,
            plus: false,
        }
    }
}

pub fn random_coalition<R: RngCore + ?Sized>(rng: &mut R, agents: &[String]) -> Coalition {
    Coalition::new(agents.iter().filter(|_| rng.gen_bool(0.5)).cloned())
}

pub fn random_formula<R: RngCore>(rng: &mut R, cfg: &FormulaConfig) -> Formula {
    formula_at(rng, cfg, cfg.depth)
}

fn formula_at(rng: &mut dyn RngCore, cfg: &FormulaConfig, depth: usize) -> Formula {
    if depth == 0 {
        return match rng.gen_range(0..10) {
            0 => tt(),
            1 => ff(),
            _ => prop(cfg.props.choose(rng).expect("at least one proposition").clone()),
        };
    }
    match rng.gen_range(0..8) {
        0 => not(formula_at(rng, cfg, depth - 1)),
        1 => and(formula_at(rng, cfg, depth - 1), formula_at(rng, cfg, depth - 1)),
        2 => or(formula_at(rng, cfg, depth - 1), formula_at(rng, cfg, depth - 1)),
        3 => implies(formula_at(rng, cfg, depth - 1), formula_at(rng, cfg, depth - 1)),
        4 => formula_at(rng, cfg, 0),
        _ => brak(goal_assignment_at(rng, cfg, depth - 1)),
    }
}

/// A goal assignment with up to `max_coalitions` entries whose bodies have
/// depth at most `cfg.depth`.
pub fn random_goal_assignment<R: RngCore>(rng: &mut R, cfg: &FormulaConfig) -> GoalAssignment {
    goal_assignment_at(rng, cfg, cfg.depth)
}

fn goal_assignment_at(rng: &mut dyn RngCore, cfg: &FormulaConfig, depth: usize) -> GoalAssignment {
    let k = rng.gen_range(1..=cfg.max_coalitions.max(1));
    let entries: Vec<(Coalition, PathFormula)> =
        (0..k).map(|_| (random_coalition(rng, &cfg.agents), path_at(rng, cfg, depth))).collect();
    GoalAssignment::from_entries(entries)
}

pub fn random_path_formula<R: RngCore>(rng: &mut R, cfg: &FormulaConfig) -> PathFormula {
    path_at(rng, cfg, cfg.depth)
}

fn path_at(rng: &mut dyn RngCore, cfg: &FormulaConfig, depth: usize) -> PathFormula {
    let simple = |rng: &mut dyn RngCore| -> PathFormula {
        match rng.gen_range(0..3) {
            0 => PathFormula::next(formula_at(rng, cfg, depth)),
            1 => PathFormula::until(formula_at(rng, cfg, depth), formula_at(rng, cfg, depth)),
            _ => PathFormula::globally(formula_at(rng, cfg, depth)),
        }
    };
    if cfg.plus && rng.gen_bool(0.3) {
        PathFormula::and(simple(rng), simple(rng))
    } else {
        simple(rng)
    }
}

/// A nexttime goal assignment: every goal is `X φ`.
pub fn random_nexttime_ga<R: RngCore>(rng: &mut R, cfg: &FormulaConfig) -> GoalAssignment {
    let k = rng.gen_range(1..=cfg.max_coalitions.max(1));
    GoalAssignment::from_entries(
        (0..k)
            .map(|_| (random_coalition(rng, &cfg.agents), PathFormula::next(formula_at(rng, cfg, cfg.depth))))
            .collect::<Vec<_>>(),
    )
}

/// Values for the metavariables of `scheme`, respecting its side conditions.
pub fn random_substitution<R: RngCore>(rng: &mut R, scheme: Scheme, cfg: &FormulaConfig) -> Substitution {
    let agt = Coalition::new(cfg.agents.iter().cloned());
    let mut f = || formula_at(rng, cfg, cfg.depth);
    let (phi, psi, alpha, beta, chi) = (f(), f(), f(), f(), f());
    let mut s = Substitution {
        agents: agt.clone(),
        phi: Some(phi),
        psi: Some(psi),
        alpha: Some(alpha),
        beta: Some(beta),
        chi: Some(chi),
        ..Default::default()
    };
    let c = random_coalition(rng, &cfg.agents);
    match scheme {
        Scheme::Triv | Scheme::Safe | Scheme::AgtMaximality => {}
        Scheme::Merge => {
            // Disjoint non-repeated coalitions: a random partition of a
            // random subset, plus possibly the empty coalition.
            let mut blocks: Vec<Coalition> = Vec::new();
            for a in &cfg.agents {
                match rng.gen_range(0..3) {
                    0 => {}
                    1 if !blocks.is_empty() => {
                        let i = rng.gen_range(0..blocks.len());
                        blocks[i].insert(a.clone());
                    }
                    _ => blocks.push(Coalition::new([a.clone()])),
                }
            }
            if rng.gen_bool(0.3) {
                blocks.push(Coalition::empty());
            }
            s.parts = blocks.into_iter().map(|c| (c, path_at(rng, cfg, cfg.depth))).collect();
        }
        Scheme::GrandCoalition => {
            let ga = goal_assignment_at(rng, cfg, cfg.depth);
            s.gamma = Some(if rng.gen_bool(0.5) {
                ga.update(agt, PathFormula::next(formula_at(rng, cfg, cfg.depth)))
            } else {
                ga.remove(&agt)
            });
        }
        Scheme::Case => {
            let ga = goal_assignment_at(rng, cfg, cfg.depth);
            s.gamma = Some(ga.update(c.clone(), PathFormula::next(formula_at(rng, cfg, cfg.depth))));
            s.c = Some(c);
        }
        Scheme::Con => {
            let c2 = Coalition::new(c.members().filter(|_| rng.gen_bool(0.5)).map(String::from));
            let ga = goal_assignment_at(rng, cfg, cfg.depth)
                .update(c.clone(), PathFormula::next(formula_at(rng, cfg, cfg.depth)))
                .update(c2.clone(), PathFormula::next(formula_at(rng, cfg, cfg.depth)));
            s.gamma = Some(ga);
            s.c = Some(c);
            s.c2 = Some(c2);
        }
        Scheme::Fix => {
            s.gamma = Some(goal_assignment_at(rng, cfg, cfg.depth));
        }
        Scheme::FpG | Scheme::FpU => {
            s.c = Some(c);
        }
        Scheme::Superadditivity => {
            let c2 = Coalition::new(cfg.agents.iter().filter(|a| !c.contains(a) && rng.gen_bool(0.5)).cloned());
            s.c = Some(c);
            s.c2 = Some(c2);
        }
    }
    s
}
