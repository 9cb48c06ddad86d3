use std::collections::BTreeSet;

use rand::Rng;

use super::game_form::{construct, validate_game_form, Compiled, GameForm};
use super::{Conditions, Mask, OneStepAssignment, OneStepSequent, SatConstraint};
use crate::error::Result;

/// Bounds of the exhaustive game-form search.
#[derive(Clone, Copy, Debug)]
pub struct BruteConfig {
    pub max_actions: usize,
    /// Cap on the number of profiles of an enumerated game form.
    pub max_profiles: usize,
}

impl Default for BruteConfig {
    fn default() -> Self {
        BruteConfig { max_actions: 3, max_profiles: 4 }
    }
}

/// Enumerates every game form within the bounds whose outcomes are subsets
/// of members of `s`, returning the first one satisfying all clauses.
/// A `None` answer is only a refutation up to the bounds.
pub fn brute_force_satisfiable(seq: &OneStepSequent, s: &SatConstraint, cfg: &BruteConfig) -> Result<Option<GameForm>> {
    let vars: Vec<String> = s.vars.iter().cloned().collect();
    let comp = Compiled::new(seq, s, &vars)?;
    let n = seq.agents.len();
    // Subsets of constraint members: the only outcomes clause 3 allows.
    let family: Vec<u32> = s
        .family
        .iter()
        .map(|z| z.iter().fold(0u32, |b, v| b | 1 << vars.iter().position(|x| x == v).expect("declared")))
        .collect();
    let mut values: Vec<u32> = (0..1u32 << vars.len()).filter(|&o| family.iter().any(|&z| o & !z == 0)).collect();
    values.sort_by_key(|o| std::cmp::Reverse(o.count_ones()));
    if values.is_empty() || n == 0 {
        return Ok(None);
    }
    let mut counts = vec![1usize; n];
    loop {
        let np: usize = counts.iter().product();
        if np <= cfg.max_profiles {
            let mut digits = vec![0usize; np];
            loop {
                let outcomes: Vec<u32> = digits.iter().map(|&d| values[d]).collect();
                if comp.check(&counts, &outcomes).is_none() {
                    let actions = counts.iter().map(|&k| (0..k).map(|x| x.to_string()).collect()).collect();
                    return Ok(Some(GameForm { agents: seq.agents.clone(), vars, actions, outcomes }));
                }
                if !increment(&mut digits, values.len()) {
                    break;
                }
            }
        }
        if !increment_counts(&mut counts, cfg.max_actions) {
            return Ok(None);
        }
    }
}

fn increment(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn increment_counts(counts: &mut [usize], max: usize) -> bool {
    for c in counts.iter_mut().rev() {
        *c += 1;
        if *c <= max {
            return true;
        }
        *c = 1;
    }
    false
}

/// Outcome of comparing the satisfiability test with explicit game forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CrossCheck {
    /// Satisfiable, and the constructed witness passes validation.
    Sat,
    /// Unsatisfiable, and no bounded game form satisfies the clauses.
    Unsat,
    /// Satisfiable, but the constructed witness fails validation.
    WitnessFailed(String),
    /// Unsatisfiable, yet a bounded game form satisfies every clause.
    BruteFound(GameForm),
}

impl CrossCheck {
    pub fn agrees(&self) -> bool {
        matches!(self, CrossCheck::Sat | CrossCheck::Unsat)
    }
}

pub fn cross_check(seq: &OneStepSequent, s: &SatConstraint, mode: Conditions, cfg: &BruteConfig) -> Result<CrossCheck> {
    if seq.satisfiable_with(s, mode)?.is_sat() {
        let form = match construct(seq, s) {
            Ok(f) => f,
            Err(e) => return Ok(CrossCheck::WitnessFailed(e.to_string())),
        };
        Ok(match validate_game_form(&form, seq, s)? {
            Ok(()) => CrossCheck::Sat,
            Err(v) => CrossCheck::WitnessFailed(v.to_string()),
        })
    } else {
        Ok(match brute_force_satisfiable(seq, s, cfg)? {
            None => CrossCheck::Unsat,
            Some(f) => CrossCheck::BruteFound(f),
        })
    }
}

/// A seeded random instance: |Agt| ≤ 2, |V| ≤ 3, |Γ| ≤ 3, one or two
/// entries per assignment, coalitions drawn from all of P(Agt).
pub fn random_instance(rng: &mut impl Rng) -> (OneStepSequent, SatConstraint) {
    const NAMES: [&str; 3] = ["p", "q", "r"];
    let n = rng.gen_range(1..=2usize);
    let agents: Vec<String> = ["a", "b"][..n].iter().map(|s| s.to_string()).collect();
    let vars: Vec<String> = NAMES[..rng.gen_range(1..=3usize)].iter().map(|s| s.to_string()).collect();
    let mut seq = OneStepSequent::new(agents);
    for _ in 0..rng.gen_range(0..=3usize) {
        let mut entries: Vec<(Mask, String)> = Vec::new();
        for _ in 0..rng.gen_range(1..=2usize) {
            let c = rng.gen_range(0..1u64 << n);
            if entries.iter().all(|(m, _)| *m != c) {
                entries.push((c, vars[rng.gen_range(0..vars.len())].clone()));
            }
        }
        entries.sort();
        let a = OneStepAssignment { entries };
        if rng.gen_bool(0.5) {
            if !seq.positives.contains(&a) {
                seq.positives.push(a);
            }
        } else if !seq.negatives.contains(&a) {
            seq.negatives.push(a);
        }
    }
    let subsets: Vec<BTreeSet<String>> = (0..1u32 << vars.len())
        .map(|b| vars.iter().enumerate().filter(|(i, _)| b >> i & 1 == 1).map(|(_, v)| v.clone()).collect())
        .collect();
    let family: Vec<BTreeSet<String>> = loop {
        let f: Vec<BTreeSet<String>> = subsets.iter().filter(|_| rng.gen_bool(0.35)).cloned().collect();
        if !f.is_empty() {
            break f;
        }
    };
    let s = SatConstraint::new(vars, family).expect("subsets of the variables");
    (seq, s)
}

/// Every instance with `n_agents` agents, variables among the first
/// `n_vars` of p, q, r, at most `max_gamma` distinct literals (any partial
/// map from coalitions to variables, either polarity) and any non-empty
/// constraint family.
pub fn exhaustive_grid(n_agents: usize, n_vars: usize, max_gamma: usize) -> Vec<(OneStepSequent, SatConstraint)> {
    const NAMES: [&str; 3] = ["p", "q", "r"];
    let agents: Vec<String> = ["a", "b"][..n_agents].iter().map(|s| s.to_string()).collect();
    let vars: Vec<String> = NAMES[..n_vars].iter().map(|s| s.to_string()).collect();
    let coalitions = 1usize << n_agents;
    let radix = n_vars + 1;
    let mut maps = Vec::new();
    for code in 0..radix.pow(coalitions as u32) {
        let mut rest = code;
        let mut entries = Vec::new();
        for c in 0..coalitions {
            let v = rest % radix;
            rest /= radix;
            if v > 0 {
                entries.push((c as Mask, vars[v - 1].clone()));
            }
        }
        maps.push(OneStepAssignment { entries });
    }
    let literals: Vec<(bool, &OneStepAssignment)> = maps.iter().flat_map(|a| [(true, a), (false, a)]).collect();
    let mut sequents = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn go<'a>(
        start: usize,
        max: usize,
        lits: &[(bool, &'a OneStepAssignment)],
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        out.push(chosen.clone());
        if chosen.len() == max {
            return;
        }
        for i in start..lits.len() {
            chosen.push(i);
            go(i + 1, max, lits, chosen, out);
            chosen.pop();
        }
    }
    go(0, max_gamma, &literals, &mut chosen, &mut sequents);
    let subsets: Vec<BTreeSet<String>> = (0..1u32 << n_vars)
        .map(|b| vars.iter().enumerate().filter(|(i, _)| b >> i & 1 == 1).map(|(_, v)| v.clone()).collect())
        .collect();
    let families: Vec<SatConstraint> = (1u64..1 << subsets.len())
        .map(|bits| {
            let fam = subsets.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).map(|(_, z)| z.clone());
            SatConstraint::new(vars.iter().cloned(), fam).expect("subsets of the variables")
        })
        .collect();
    let mut out = Vec::new();
    for pick in &sequents {
        let mut seq = OneStepSequent::new(agents.clone());
        for &i in pick {
            let (positive, a) = literals[i];
            if positive {
                seq.positives.push(a.clone());
            } else {
                seq.negatives.push(a.clone());
            }
        }
        for s in &families {
            out.push((seq.clone(), s.clone()));
        }
    }
    out
}
