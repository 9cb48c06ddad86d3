//! Greatest TLCGA-bisimulation by relation refinement, invariance checks and
//! characteristic (distinguishing) nexttime formulas.

use std::collections::{BTreeSet, HashMap};

use crate::cgm::{AgentMask, Blocks, Cgm};
use crate::checker::{Checker, Environment, Extension};
use crate::error::Result;
use crate::syntax::*;

/// A binary relation on the states of one model.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Relation {
    n: usize,
    bits: Vec<bool>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation { n, bits: vec![false; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = Relation::empty(n);
        for s in 0..n {
            r.insert(s, s);
        }
        r
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.bits[a * self.n + b]
    }

    pub fn insert(&mut self, a: usize, b: usize) {
        self.bits[a * self.n + b] = true;
    }

    pub fn remove(&mut self, a: usize, b: usize) {
        self.bits[a * self.n + b] = false;
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |a| (0..self.n).filter(move |&b| self.contains(a, b)).map(move |b| (a, b)))
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.pairs().all(|(a, b)| other.contains(a, b))
    }

    pub fn is_equivalence(&self) -> bool {
        let n = self.n;
        (0..n).all(|a| self.contains(a, a))
            && self.pairs().all(|(a, b)| self.contains(b, a))
            && self.pairs().all(|(a, b)| (0..n).all(|c| !self.contains(b, c) || self.contains(a, c)))
    }

    /// Equivalence classes, assuming the relation is an equivalence.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for a in 0..self.n {
            if !seen[a] {
                let class: Vec<usize> = (a..self.n).filter(|&b| self.contains(a, b)).collect();
                for &b in &class {
                    seen[b] = true;
                }
                out.push(class);
            }
        }
        out
    }
}

/// Per-state outcome blocks for every coalition, indexed by mask.
struct Local {
    blocks: Vec<Vec<Blocks>>,
}

impl Local {
    fn new(m: &Cgm) -> Self {
        let k = 1u64 << m.num_agents();
        Local { blocks: (0..m.num_states()).map(|s| (0..k).map(|c| m.blocks(s, c as AgentMask)).collect()).collect() }
    }
}

/// For every profile ζ at `from` there is ζ' at `to` such that, for every
/// coalition C, each outcome of ζ'|C is matched by some outcome of ζ|C:
/// `rel(u, u')` with u from `from`'s block and u' from `to`'s block.
fn simulates<F: Fn(usize, usize) -> bool>(m: &Cgm, local: &Local, from: usize, to: usize, rel: &F) -> bool {
    let coalitions = local.blocks[from].len();
    let mut covered: HashMap<(usize, usize, usize), bool> = HashMap::new();
    let mut cover = |c: usize, b1: usize, b2: usize| -> bool {
        *covered.entry((c, b1, b2)).or_insert_with(|| {
            let o1 = &local.blocks[from][c].outcomes[b1];
            let o2 = &local.blocks[to][c].outcomes[b2];
            o2.iter().all(|&u2| o1.iter().any(|&u1| rel(u1, u2)))
        })
    };
    (0..m.num_profiles(from)).all(|z1| {
        (0..m.num_profiles(to)).any(|z2| {
            (0..coalitions).all(|c| cover(c, local.blocks[from][c].block_of[z1], local.blocks[to][c].block_of[z2]))
        })
    })
}

fn forth_back(m: &Cgm, local: &Local, r: &Relation, s1: usize, s2: usize) -> bool {
    simulates(m, local, s1, s2, &|u1, u2| r.contains(u1, u2)) && simulates(m, local, s2, s1, &|u2, u1| r.contains(u1, u2))
}

fn atom_equivalence(m: &Cgm) -> Relation {
    let n = m.num_states();
    let mut r = Relation::empty(n);
    for a in 0..n {
        for b in 0..n {
            if m.labels(a) == m.labels(b) {
                r.insert(a, b);
            }
        }
    }
    r
}

/// The greatest TLCGA-bisimulation in `m`.
pub fn greatest_bisimulation(m: &Cgm) -> Relation {
    greatest_bisimulation_jobs(m, 1)
}

/// Same as [`greatest_bisimulation`], checking pairs of a round on up to
/// `jobs` threads. The result does not depend on `jobs`.
pub fn greatest_bisimulation_jobs(m: &Cgm, jobs: usize) -> Relation {
    let local = Local::new(m);
    let n = m.num_states();
    let mut r = atom_equivalence(m);
    loop {
        // The relation stays symmetric, so each unordered pair is checked once.
        let candidates: Vec<(usize, usize)> = r.pairs().filter(|&(a, b)| a < b).collect();
        let keep = if jobs <= 1 || candidates.len() < 64 {
            candidates.iter().map(|&(a, b)| forth_back(m, &local, &r, a, b)).collect::<Vec<_>>()
        } else {
            let chunk = candidates.len().div_ceil(jobs);
            std::thread::scope(|scope| {
                let handles: Vec<_> = candidates
                    .chunks(chunk)
                    .map(|part| {
                        let (local, r) = (&local, &r);
                        scope.spawn(move || part.iter().map(|&(a, b)| forth_back(m, local, r, a, b)).collect::<Vec<_>>())
                    })
                    .collect();
                handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
            })
        };
        let mut next = r.clone();
        for (&(a, b), ok) in candidates.iter().zip(keep) {
            if !ok {
                next.remove(a, b);
                next.remove(b, a);
            }
        }
        if next == r {
            debug_assert!((0..n).all(|s| r.contains(s, s)));
            return r;
        }
        r = next;
    }
}

/// Checks the defining clauses of a bisimulation for every pair of `r`.
pub fn is_bisimulation(m: &Cgm, r: &Relation) -> bool {
    let local = Local::new(m);
    r.pairs().all(|(a, b)| m.labels(a) == m.labels(b) && forth_back(m, &local, r, a, b))
}

pub fn are_bisimilar(m1: &Cgm, s1: usize, m2: &Cgm, s2: usize) -> Result<bool> {
    let (u, off) = m1.disjoint_union(m2)?;
    Ok(greatest_bisimulation(&u).contains(s1, s2 + off))
}

/// A related pair that disagrees on a formula.
#[derive(Clone, Debug)]
pub struct Disagreement {
    pub s1: usize,
    pub s2: usize,
    pub formula: Formula,
}

/// First pair of `r` (in canonical order) separated by a formula of `corpus`.
pub fn hm_agreement(m: &Cgm, r: &Relation, corpus: &[Formula]) -> Result<Option<Disagreement>> {
    let mut c = Checker::new(m);
    let exts: Vec<Extension> = corpus.iter().map(|f| c.extension(f)).collect::<Result<_>>()?;
    for (s1, s2) in r.pairs() {
        for (f, e) in corpus.iter().zip(&exts) {
            if e.contains(s1) != e.contains(s2) {
                return Ok(Some(Disagreement { s1, s2, formula: f.clone() }));
            }
        }
    }
    Ok(None)
}

/// Nexttime formulas separating the classes of formula-equivalence.
///
/// Starting from the atoms, every round adds, for each state v and profile
/// ζ at v, the goal assignment mapping each coalition C to
/// `X char[Out[v, ζ|C]]`, where `char[Z]` is the disjunction of the current
/// characteristic formulas of the classes meeting Z. Rounds stop when the
/// induced partition is stable.
#[derive(Clone, Debug)]
pub struct Characteristic {
    /// Formulas with pairwise distinct, non-trivial extensions.
    pub formulas: Vec<Formula>,
    pub extensions: Vec<Extension>,
    /// Class index of every state.
    pub class_of: Vec<usize>,
}

impl Characteristic {
    pub fn separated(&self, s1: usize, s2: usize) -> bool {
        self.class_of[s1] != self.class_of[s2]
    }

    /// The first generated formula true at exactly one of the two states.
    pub fn distinguishing(&self, s1: usize, s2: usize) -> Option<&Formula> {
        self.formulas.iter().zip(&self.extensions).find(|(_, e)| e.contains(s1) != e.contains(s2)).map(|(f, _)| f)
    }
}

pub fn characteristic_formulas(m: &Cgm) -> Result<Characteristic> {
    let n = m.num_states();
    let mut checker = Checker::new(m);
    let env = Environment::new();
    let mut formulas: Vec<Formula> = Vec::new();
    let mut extensions: Vec<Extension> = Vec::new();
    let add = |f: Formula, checker: &mut Checker, formulas: &mut Vec<Formula>, extensions: &mut Vec<Extension>| {
        let e = checker.eval(&f, &env)?;
        if !e.is_empty() && !e.is_full() && !extensions.contains(&e) {
            formulas.push(f);
            extensions.push(e);
        }
        Ok::<(), crate::Error>(())
    };
    for p in m.propositions() {
        add(prop(p), &mut checker, &mut formulas, &mut extensions)?;
    }
    let all_masks: Vec<AgentMask> = (0..1u64 << m.num_agents()).collect();
    let coalitions: Vec<Coalition> = all_masks.iter().map(|&c| m.coalition_of(c)).collect();
    let local = Local::new(m);
    let mut class_of = partition(n, &extensions);
    loop {
        let k = class_of.iter().max().map_or(0, |c| c + 1);
        let chars: Vec<Formula> = (0..k)
            .map(|cls| {
                let rep = class_of.iter().position(|&c| c == cls).expect("non-empty class");
                conj(formulas.iter().zip(&extensions).map(|(f, e)| if e.contains(rep) { f.clone() } else { not(f.clone()) }))
            })
            .collect();
        let mut new_formulas = Vec::new();
        for v in 0..n {
            for z in 0..m.num_profiles(v) {
                let mut entries = Vec::new();
                for (ci, c) in coalitions.iter().enumerate() {
                    let b = &local.blocks[v][ci];
                    let classes: BTreeSet<usize> = b.outcomes[b.block_of[z]].iter().map(|&u| class_of[u]).collect();
                    let body = disj(classes.into_iter().map(|cls| chars[cls].clone()));
                    entries.push((c.clone(), PathFormula::next(body)));
                }
                new_formulas.push(brak(GoalAssignment::from_entries(entries)));
            }
        }
        for f in new_formulas {
            add(f, &mut checker, &mut formulas, &mut extensions)?;
        }
        let next = partition(n, &extensions);
        if next.iter().max() == class_of.iter().max() {
            return Ok(Characteristic { formulas, extensions, class_of: next });
        }
        class_of = next;
    }
}

/// Canonical class numbering of the states by their truth-value vectors.
fn partition(n: usize, exts: &[Extension]) -> Vec<usize> {
    let mut ids: HashMap<Vec<bool>, usize> = HashMap::new();
    (0..n)
        .map(|s| {
            let key: Vec<bool> = exts.iter().map(|e| e.contains(s)).collect();
            let next = ids.len();
            *ids.entry(key).or_insert(next)
        })
        .collect()
}

/// Looks for a pair that the generated formulas cannot tell apart although
/// the bisimulation separates them.
pub fn hm_converse(m: &Cgm, r: &Relation) -> Result<Option<(usize, usize)>> {
    let ch = characteristic_formulas(m)?;
    for a in 0..m.num_states() {
        for b in 0..m.num_states() {
            if !r.contains(a, b) && !ch.separated(a, b) {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests;
