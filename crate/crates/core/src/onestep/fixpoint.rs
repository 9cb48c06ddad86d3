use std::collections::{BTreeSet, HashMap};

use super::{Mask, OneStepSequent, Redistribution, SatConstraint};
use crate::error::{Error, Result};

/// Largest number of sequent variables the outcome universe is built for.
pub const MAX_SEQUENT_VARS: usize = 16;

/// Admissible outcomes per redistribution: the greatest assignment of
/// outcome sets such that every outcome of `R` contains `F(R)` and, for each
/// negative assignment, either holds the grand coalition's variable or lets
/// some smaller coalition `C` of its support reach an admissible outcome of
/// `R` restricted to `C` that holds `C`'s variable.
///
/// Outcomes are bitmasks over `vars` (the constraint's variables in order)
/// and range over subsets of the sequent's variables lying inside some
/// member of the constraint.
pub struct Admissible {
    pub vars: Vec<String>,
    reds: Vec<Redistribution>,
    index: HashMap<Redistribution, usize>,
    sets: Vec<Vec<u32>>,
}

impl Admissible {
    pub fn new(seq: &OneStepSequent, s: &SatConstraint) -> Result<Self> {
        let vars: Vec<String> = s.vars.iter().cloned().collect();
        if vars.len() > 32 {
            return Err(Error::LimitExceeded("more than 32 constraint variables".into()));
        }
        let bit = |v: &str| -> Result<u32> {
            vars.iter()
                .position(|x| x == v)
                .map(|i| 1u32 << i)
                .ok_or_else(|| Error::Precondition(format!("sequent variable `{v}` is not declared by the constraint")))
        };
        let bits = |set: &BTreeSet<String>| set.iter().try_fold(0u32, |b, v| Ok::<_, Error>(b | bit(v)?));
        let seq_vars: Vec<u32> = seq.variables().iter().map(|v| bit(v)).collect::<Result<_>>()?;
        if seq_vars.len() > MAX_SEQUENT_VARS {
            return Err(Error::LimitExceeded(format!("more than {MAX_SEQUENT_VARS} sequent variables")));
        }
        let family: Vec<u32> = s.family.iter().map(bits).collect::<Result<_>>()?;
        let universe: Vec<u32> = (0u32..1 << seq_vars.len())
            .map(|sub| seq_vars.iter().enumerate().filter(|(i, _)| sub >> i & 1 == 1).fold(0, |b, (_, &v)| b | v))
            .filter(|&o| family.iter().any(|&z| o & !z == 0))
            .collect();
        let mut base = 0u32;
        for g in &seq.positives {
            if let Some(p) = g.get(0) {
                base |= bit(p)?;
            }
        }
        let mut reds: Vec<Redistribution> = Vec::new();
        let mut index = HashMap::new();
        for r in seq.redistributions() {
            let r = normalize(&r, seq.full_mask());
            if !index.contains_key(&r) {
                index.insert(r.clone(), reds.len());
                reds.push(r);
            }
        }
        let full = seq.full_mask();
        let neg: Vec<(Option<u32>, Vec<(Mask, u32)>)> = seq
            .negatives
            .iter()
            .map(|g| {
                let agt = g.get(full).map(bit).transpose()?;
                let rest = g.entries.iter().filter(|(c, _)| *c != full).map(|(c, v)| Ok((*c, bit(v)?))).collect::<Result<_>>()?;
                Ok((agt, rest))
            })
            .collect::<Result<_>>()?;
        let restrict: Vec<Vec<usize>> = reds
            .iter()
            .map(|r| neg.iter().flat_map(|(_, rest)| rest).map(|&(c, _)| index[&normalize(r, c)]).collect())
            .collect();
        let mut sets: Vec<Vec<u32>> = reds
            .iter()
            .map(|r| {
                let need = base | bits(&seq.forced(r))?;
                Ok(universe.iter().copied().filter(|&o| o & need == need).collect())
            })
            .collect::<Result<_>>()?;
        loop {
            let mut changed = false;
            for r in 0..reds.len() {
                let mut kept = Vec::with_capacity(sets[r].len());
                for &o in &sets[r] {
                    let mut slot = 0;
                    let ok = neg.iter().all(|(agt, rest)| {
                        let here = agt.is_some_and(|q| o & q != 0);
                        let mut away = false;
                        for &(_, q) in rest {
                            away |= sets[restrict[r][slot]].iter().any(|&o2| o2 & q != 0);
                            slot += 1;
                        }
                        here || away
                    });
                    if ok {
                        kept.push(o);
                    }
                }
                if kept.len() != sets[r].len() {
                    sets[r] = kept;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        Ok(Admissible { vars, reds, index, sets })
    }

    pub fn get(&self, r: &Redistribution, full: Mask) -> &[u32] {
        &self.sets[self.index[&normalize(r, full)]]
    }

    /// First redistribution without admissible outcomes.
    pub fn empty_redistribution(&self) -> Option<&Redistribution> {
        self.reds.iter().zip(&self.sets).find(|(_, s)| s.is_empty()).map(|(r, _)| r)
    }

    pub fn to_set(&self, o: u32) -> BTreeSet<String> {
        self.vars.iter().enumerate().filter(|(i, _)| o >> i & 1 == 1).map(|(_, v)| v.clone()).collect()
    }
}

/// `R` restricted to `c`, without pairs on the empty coalition.
fn normalize(r: &Redistribution, c: Mask) -> Redistribution {
    let mut pairs: Vec<(Mask, usize)> = r.pairs.iter().map(|&(m, i)| (m & c, i)).filter(|&(m, _)| m != 0).collect();
    pairs.sort();
    Redistribution { pairs }
}
