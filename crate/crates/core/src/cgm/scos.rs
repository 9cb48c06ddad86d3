use std::collections::{BTreeMap, BTreeSet};

use super::Cgm;

/// Result of state-copying and outcome-splitting.
#[derive(Clone, Debug)]
pub struct Scos {
    pub model: Cgm,
    /// For each original state, the indices of its copies in `model`; copy 0 first.
    pub copies: Vec<Vec<usize>>,
}

/// Makes the model injective by copying states and splitting outcomes.
///
/// A state `w` gets as many copies as the largest number of profiles at a
/// single source state that lead to `w`. At each source, the profiles leading
/// to `w` are taken in canonical order and the i-th is sent to copy i.
pub fn scos(m: &Cgm) -> Scos {
    let n = m.num_states();
    let mut count = vec![1usize; n];
    for u in 0..n {
        let mut per_target: BTreeMap<usize, usize> = BTreeMap::new();
        for &w in m.outcomes(u) {
            *per_target.entry(w).or_default() += 1;
        }
        for (w, k) in per_target {
            count[w] = count[w].max(k);
        }
    }
    let taken: BTreeSet<&str> = m.state_ids().iter().map(String::as_str).collect();
    let mut copies = Vec::with_capacity(n);
    let mut states = Vec::new();
    let mut used: BTreeSet<String> = BTreeSet::new();
    for w in 0..n {
        let mut mine = Vec::new();
        for i in 0..count[w] {
            let base = m.state_id(w);
            let mut id = if count[w] == 1 { base.to_string() } else { format!("{base}{}", i + 1) };
            if count[w] > 1 && (taken.contains(id.as_str()) || used.contains(&id)) {
                id = format!("{base}#{}", i + 1);
            }
            used.insert(id.clone());
            mine.push(states.len());
            states.push((id, m.labels(w).clone()));
        }
        copies.push(mine);
    }
    let mut actions = Vec::new();
    let mut outcome = Vec::new();
    for w in 0..n {
        let mut rank: BTreeMap<usize, usize> = BTreeMap::new();
        let row: Vec<usize> = m
            .outcomes(w)
            .iter()
            .map(|&t| {
                let r = rank.entry(t).or_default();
                let target = copies[t][*r];
                *r += 1;
                target
            })
            .collect();
        for _ in 0..count[w] {
            actions.push((0..m.num_agents()).map(|a| m.actions(w, a).to_vec()).collect());
            outcome.push(row.clone());
        }
    }
    let model = Cgm::from_parts(m.agents().to_vec(), states, actions, outcome).expect("copies of a valid model");
    Scos { model, copies }
}
