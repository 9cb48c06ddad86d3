use std::collections::{BTreeSet, HashMap};

use super::raw::{validate, RawModel, RawState, RawTransition};
use crate::error::{Error, Result};
use crate::syntax::Coalition;

/// Bitmask over agent indices.
pub type AgentMask = u64;

/// A finite concurrent game model with canonically indexed profiles.
///
/// Profiles at a state are numbered in mixed radix over the agents, the first
/// agent being the most significant digit, so numbering follows the
/// agent-order lexicographic enumeration.
#[derive(Clone, Debug)]
pub struct Cgm {
    agents: Vec<String>,
    states: Vec<String>,
    state_index: HashMap<String, usize>,
    labels: Vec<BTreeSet<String>>,
    actions: Vec<Vec<Vec<String>>>,
    outcome: Vec<Vec<usize>>,
}

/// Partition of the profiles at a state by their restriction to a coalition.
#[derive(Clone, Debug)]
pub struct Blocks {
    /// Block id of each profile.
    pub block_of: Vec<usize>,
    /// Sorted, deduplicated outcome states of each block.
    pub outcomes: Vec<Vec<usize>>,
}

impl Cgm {
    pub fn from_raw(raw: &RawModel) -> Result<Cgm> {
        let violations = validate(raw);
        if !violations.is_empty() {
            let text: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
            return Err(Error::InvalidModel(text.join("; ")));
        }
        let agents = raw.agents.clone();
        let states: Vec<String> = raw.states.iter().map(|s| s.id.clone()).collect();
        let state_index: HashMap<String, usize> = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let labels = raw.states.iter().map(|s| s.props.iter().cloned().collect()).collect();
        let actions: Vec<Vec<Vec<String>>> = states
            .iter()
            .map(|s| agents.iter().map(|a| raw.actions[s][a].clone()).collect())
            .collect();
        let mut m = Cgm { agents, states, state_index, labels, actions, outcome: Vec::new() };
        let mut outcome = Vec::with_capacity(m.states.len());
        for (si, s) in m.states.iter().enumerate() {
            let mut row = vec![0; m.num_profiles(si)];
            for t in &raw.transitions[s] {
                let acts: Vec<usize> = m
                    .agents
                    .iter()
                    .enumerate()
                    .map(|(ai, a)| m.actions[si][ai].iter().position(|x| *x == t.profile[a]).unwrap())
                    .collect();
                row[m.profile_index(si, &acts)] = m.state_index[&t.to];
            }
            outcome.push(row);
        }
        m.outcome = outcome;
        Ok(m)
    }

    /// Direct constructor for generated models; `outcome[s][profile]` uses the
    /// canonical profile numbering.
    pub fn from_parts(
        agents: Vec<String>,
        states: Vec<(String, BTreeSet<String>)>,
        actions: Vec<Vec<Vec<String>>>,
        outcome: Vec<Vec<usize>>,
    ) -> Result<Cgm> {
        let state_index: HashMap<String, usize> =
            states.iter().enumerate().map(|(i, (s, _))| (s.clone(), i)).collect();
        if state_index.len() != states.len() {
            return Err(Error::InvalidModel("duplicate state ids".into()));
        }
        let (ids, labels): (Vec<_>, Vec<_>) = states.into_iter().unzip();
        let m = Cgm { agents, states: ids, state_index, labels, actions, outcome };
        if m.actions.len() != m.states.len() || m.outcome.len() != m.states.len() {
            return Err(Error::InvalidModel("per-state tables have the wrong length".into()));
        }
        for s in 0..m.states.len() {
            if m.actions[s].len() != m.agents.len() || m.actions[s].iter().any(Vec::is_empty) {
                return Err(Error::InvalidModel(format!("bad action sets at state {}", m.states[s])));
            }
            if m.outcome[s].len() != m.num_profiles(s) || m.outcome[s].iter().any(|&t| t >= m.states.len()) {
                return Err(Error::InvalidModel(format!("bad outcome table at state {}", m.states[s])));
            }
        }
        Ok(m)
    }

    pub fn to_raw(&self) -> RawModel {
        let mut raw = RawModel {
            agents: self.agents.clone(),
            states: self
                .states
                .iter()
                .zip(&self.labels)
                .map(|(id, l)| RawState { id: id.clone(), props: l.iter().cloned().collect() })
                .collect(),
            ..Default::default()
        };
        for s in 0..self.states.len() {
            let id = &self.states[s];
            raw.actions.insert(
                id.clone(),
                self.agents.iter().cloned().zip(self.actions[s].iter().cloned()).collect(),
            );
            let ts = (0..self.num_profiles(s))
                .map(|p| RawTransition {
                    profile: self
                        .agents
                        .iter()
                        .cloned()
                        .zip(self.profile(s, p).into_iter().enumerate().map(|(a, x)| self.actions[s][a][x].clone()))
                        .collect(),
                    to: self.states[self.outcome[s][p]].clone(),
                })
                .collect();
            raw.transitions.insert(id.clone(), ts);
        }
        raw
    }

    pub fn agents(&self) -> &[String] {
        &self.agents
    }

    pub fn num_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_ids(&self) -> &[String] {
        &self.states
    }

    pub fn state_id(&self, s: usize) -> &str {
        &self.states[s]
    }

    pub fn state(&self, id: &str) -> Result<usize> {
        self.state_index.get(id).copied().ok_or_else(|| Error::UnknownState(id.to_string()))
    }

    pub fn agent(&self, name: &str) -> Result<usize> {
        self.agents.iter().position(|a| a == name).ok_or_else(|| Error::UnknownAgent(name.to_string()))
    }

    pub fn labels(&self, s: usize) -> &BTreeSet<String> {
        &self.labels[s]
    }

    pub fn holds(&self, p: &str, s: usize) -> bool {
        self.labels[s].contains(p)
    }

    /// Propositions true somewhere in the model.
    pub fn propositions(&self) -> BTreeSet<String> {
        self.labels.iter().flatten().cloned().collect()
    }

    pub fn actions(&self, s: usize, agent: usize) -> &[String] {
        &self.actions[s][agent]
    }

    pub fn num_profiles(&self, s: usize) -> usize {
        self.actions[s].iter().map(Vec::len).product()
    }

    /// Decodes a profile number into per-agent action indices.
    pub fn profile(&self, s: usize, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.agents.len()];
        for a in (0..self.agents.len()).rev() {
            let n = self.actions[s][a].len();
            out[a] = idx % n;
            idx /= n;
        }
        out
    }

    pub fn profile_index(&self, s: usize, acts: &[usize]) -> usize {
        let mut idx = 0;
        for (a, &x) in acts.iter().enumerate() {
            idx = idx * self.actions[s][a].len() + x;
        }
        idx
    }

    pub fn succ(&self, s: usize, profile: usize) -> usize {
        self.outcome[s][profile]
    }

    pub fn outcomes(&self, s: usize) -> &[usize] {
        &self.outcome[s]
    }

    pub fn successors(&self, s: usize) -> Vec<usize> {
        let set: BTreeSet<usize> = self.outcome[s].iter().copied().collect();
        set.into_iter().collect()
    }

    pub fn mask(&self, c: &Coalition) -> Result<AgentMask> {
        let mut m = 0;
        for a in c.members() {
            m |= 1 << self.agent(a)?;
        }
        Ok(m)
    }

    pub fn full_mask(&self) -> AgentMask {
        if self.agents.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.agents.len()) - 1
        }
    }

    pub fn coalition_of(&self, mask: AgentMask) -> Coalition {
        Coalition::new((0..self.agents.len()).filter(|a| mask >> a & 1 == 1).map(|a| self.agents[a].clone()))
    }

    /// Block id of a profile's restriction to `mask`.
    pub fn block_id(&self, s: usize, mask: AgentMask, acts: &[usize]) -> usize {
        let mut idx = 0;
        for (a, &x) in acts.iter().enumerate() {
            if mask >> a & 1 == 1 {
                idx = idx * self.actions[s][a].len() + x;
            }
        }
        idx
    }

    pub fn num_blocks(&self, s: usize, mask: AgentMask) -> usize {
        (0..self.agents.len()).filter(|a| mask >> a & 1 == 1).map(|a| self.actions[s][a].len()).product()
    }

    pub fn blocks(&self, s: usize, mask: AgentMask) -> Blocks {
        let n = self.num_profiles(s);
        let mut block_of = Vec::with_capacity(n);
        let mut outcomes = vec![Vec::new(); self.num_blocks(s, mask)];
        for p in 0..n {
            let b = self.block_id(s, mask, &self.profile(s, p));
            block_of.push(b);
            outcomes[b].push(self.outcome[s][p]);
        }
        for o in &mut outcomes {
            o.sort_unstable();
            o.dedup();
        }
        Blocks { block_of, outcomes }
    }

    /// `Out[s, ζ_C]` for a joint action given as (agent, action) index pairs.
    pub fn out_set(&self, s: usize, joint: &[(usize, usize)]) -> Result<BTreeSet<usize>> {
        for &(a, x) in joint {
            if a >= self.agents.len() || x >= self.actions[s][a].len() {
                return Err(Error::Precondition(format!("joint action not available at {}", self.states[s])));
            }
        }
        Ok((0..self.num_profiles(s))
            .filter(|&p| {
                let acts = self.profile(s, p);
                joint.iter().all(|&(a, x)| acts[a] == x)
            })
            .map(|p| self.outcome[s][p])
            .collect())
    }

    /// `Out[s, ζ_C]` with the joint action given by names.
    pub fn out_set_named(&self, state: &str, joint: &[(&str, &str)]) -> Result<BTreeSet<String>> {
        let s = self.state(state)?;
        let mut idx = Vec::new();
        for (agent, action) in joint {
            let a = self.agent(agent)?;
            let x = self.actions[s][a].iter().position(|y| y == action).ok_or_else(|| Error::UnknownAction {
                state: state.to_string(),
                agent: agent.to_string(),
                action: action.to_string(),
            })?;
            idx.push((a, x));
        }
        Ok(self.out_set(s, &idx)?.into_iter().map(|t| self.states[t].clone()).collect())
    }

    /// Profile printed as `(x,y,...)` in agent order.
    pub fn format_profile(&self, s: usize, profile: usize) -> String {
        let acts = self.profile(s, profile);
        let names: Vec<&str> = acts.iter().enumerate().map(|(a, &x)| self.actions[s][a][x].as_str()).collect();
        format!("({})", names.join(","))
    }

    /// True iff distinct profiles at each state have distinct outcomes.
    pub fn is_injective(&self) -> bool {
        self.outcome.iter().all(|row| {
            let set: BTreeSet<usize> = row.iter().copied().collect();
            set.len() == row.len()
        })
    }

    /// Disjoint union; states of `other` are shifted by the returned offset.
    /// State ids get a `#1` / `#2` suffix to keep them unique.
    pub fn disjoint_union(&self, other: &Cgm) -> Result<(Cgm, usize)> {
        if self.agents != other.agents {
            return Err(Error::Precondition("models have different agent lists".into()));
        }
        let off = self.num_states();
        let mut states = Vec::new();
        let mut actions = Vec::new();
        let mut outcome = Vec::new();
        for (m, tag, shift) in [(self, "#1", 0), (other, "#2", off)] {
            for s in 0..m.num_states() {
                states.push((format!("{}{}", m.states[s], tag), m.labels[s].clone()));
                actions.push(m.actions[s].clone());
                outcome.push(m.outcome[s].iter().map(|t| t + shift).collect());
            }
        }
        Ok((Cgm::from_parts(self.agents.clone(), states, actions, outcome)?, off))
    }
}
