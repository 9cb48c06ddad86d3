use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The on-disk model format.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawModel {
    pub agents: Vec<String>,
    pub states: Vec<RawState>,
    pub actions: BTreeMap<String, BTreeMap<String, Vec<String>>>,
    pub transitions: BTreeMap<String, Vec<RawTransition>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawState {
    pub id: String,
    #[serde(default)]
    pub props: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTransition {
    pub profile: BTreeMap<String, String>,
    pub to: String,
}

impl RawModel {
    pub fn from_json(text: &str) -> Result<RawModel> {
        serde_json::from_str(text).map_err(|e| Error::InvalidModel(format!("malformed model JSON: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// A well-formedness problem found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoAgents,
    DuplicateAgent(String),
    NoStates,
    DuplicateState(String),
    UnknownState { context: String, state: String },
    UnknownAgent { state: String, agent: String },
    MissingActions { state: String, agent: String },
    EmptyActionSet { state: String, agent: String },
    DuplicateAction { state: String, agent: String, action: String },
    BadProfile { state: String, detail: String },
    DuplicateProfile { state: String, profile: String },
    MissingProfile { state: String, profile: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoAgents => write!(f, "model declares no agents"),
            Violation::DuplicateAgent(a) => write!(f, "agent `{a}` declared twice"),
            Violation::NoStates => write!(f, "model declares no states"),
            Violation::DuplicateState(s) => write!(f, "state `{s}` declared twice"),
            Violation::UnknownState { context, state } => write!(f, "{context} refers to unknown state `{state}`"),
            Violation::UnknownAgent { state, agent } => write!(f, "state `{state}`: unknown agent `{agent}`"),
            Violation::MissingActions { state, agent } => {
                write!(f, "empty action set: no actions for agent `{agent}` at state `{state}`")
            }
            Violation::EmptyActionSet { state, agent } => {
                write!(f, "empty action set for agent `{agent}` at state `{state}`")
            }
            Violation::DuplicateAction { state, agent, action } => {
                write!(f, "state `{state}`: agent `{agent}` lists action `{action}` twice")
            }
            Violation::BadProfile { state, detail } => write!(f, "state `{state}`: invalid profile: {detail}"),
            Violation::DuplicateProfile { state, profile } => {
                write!(f, "state `{state}`: profile {profile} listed more than once")
            }
            Violation::MissingProfile { state, profile } => {
                write!(f, "outcome not total at state `{state}`: missing profile {profile}")
            }
        }
    }
}

/// Lists every well-formedness violation; empty iff the model is valid.
pub fn validate(m: &RawModel) -> Vec<Violation> {
    let mut out = Vec::new();
    if m.agents.is_empty() {
        out.push(Violation::NoAgents);
    }
    let mut seen = BTreeSet::new();
    for a in &m.agents {
        if !seen.insert(a) {
            out.push(Violation::DuplicateAgent(a.clone()));
        }
    }
    if m.states.is_empty() {
        out.push(Violation::NoStates);
    }
    let mut ids = BTreeSet::new();
    for s in &m.states {
        if !ids.insert(s.id.as_str()) {
            out.push(Violation::DuplicateState(s.id.clone()));
        }
    }
    for s in m.actions.keys().chain(m.transitions.keys()) {
        if !ids.contains(s.as_str()) {
            out.push(Violation::UnknownState { context: "action/transition table".into(), state: s.clone() });
        }
    }
    for st in &m.states {
        let s = &st.id;
        let acts = m.actions.get(s);
        let mut complete = true;
        for a in &m.agents {
            match acts.and_then(|t| t.get(a)) {
                None => {
                    out.push(Violation::MissingActions { state: s.clone(), agent: a.clone() });
                    complete = false;
                }
                Some(v) if v.is_empty() => {
                    out.push(Violation::EmptyActionSet { state: s.clone(), agent: a.clone() });
                    complete = false;
                }
                Some(v) => {
                    let mut names = BTreeSet::new();
                    for x in v {
                        if !names.insert(x) {
                            out.push(Violation::DuplicateAction { state: s.clone(), agent: a.clone(), action: x.clone() });
                        }
                    }
                }
            }
        }
        if let Some(t) = acts {
            for a in t.keys() {
                if !m.agents.contains(a) {
                    out.push(Violation::UnknownAgent { state: s.clone(), agent: a.clone() });
                }
            }
        }
        if !complete {
            continue;
        }
        let acts = acts.unwrap();
        let mut listed: BTreeSet<Vec<String>> = BTreeSet::new();
        for t in m.transitions.get(s).map(Vec::as_slice).unwrap_or(&[]) {
            if !ids.contains(t.to.as_str()) {
                out.push(Violation::UnknownState { context: format!("transition from `{s}`"), state: t.to.clone() });
            }
            let mut key = Vec::new();
            let mut ok = true;
            for a in &m.agents {
                match t.profile.get(a) {
                    None => {
                        out.push(Violation::BadProfile { state: s.clone(), detail: format!("no action for agent `{a}`") });
                        ok = false;
                    }
                    Some(x) if !acts[a].contains(x) => {
                        out.push(Violation::BadProfile {
                            state: s.clone(),
                            detail: format!("action `{x}` is not available to agent `{a}`"),
                        });
                        ok = false;
                    }
                    Some(x) => key.push(x.clone()),
                }
            }
            for a in t.profile.keys() {
                if !m.agents.contains(a) {
                    out.push(Violation::BadProfile { state: s.clone(), detail: format!("unknown agent `{a}`") });
                    ok = false;
                }
            }
            if ok && !listed.insert(key.clone()) {
                out.push(Violation::DuplicateProfile { state: s.clone(), profile: format!("({})", key.join(",")) });
            }
        }
        let mut profile: Vec<usize> = vec![0; m.agents.len()];
        'all: loop {
            let key: Vec<String> = m.agents.iter().zip(&profile).map(|(a, &i)| acts[a][i].clone()).collect();
            if !listed.contains(&key) {
                out.push(Violation::MissingProfile { state: s.clone(), profile: format!("({})", key.join(",")) });
            }
            for i in (0..profile.len()).rev() {
                profile[i] += 1;
                if profile[i] < acts[&m.agents[i]].len() {
                    continue 'all;
                }
                profile[i] = 0;
            }
            break;
        }
    }
    out
}
