use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::cgm::Cgm;
use crate::error::{Error, Result};

/// Largest memory depth accepted by [`MemoryMode`] parsing.
pub const MAX_MEMORY: usize = 8;

/// How much of the history a finite strategy may look at.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum MemoryMode {
    Positional,
    /// Last k states.
    PathSuffix(usize),
    /// Last k states together with the profiles played between them.
    PlaySuffix(usize),
}

impl MemoryMode {
    pub fn depth(self) -> usize {
        match self {
            MemoryMode::Positional => 1,
            MemoryMode::PathSuffix(k) | MemoryMode::PlaySuffix(k) => k.max(1),
        }
    }

    pub fn records_profiles(self) -> bool {
        matches!(self, MemoryMode::PlaySuffix(k) if k > 1)
    }

    pub fn initial(self, s: usize) -> Memory {
        Memory { states: vec![s], profiles: Vec::new() }
    }

    /// Memory after playing `profile` from the current state into `t`.
    pub fn step(self, mem: &Memory, profile: usize, t: usize) -> Memory {
        let k = self.depth();
        let mut states = mem.states.clone();
        states.push(t);
        let mut profiles = Vec::new();
        if self.records_profiles() {
            profiles = mem.profiles.clone();
            profiles.push(profile);
        }
        if states.len() > k {
            states.drain(..states.len() - k);
        }
        if profiles.len() > k - 1 {
            profiles.drain(..profiles.len() - (k - 1));
        }
        Memory { states, profiles }
    }

    /// True iff memory values of `self` determine those of `other`.
    pub fn refines(self, other: MemoryMode) -> bool {
        self.depth() >= other.depth() && (self.records_profiles() || !other.records_profiles())
    }

    /// The memory value `other` would hold, given the value held by `self`.
    pub fn project(self, mem: &Memory, other: MemoryMode) -> Memory {
        debug_assert!(self.refines(other));
        let k = other.depth().min(mem.states.len());
        let states = mem.states[mem.states.len() - k..].to_vec();
        let profiles =
            if other.records_profiles() { mem.profiles[mem.profiles.len() - (k - 1)..].to_vec() } else { Vec::new() };
        Memory { states, profiles }
    }
}

impl fmt::Display for MemoryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MemoryMode::Positional => write!(f, "positional"),
            MemoryMode::PathSuffix(k) => write!(f, "path:{k}"),
            MemoryMode::PlaySuffix(k) => write!(f, "play:{k}"),
        }
    }
}

impl FromStr for MemoryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "positional" {
            return Ok(MemoryMode::Positional);
        }
        let bad = || Error::Precondition(format!("bad memory mode `{s}` (expected positional, path:K or play:K)"));
        let (kind, k) = s.split_once(':').ok_or_else(bad)?;
        let k: usize = k.parse().map_err(|_| bad())?;
        if k == 0 || k > MAX_MEMORY {
            return Err(Error::Precondition(format!("memory depth must be between 1 and {MAX_MEMORY}")));
        }
        match kind {
            "path" => Ok(MemoryMode::PathSuffix(k)),
            "play" => Ok(MemoryMode::PlaySuffix(k)),
            _ => Err(bad()),
        }
    }
}

/// A truncated history. `profiles[i]` is the profile played at `states[i]`;
/// it is empty unless the mode records profiles.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Memory {
    pub states: Vec<usize>,
    pub profiles: Vec<usize>,
}

impl Memory {
    pub fn last(&self) -> usize {
        *self.states.last().expect("memory is never empty")
    }

    pub fn render(&self, m: &Cgm) -> String {
        let mut parts = Vec::new();
        for (i, &s) in self.states.iter().enumerate() {
            parts.push(m.state_id(s).to_string());
            if let Some(&p) = self.profiles.get(i) {
                parts.push(m.format_profile(s, p));
            }
        }
        format!("[{}]", parts.join(","))
    }
}

/// A finite-memory strategy profile: one full action profile per memory
/// value, i.e. one table per agent sharing the same domain.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteStrategyProfile {
    pub mode: MemoryMode,
    pub table: BTreeMap<Memory, Vec<usize>>,
}

impl FiniteStrategyProfile {
    /// Builds a total profile on every memory value reachable from `s`
    /// under any behaviour; `choose` returns per-agent action indices.
    pub fn from_fn<F>(m: &Cgm, s: usize, mode: MemoryMode, mut choose: F) -> Result<Self>
    where
        F: FnMut(&Memory) -> Vec<usize>,
    {
        let mut table = BTreeMap::new();
        for mem in reachable_memories(m, s, mode, usize::MAX)? {
            let acts = choose(&mem);
            let st = mem.last();
            if acts.len() != m.num_agents() || acts.iter().enumerate().any(|(a, &x)| x >= m.actions(st, a).len()) {
                return Err(Error::Precondition(format!("unavailable action choice at {}", mem.render(m))));
            }
            table.insert(mem, acts);
        }
        Ok(FiniteStrategyProfile { mode, table })
    }

    /// Same as [`from_fn`](Self::from_fn) with actions given by name.
    pub fn from_named<F>(m: &Cgm, s: usize, mode: MemoryMode, mut choose: F) -> Result<Self>
    where
        F: FnMut(&Memory) -> Vec<&'static str>,
    {
        let mut err = None;
        let p = Self::from_fn(m, s, mode, |mem| {
            let st = mem.last();
            choose(mem)
                .iter()
                .enumerate()
                .map(|(a, name)| match m.actions(st, a).iter().position(|x| x == name) {
                    Some(i) => i,
                    None => {
                        err.get_or_insert(Error::UnknownAction {
                            state: m.state_id(st).into(),
                            agent: m.agents()[a].clone(),
                            action: name.to_string(),
                        });
                        0
                    }
                })
                .collect()
        })?;
        match err {
            Some(e) => Err(e),
            None => Ok(p),
        }
    }

    /// Canonical profile index prescribed at a memory value.
    pub fn profile_at(&self, m: &Cgm, mem: &Memory) -> Result<usize> {
        match self.table.get(mem) {
            Some(acts) => Ok(m.profile_index(mem.last(), acts)),
            None => Err(Error::PartialStrategy(format!("no entry for memory {}", mem.render(m)))),
        }
    }

    pub fn action(&self, agent: usize, mem: &Memory) -> Option<usize> {
        self.table.get(mem).map(|a| a[agent])
    }

    /// Agent `a`'s own table.
    pub fn agent_table(&self, a: usize) -> BTreeMap<Memory, usize> {
        self.table.iter().map(|(k, v)| (k.clone(), v[a])).collect()
    }

    /// Re-expresses this profile in a richer memory mode.
    pub fn lift(&self, m: &Cgm, s: usize, mode: MemoryMode) -> Result<Self> {
        if !mode.refines(self.mode) {
            return Err(Error::Precondition(format!("{mode} does not refine {}", self.mode)));
        }
        let mut missing = None;
        let p = Self::from_fn(m, s, mode, |mem| {
            let small = mode.project(mem, self.mode);
            match self.table.get(&small) {
                Some(a) => a.clone(),
                None => {
                    missing.get_or_insert_with(|| small.render(m));
                    vec![0; m.num_agents()]
                }
            }
        })?;
        match missing {
            Some(mem) => Err(Error::PartialStrategy(format!("no entry for memory {mem}"))),
            None => Ok(p),
        }
    }

    /// One line per memory value: `[s,s1] -> a=x, b=y`.
    pub fn render(&self, m: &Cgm) -> String {
        let mut out = String::new();
        for (mem, acts) in &self.table {
            let st = mem.last();
            let cells: Vec<String> =
                acts.iter().enumerate().map(|(a, &x)| format!("{}={}", m.agents()[a], m.actions(st, a)[x])).collect();
            out.push_str(&format!("{} -> {}\n", mem.render(m), cells.join(", ")));
        }
        out
    }
}

impl FiniteStrategyProfile {
    /// The table preceded by a `mode:` line; read back by [`parse`](Self::parse).
    pub fn to_text(&self, m: &Cgm) -> String {
        format!("mode: {}\n{}", self.mode, self.render(m))
    }

    /// Reads the `to_text` format. Blank lines, `#` comments and other
    /// `key: value` lines are skipped, so oracle reports can be fed back.
    pub fn parse(m: &Cgm, text: &str) -> Result<Self> {
        let mut mode = None;
        let mut table = BTreeMap::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.trim();
            let bad = |msg: &str| Error::Precondition(format!("strategy line {}: {msg}", no + 1));
            if let Some(rest) = line.strip_prefix("mode:") {
                mode = Some(rest.trim().parse::<MemoryMode>()?);
                continue;
            }
            if !line.starts_with('[') {
                continue;
            }
            let mode = mode.ok_or_else(|| bad("table entry before the mode line"))?;
            let (mem, cells) = line.split_once("] ->").ok_or_else(|| bad("expected `[memory] -> cells`"))?;
            let mem = parse_memory(m, &mem[1..], mode).map_err(|e| bad(&e))?;
            let st = mem.last();
            let mut acts = vec![None; m.num_agents()];
            for cell in cells.split(',').map(str::trim).filter(|c| !c.is_empty()) {
                let (agent, action) = cell.split_once('=').ok_or_else(|| bad("expected agent=action"))?;
                let a = m.agent(agent.trim())?;
                let x = m.actions(st, a).iter().position(|y| y == action.trim()).ok_or_else(|| Error::UnknownAction {
                    state: m.state_id(st).into(),
                    agent: agent.trim().into(),
                    action: action.trim().into(),
                })?;
                acts[a] = Some(x);
            }
            let acts: Vec<usize> = acts.into_iter().collect::<Option<_>>().ok_or_else(|| bad("missing agent"))?;
            if table.insert(mem, acts).is_some() {
                return Err(bad("duplicate memory value"));
            }
        }
        let mode = mode.ok_or_else(|| Error::Precondition("strategy file has no mode line".into()))?;
        Ok(FiniteStrategyProfile { mode, table })
    }
}

fn parse_memory(m: &Cgm, text: &str, mode: MemoryMode) -> std::result::Result<Memory, String> {
    let mut tokens = Vec::new();
    let (mut depth, mut start) = (0usize, 0usize);
    for (i, ch) in text.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                tokens.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    tokens.push(text[start..].trim());
    let mut mem = Memory { states: Vec::new(), profiles: Vec::new() };
    for tok in tokens {
        if let Some(inner) = tok.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
            let st = *mem.states.last().ok_or("profile before any state")?;
            let names: Vec<&str> = inner.split(',').map(str::trim).collect();
            if names.len() != m.num_agents() {
                return Err(format!("profile {tok} has the wrong arity"));
            }
            let mut acts = Vec::with_capacity(names.len());
            for (a, name) in names.iter().enumerate() {
                acts.push(m.actions(st, a).iter().position(|y| y == name).ok_or(format!("unknown action {name}"))?);
            }
            mem.profiles.push(m.profile_index(st, &acts));
        } else {
            mem.states.push(m.state(tok).map_err(|e| e.to_string())?);
        }
    }
    let want_profiles = if mode.records_profiles() { mem.states.len().saturating_sub(1) } else { 0 };
    if mem.states.is_empty() || mem.states.len() > mode.depth() || mem.profiles.len() != want_profiles {
        return Err(format!("memory [{text}] does not fit mode {mode}"));
    }
    Ok(mem)
}

/// Every memory value reachable from `s` under some behaviour, in BFS order.
pub fn reachable_memories(m: &Cgm, s: usize, mode: MemoryMode, limit: usize) -> Result<Vec<Memory>> {
    let mut seen: HashSet<Memory> = HashSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    let root = mode.initial(s);
    seen.insert(root.clone());
    queue.push_back(root);
    while let Some(mem) = queue.pop_front() {
        let st = mem.last();
        for p in 0..m.num_profiles(st) {
            let next = mode.step(&mem, p, m.succ(st, p));
            if !seen.contains(&next) {
                if seen.len() >= limit {
                    return Err(Error::LimitExceeded(format!("more than {limit} memory values")));
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
        order.push(mem);
    }
    Ok(order)
}
