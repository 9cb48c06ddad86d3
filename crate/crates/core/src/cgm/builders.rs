use std::collections::{BTreeSet, HashMap, VecDeque};

use super::Cgm;
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum CrossingMode {
    Simultaneous,
    WolvesThenSheep,
}

impl std::str::FromStr for CrossingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simultaneous" => Ok(CrossingMode::Simultaneous),
            "wolves_then_sheep" | "wolves-then-sheep" => Ok(CrossingMode::WolvesThenSheep),
            other => Err(Error::Precondition(format!("unknown crossing mode `{other}`"))),
        }
    }
}

pub const DEFAULT_STATE_LIMIT: usize = 200_000;

/// Agent names used by the river-crossing model.
pub fn sheep_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("S{i}")).collect()
}

pub fn wolf_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("W{i}")).collect()
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum Node {
    /// Bit i set iff animal i is on the right bank; `boat` true iff on the right.
    Bank { right: u32, boat: bool },
    /// Wolves have chosen their boarding set; sheep move next.
    Half { right: u32, boat: bool, wolves: u32 },
    Eaten,
    Crossed,
}

struct River {
    n_sheep: usize,
    n: usize,
}

impl River {
    fn is_sheep(&self, i: usize) -> bool {
        i < self.n_sheep
    }

    fn counts(&self, set: u32) -> (usize, usize) {
        let mut s = 0;
        let mut w = 0;
        for i in 0..self.n {
            if set >> i & 1 == 1 {
                if self.is_sheep(i) {
                    s += 1;
                } else {
                    w += 1;
                }
            }
        }
        (s, w)
    }

    fn outnumbered(&self, set: u32) -> bool {
        let (s, w) = self.counts(set);
        s > 0 && w > s
    }

    fn all(&self) -> u32 {
        if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        }
    }

    /// Applies a boarding set at a bank node.
    fn step(&self, right: u32, boat: bool, boarding: u32) -> Node {
        let side = if boat { right } else { self.all() & !right };
        let load = boarding.count_ones();
        if load == 0 || load > 2 || boarding & !side != 0 {
            return Node::Bank { right, boat };
        }
        let right2 = right ^ boarding;
        if self.outnumbered(right2) || self.outnumbered(self.all() & !right2) || self.outnumbered(boarding) {
            return Node::Eaten;
        }
        if right2 == self.all() {
            return Node::Crossed;
        }
        Node::Bank { right: right2, boat: !boat }
    }

    fn id(&self, node: Node) -> String {
        let bits = |set: u32, range: std::ops::Range<usize>| -> String {
            range.map(|i| if set >> i & 1 == 1 { 'R' } else { 'L' }).collect()
        };
        match node {
            Node::Eaten => "eaten".into(),
            Node::Crossed => "crossed".into(),
            Node::Bank { right, boat } => format!(
                "{}_{}_{}",
                bits(right, 0..self.n_sheep),
                bits(right, self.n_sheep..self.n),
                if boat { 'R' } else { 'L' }
            ),
            Node::Half { right, boat, wolves } => {
                let w: String = (self.n_sheep..self.n).map(|i| if wolves >> i & 1 == 1 { 'b' } else { 's' }).collect();
                format!("{}_{}", self.id(Node::Bank { right, boat }), w)
            }
        }
    }
}

/// Sheep-and-wolves river crossing. Agents are individual animals with
/// actions `stay` and `board`; `e` marks the eaten sink, `c` the crossed sink.
pub fn build_river_crossing(n_sheep: usize, n_wolves: usize, mode: CrossingMode) -> Result<Cgm> {
    build_river_crossing_limited(n_sheep, n_wolves, mode, DEFAULT_STATE_LIMIT)
}

pub fn build_river_crossing_limited(n_sheep: usize, n_wolves: usize, mode: CrossingMode, limit: usize) -> Result<Cgm> {
    let n = n_sheep + n_wolves;
    if n == 0 || n > 16 {
        return Err(Error::Precondition("need between 1 and 16 animals".into()));
    }
    let r = River { n_sheep, n };
    let mut agents = sheep_names(n_sheep);
    agents.extend(wolf_names(n_wolves));
    let two = || vec!["stay".to_string(), "board".to_string()];
    let one = |name: &str| vec![name.to_string()];

    let start = Node::Bank { right: 0, boat: false };
    let mut index: HashMap<Node, usize> = HashMap::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    index.insert(start, 0);
    order.push(start);
    queue.push_back(start);
    let mut rows: Vec<(Vec<Vec<String>>, Vec<Node>)> = Vec::new();
    while let Some(node) = queue.pop_front() {
        let (actions, targets): (Vec<Vec<String>>, Vec<Node>) = match node {
            Node::Eaten | Node::Crossed => ((0..n).map(|_| one("stay")).collect(), vec![node]),
            Node::Bank { right, boat } => match mode {
                CrossingMode::Simultaneous => {
                    let acts = (0..n).map(|_| two()).collect();
                    let t = (0..1u32 << n).map(|p| r.step(right, boat, profile_set(p, n))).collect();
                    (acts, t)
                }
                CrossingMode::WolvesThenSheep => {
                    let acts = (0..n).map(|i| if r.is_sheep(i) { one("wait") } else { two() }).collect();
                    let t = (0..1u32 << n_wolves)
                        .map(|p| Node::Half { right, boat, wolves: profile_set(p, n_wolves) << n_sheep })
                        .collect();
                    (acts, t)
                }
            },
            Node::Half { right, boat, wolves } => {
                let acts = (0..n).map(|i| if r.is_sheep(i) { two() } else { one("wait") }).collect();
                let t = (0..1u32 << n_sheep).map(|p| r.step(right, boat, wolves | profile_set(p, n_sheep))).collect();
                (acts, t)
            }
        };
        for &t in &targets {
            if !index.contains_key(&t) {
                if index.len() >= limit {
                    return Err(Error::LimitExceeded(format!("river crossing model exceeds {limit} states")));
                }
                index.insert(t, order.len());
                order.push(t);
                queue.push_back(t);
            }
        }
        rows.push((actions, targets));
    }
    let states = order
        .iter()
        .map(|&node| {
            let mut labels = BTreeSet::new();
            match node {
                Node::Eaten => {
                    labels.insert("e".to_string());
                }
                Node::Crossed => {
                    labels.insert("c".to_string());
                }
                _ => {}
            }
            (r.id(node), labels)
        })
        .collect();
    let (actions, outcome): (Vec<_>, Vec<_>) = rows
        .into_iter()
        .map(|(a, t)| (a, t.into_iter().map(|x| index[&x]).collect::<Vec<usize>>()))
        .unzip();
    Cgm::from_parts(agents, states, actions, outcome)
}

/// Canonical profile number `p` over `k` two-action agents, read as the set of
/// agents choosing their second action (`board`). The first agent is the most
/// significant digit.
fn profile_set(p: u32, k: usize) -> u32 {
    let mut set = 0;
    for i in 0..k {
        if p >> (k - 1 - i) & 1 == 1 {
            set |= 1 << i;
        }
    }
    set
}

/// Password-protected data sharing between agents `A` and `B`.
///
/// `H_A` means A has access to B's data, `H_B` the converse. Both act
/// simultaneously each round, choosing `send` or `withhold`; sending is
/// irreversible.
pub fn build_password_model() -> Cgm {
    let ids = ["none", "hA", "hB", "both"];
    let code = |ha: bool, hb: bool| (ha as usize) | ((hb as usize) << 1);
    let states = (0..4)
        .map(|i| {
            let mut l = BTreeSet::new();
            if i & 1 == 1 {
                l.insert("H_A".to_string());
            }
            if i & 2 == 2 {
                l.insert("H_B".to_string());
            }
            (ids[i].to_string(), l)
        })
        .collect();
    let acts = vec!["send".to_string(), "withhold".to_string()];
    let mut actions = Vec::new();
    let mut outcome = Vec::new();
    for i in 0..4 {
        let (ha, hb) = (i & 1 == 1, i & 2 == 2);
        actions.push(vec![acts.clone(), acts.clone()]);
        let mut row = Vec::new();
        for a_sends in [true, false] {
            for b_sends in [true, false] {
                row.push(code(ha || b_sends, hb || a_sends));
            }
        }
        outcome.push(row);
    }
    Cgm::from_parts(vec!["A".into(), "B".into()], states, actions, outcome).expect("well-formed")
}
