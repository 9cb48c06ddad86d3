use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// Shared handle to a state formula. Subterms are shared freely.
pub type Formula = Arc<StateFormula>;

/// A set of agent names, kept sorted.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Coalition(BTreeSet<String>);

impl Coalition {
    pub fn empty() -> Self {
        Coalition(BTreeSet::new())
    }

    pub fn new<I, S>(members: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Coalition(members.into_iter().map(Into::into).collect())
    }

    pub fn members(&self) -> impl Iterator<Item = &str> + '_ {
        self.0.iter().map(String::as_str)
    }

    pub fn contains(&self, agent: &str) -> bool {
        self.0.contains(agent)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &Coalition) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &Coalition) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn union(&self, other: &Coalition) -> Coalition {
        Coalition(self.0.union(&other.0).cloned().collect())
    }

    pub fn intersection(&self, other: &Coalition) -> Coalition {
        Coalition(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn difference(&self, other: &Coalition) -> Coalition {
        Coalition(self.0.difference(&other.0).cloned().collect())
    }

    pub fn insert(&mut self, agent: impl Into<String>) {
        self.0.insert(agent.into());
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum StateFormula {
    True,
    False,
    Prop(String),
    Var(String),
    Not(Formula),
    And(Formula, Formula),
    Or(Formula, Formula),
    Implies(Formula, Formula),
    Brak(GoalAssignment),
    Mu(String, Formula),
    Nu(String, Formula),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum PathFormula {
    Next(Formula),
    Until(Formula, Formula),
    Globally(Formula),
    /// Always left-nested; build with [`PathFormula::and`].
    And(Arc<PathFormula>, Arc<PathFormula>),
}

/// Map from coalitions to goals. Trivial goals `X true` are never stored,
/// so the key set is exactly the support.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GoalAssignment {
    entries: BTreeMap<Coalition, PathFormula>,
}

pub fn tt() -> Formula {
    Arc::new(StateFormula::True)
}

pub fn ff() -> Formula {
    Arc::new(StateFormula::False)
}

pub fn prop(name: impl Into<String>) -> Formula {
    Arc::new(StateFormula::Prop(name.into()))
}

pub fn var(name: impl Into<String>) -> Formula {
    Arc::new(StateFormula::Var(name.into()))
}

pub fn not(f: Formula) -> Formula {
    Arc::new(StateFormula::Not(f))
}

pub fn and(a: Formula, b: Formula) -> Formula {
    Arc::new(StateFormula::And(a, b))
}

pub fn or(a: Formula, b: Formula) -> Formula {
    Arc::new(StateFormula::Or(a, b))
}

pub fn implies(a: Formula, b: Formula) -> Formula {
    Arc::new(StateFormula::Implies(a, b))
}

pub fn iff(a: Formula, b: Formula) -> Formula {
    and(implies(a.clone(), b.clone()), implies(b, a))
}

pub fn mu(z: impl Into<String>, body: Formula) -> Formula {
    Arc::new(StateFormula::Mu(z.into(), body))
}

pub fn nu(z: impl Into<String>, body: Formula) -> Formula {
    Arc::new(StateFormula::Nu(z.into(), body))
}

/// `<<γ>>`, with the empty assignment identified with `true`.
pub fn brak(ga: GoalAssignment) -> Formula {
    if ga.is_empty() {
        tt()
    } else {
        Arc::new(StateFormula::Brak(ga))
    }
}

/// Left-nested conjunction; `true` when empty.
pub fn conj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
    items.into_iter().reduce(and).unwrap_or_else(tt)
}

/// Left-nested disjunction; `false` when empty.
pub fn disj<I: IntoIterator<Item = Formula>>(items: I) -> Formula {
    items.into_iter().reduce(or).unwrap_or_else(ff)
}

impl StateFormula {
    pub fn is_true(&self) -> bool {
        matches!(self, StateFormula::True)
    }

    /// Free variables in sorted order.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        collect_free(self, &mut bound, &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every proposition name occurring in the formula.
    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let StateFormula::Prop(p) = f {
                out.insert(p.clone());
            }
        });
        out
    }

    /// Pre-order traversal over all state subformulas, including goal bodies.
    pub fn visit(&self, f: &mut dyn FnMut(&StateFormula)) {
        f(self);
        match self {
            StateFormula::Not(a) | StateFormula::Mu(_, a) | StateFormula::Nu(_, a) => a.visit(f),
            StateFormula::And(a, b) | StateFormula::Or(a, b) | StateFormula::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            StateFormula::Brak(ga) => {
                for (_, g) in ga.iter() {
                    for s in g.state_operands() {
                        s.visit(f);
                    }
                }
            }
            _ => {}
        }
    }

    /// Size in AST nodes, counting shared subterms once per occurrence.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }
}

fn collect_free(f: &StateFormula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match f {
        StateFormula::Var(z) => {
            if !bound.contains(z) {
                out.insert(z.clone());
            }
        }
        StateFormula::Mu(z, body) | StateFormula::Nu(z, body) => {
            bound.push(z.clone());
            collect_free(body, bound, out);
            bound.pop();
        }
        StateFormula::Not(a) => collect_free(a, bound, out),
        StateFormula::And(a, b) | StateFormula::Or(a, b) | StateFormula::Implies(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        StateFormula::Brak(ga) => {
            for (_, g) in ga.iter() {
                for s in g.state_operands() {
                    collect_free(s, bound, out);
                }
            }
        }
        StateFormula::True | StateFormula::False | StateFormula::Prop(_) => {}
    }
}

/// Replaces `Implies` and `False` by their definitions, everywhere.
pub fn desugar(f: &Formula) -> Formula {
    match &**f {
        StateFormula::True | StateFormula::Prop(_) | StateFormula::Var(_) => f.clone(),
        StateFormula::False => not(tt()),
        StateFormula::Not(a) => not(desugar(a)),
        StateFormula::And(a, b) => and(desugar(a), desugar(b)),
        StateFormula::Or(a, b) => or(desugar(a), desugar(b)),
        StateFormula::Implies(a, b) => or(not(desugar(a)), desugar(b)),
        StateFormula::Brak(ga) => brak(ga.map_bodies(&mut |s| desugar(s))),
        StateFormula::Mu(z, a) => mu(z.clone(), desugar(a)),
        StateFormula::Nu(z, a) => nu(z.clone(), desugar(a)),
    }
}

/// Capture-naive substitution of `replacement` for free occurrences of `z`.
/// Callers guarantee the replacement's free variables are not bound in `f`.
pub fn substitute(f: &Formula, z: &str, replacement: &Formula) -> Formula {
    match &**f {
        StateFormula::Var(v) if v == z => replacement.clone(),
        StateFormula::True | StateFormula::False | StateFormula::Prop(_) | StateFormula::Var(_) => f.clone(),
        StateFormula::Not(a) => not(substitute(a, z, replacement)),
        StateFormula::And(a, b) => and(substitute(a, z, replacement), substitute(b, z, replacement)),
        StateFormula::Or(a, b) => or(substitute(a, z, replacement), substitute(b, z, replacement)),
        StateFormula::Implies(a, b) => implies(substitute(a, z, replacement), substitute(b, z, replacement)),
        StateFormula::Brak(ga) => brak(ga.map_bodies(&mut |s| substitute(s, z, replacement))),
        StateFormula::Mu(v, _) | StateFormula::Nu(v, _) if v == z => f.clone(),
        StateFormula::Mu(v, a) => mu(v.clone(), substitute(a, z, replacement)),
        StateFormula::Nu(v, a) => nu(v.clone(), substitute(a, z, replacement)),
    }
}

impl PathFormula {
    pub fn next(f: Formula) -> Self {
        PathFormula::Next(f)
    }

    pub fn until(a: Formula, b: Formula) -> Self {
        PathFormula::Until(a, b)
    }

    pub fn globally(f: Formula) -> Self {
        PathFormula::Globally(f)
    }

    /// `F φ` abbreviates `true U φ`.
    pub fn eventually(f: Formula) -> Self {
        PathFormula::Until(tt(), f)
    }

    /// Path conjunction, normalized to a left-nested chain.
    pub fn and(a: PathFormula, b: PathFormula) -> Self {
        let mut items: Vec<PathFormula> = a.conjuncts().into_iter().cloned().collect();
        items.extend(b.conjuncts().into_iter().cloned());
        Self::conj(items).expect("non-empty")
    }

    /// Left-nested conjunction of the given goals; `None` if empty.
    pub fn conj<I: IntoIterator<Item = PathFormula>>(items: I) -> Option<Self> {
        let mut flat = Vec::new();
        for it in items {
            flat.extend(it.conjuncts().into_iter().cloned());
        }
        flat.into_iter()
            .reduce(|acc, x| PathFormula::And(Arc::new(acc), Arc::new(x)))
    }

    /// Leaves of the conjunction tree, left to right.
    pub fn conjuncts(&self) -> Vec<&PathFormula> {
        match self {
            PathFormula::And(a, b) => {
                let mut v = a.conjuncts();
                v.extend(b.conjuncts());
                v
            }
            other => vec![other],
        }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, PathFormula::Next(f) if f.is_true())
    }

    pub fn is_next(&self) -> bool {
        matches!(self, PathFormula::Next(_))
    }

    /// True iff every conjunct is a nexttime goal.
    pub fn is_all_next(&self) -> bool {
        self.conjuncts().iter().all(|c| c.is_next())
    }

    pub fn has_path_and(&self) -> bool {
        matches!(self, PathFormula::And(..))
    }

    pub fn state_operands(&self) -> Vec<&Formula> {
        match self {
            PathFormula::Next(a) | PathFormula::Globally(a) => vec![a],
            PathFormula::Until(a, b) => vec![a, b],
            PathFormula::And(a, b) => {
                let mut v = a.state_operands();
                v.extend(b.state_operands());
                v
            }
        }
    }

    pub fn map_bodies(&self, f: &mut dyn FnMut(&Formula) -> Formula) -> PathFormula {
        match self {
            PathFormula::Next(a) => PathFormula::Next(f(a)),
            PathFormula::Globally(a) => PathFormula::Globally(f(a)),
            PathFormula::Until(a, b) => {
                let a = f(a);
                PathFormula::Until(a, f(b))
            }
            PathFormula::And(a, b) => {
                let a = a.map_bodies(f);
                PathFormula::and(a, b.map_bodies(f))
            }
        }
    }
}

/// Classification of goal assignments by the shape of their goals.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum GoalKind {
    Nexttime,
    LongTermTypeU,
    LongTermTypeG,
    Mixed,
}

impl GoalAssignment {
    pub fn top() -> Self {
        Self::default()
    }

    /// Builds an assignment; trivial goals are dropped and later entries for
    /// the same coalition overwrite earlier ones.
    pub fn from_entries<I: IntoIterator<Item = (Coalition, PathFormula)>>(entries: I) -> Self {
        let mut ga = Self::default();
        for (c, g) in entries {
            ga = ga.update(c, g);
        }
        ga
    }

    pub fn single(c: Coalition, g: PathFormula) -> Self {
        Self::from_entries([(c, g)])
    }

    pub fn get(&self, c: &Coalition) -> Option<&PathFormula> {
        self.entries.get(c)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Coalition, &PathFormula)> + '_ {
        self.entries.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Coalition> + '_ {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `γ[C ↦ θ]`; a trivial θ removes C from the support.
    pub fn update(&self, c: Coalition, g: PathFormula) -> Self {
        let mut entries = self.entries.clone();
        if g.is_trivial() {
            entries.remove(&c);
        } else {
            entries.insert(c, g);
        }
        GoalAssignment { entries }
    }

    /// `γ∖C`.
    pub fn remove(&self, c: &Coalition) -> Self {
        let mut entries = self.entries.clone();
        entries.remove(c);
        GoalAssignment { entries }
    }

    /// `γ|_C`: keeps entries whose key is a subset of C.
    pub fn restrict(&self, c: &Coalition) -> Self {
        GoalAssignment {
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| k.is_subset(c))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
        }
    }

    /// Splits into the long-term (U/G) part and the nexttime part.
    pub fn split_lfor_xfor(&self) -> (GoalAssignment, GoalAssignment) {
        let mut lfor = BTreeMap::new();
        let mut xfor = BTreeMap::new();
        for (c, g) in &self.entries {
            let (x, l): (Vec<_>, Vec<_>) = g.conjuncts().into_iter().cloned().partition(PathFormula::is_next);
            if let Some(l) = PathFormula::conj(l) {
                lfor.insert(c.clone(), l);
            }
            if let Some(x) = PathFormula::conj(x) {
                if !x.is_trivial() {
                    xfor.insert(c.clone(), x);
                }
            }
        }
        (GoalAssignment { entries: lfor }, GoalAssignment { entries: xfor })
    }

    pub fn classify(&self) -> GoalKind {
        let mut next = false;
        let mut until = false;
        let mut glob = false;
        for g in self.entries.values() {
            for c in g.conjuncts() {
                match c {
                    PathFormula::Next(_) => next = true,
                    PathFormula::Until(..) => until = true,
                    PathFormula::Globally(_) => glob = true,
                    PathFormula::And(..) => unreachable!("conjuncts are leaves"),
                }
            }
        }
        match (next, until, glob) {
            (_, false, false) => GoalKind::Nexttime,
            (false, true, _) => GoalKind::LongTermTypeU,
            (false, false, true) => GoalKind::LongTermTypeG,
            _ => GoalKind::Mixed,
        }
    }

    pub fn is_long_term(&self) -> bool {
        matches!(self.classify(), GoalKind::LongTermTypeU | GoalKind::LongTermTypeG)
    }

    /// Union of all supported coalitions.
    pub fn support_union(&self) -> Coalition {
        self.entries.keys().fold(Coalition::empty(), |acc, c| acc.union(c))
    }

    pub fn has_path_and(&self) -> bool {
        self.entries.values().any(PathFormula::has_path_and)
    }

    pub fn map_bodies(&self, f: &mut dyn FnMut(&Formula) -> Formula) -> Self {
        Self::from_entries(self.entries.iter().map(|(c, g)| (c.clone(), g.map_bodies(f))))
    }

    /// For each supported C, the conjunction of all goals of subsets of C.
    pub fn monotone_closure(&self) -> Self {
        Self::from_entries(self.entries.keys().map(|c| {
            let mut parts = vec![self.entries[c].clone()];
            parts.extend(
                self.entries
                    .iter()
                    .filter(|(k, _)| *k != c && k.is_subset(c))
                    .map(|(_, g)| g.clone()),
            );
            (c.clone(), PathFormula::conj(parts).expect("non-empty"))
        }))
    }
}
