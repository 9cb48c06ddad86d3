use fixedbitset::FixedBitSet;

use crate::cgm::Cgm;

/// A set of states, indexed in the model's state order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Extension(FixedBitSet);

impl Extension {
    pub fn empty(n: usize) -> Self {
        Extension(FixedBitSet::with_capacity(n))
    }

    pub fn full(n: usize) -> Self {
        let mut b = FixedBitSet::with_capacity(n);
        b.insert_range(..);
        Extension(b)
    }

    pub fn from_states<I: IntoIterator<Item = usize>>(n: usize, states: I) -> Self {
        let mut e = Extension::empty(n);
        for s in states {
            e.insert(s);
        }
        e
    }

    /// Size of the underlying state space.
    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, s: usize) -> bool {
        self.0.contains(s)
    }

    pub fn insert(&mut self, s: usize) {
        self.0.insert(s);
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn complement(&self) -> Self {
        let mut b = self.0.clone();
        b.toggle_range(..);
        Extension(b)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut b = self.0.clone();
        b.union_with(&other.0);
        Extension(b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut b = self.0.clone();
        b.intersect_with(&other.0);
        Extension(b)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Member state ids in model order.
    pub fn ids(&self, m: &Cgm) -> Vec<String> {
        self.iter().map(|s| m.state_id(s).to_string()).collect()
    }
}
