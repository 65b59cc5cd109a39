use std::collections::BTreeMap;

use serde::Serialize;

use super::index::Subset;

/// Symbols of an alphabet of size `m` are `0..m`; boolean arrays use `{0, 1}`.
pub type Symbol = u32;

/// The event `⋂_{s∈ℱ} [X_s = a_s]`. Two different symbols for the same index
/// make the event empty rather than invalid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EventQuery {
    constraints: BTreeMap<Subset, Symbol>,
    contradictory: bool,
}

impl EventQuery {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Subset, Symbol)>) -> Self {
        let mut q = Self::new();
        for (s, a) in pairs {
            q.insert(s, a);
        }
        q
    }

    /// Every index of `family` constrained to `a`.
    pub fn all(family: &[Subset], a: Symbol) -> Self {
        Self::from_pairs(family.iter().map(|&s| (s, a)))
    }

    pub fn insert(&mut self, s: Subset, a: Symbol) {
        if let Some(&old) = self.constraints.get(&s) {
            if old != a {
                self.contradictory = true;
            }
            return;
        }
        self.constraints.insert(s, a);
    }

    pub fn with(mut self, s: Subset, a: Symbol) -> Self {
        self.insert(s, a);
        self
    }

    pub fn is_contradictory(&self) -> bool {
        self.contradictory
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn get(&self, s: Subset) -> Option<Symbol> {
        self.constraints.get(&s).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Subset, Symbol)> + '_ {
        self.constraints.iter().map(|(&s, &a)| (s, a))
    }

    pub fn keys(&self) -> Vec<Subset> {
        self.constraints.keys().copied().collect()
    }

    /// `∪ℱ`
    pub fn support(&self) -> Subset {
        self.constraints
            .keys()
            .fold(Subset::EMPTY, |a, &b| a.union(b))
    }

    /// Indices constrained to `a`.
    pub fn keys_with(&self, a: Symbol) -> Vec<Subset> {
        self.iter()
            .filter(|&(_, b)| b == a)
            .map(|(s, _)| s)
            .collect()
    }
}
