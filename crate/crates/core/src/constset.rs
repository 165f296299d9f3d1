//! Fixed-size membership arrays over an enumeration of the constants.

use std::collections::BTreeMap;

use crate::alphabet::Symbol;

/// Dense numbering of the constants of one expression, in name order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConstIndex {
    names: Vec<Symbol>,
    ids: BTreeMap<Symbol, usize>,
}

impl ConstIndex {
    pub fn new(constants: impl IntoIterator<Item = Symbol>) -> Self {
        let names: Vec<Symbol> = constants
            .into_iter()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let ids = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        ConstIndex { names, ids }
    }

    pub fn id(&self, c: &Symbol) -> Option<usize> {
        self.ids.get(c).copied()
    }

    pub fn name(&self, id: usize) -> &Symbol {
        &self.names[id]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn empty_set(&self) -> ConstSet {
        ConstSet::with_capacity(self.len())
    }

    pub fn to_symbols(&self, set: &ConstSet) -> std::collections::BTreeSet<Symbol> {
        set.iter().map(|i| self.names[i].clone()).collect()
    }
}

/// Bit array indexed by [`ConstIndex`] ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ConstSet {
    words: Vec<u64>,
}

impl ConstSet {
    pub fn with_capacity(bits: usize) -> Self {
        ConstSet {
            words: vec![0; bits.div_ceil(64)],
        }
    }

    pub fn insert(&mut self, id: usize) {
        self.words[id / 64] |= 1 << (id % 64);
    }

    /// Removes `id`, returning whether it was present.
    pub fn remove(&mut self, id: usize) -> bool {
        let bit = 1 << (id % 64);
        let was = self.words[id / 64] & bit != 0;
        self.words[id / 64] &= !bit;
        was
    }

    pub fn contains(&self, id: usize) -> bool {
        self.words[id / 64] & (1 << (id % 64)) != 0
    }

    pub fn union_with(&mut self, other: &ConstSet) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= *o;
        }
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of array cells (bits) this set occupies.
    pub fn cells(&self) -> usize {
        self.words.len() * 64
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64)
                .filter(move |b| w & (1 << b) != 0)
                .map(move |b| wi * 64 + b)
        })
    }
}
