//! Ground trees over a ranked alphabet.

use std::collections::BTreeSet;
use std::fmt;

use crate::alphabet::{RankedAlphabet, Symbol};
use crate::error::{Error, Result};
use crate::expr::Label;

/// A ground tree: a constant leaf or a labelled node with children.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum GroundTree<L = Symbol> {
    Leaf(Symbol),
    Node(L, Vec<GroundTree<L>>),
}

impl<L: Label> GroundTree<L> {
    pub fn leaf(name: &str) -> Self {
        GroundTree::Leaf(Symbol::new(name))
    }

    pub fn node(label: L, children: Vec<GroundTree<L>>) -> Self {
        GroundTree::Node(label, children)
    }

    /// A constant has depth 1.
    pub fn depth(&self) -> usize {
        match self {
            GroundTree::Leaf(_) => 1,
            GroundTree::Node(_, cs) => 1 + cs.iter().map(GroundTree::depth).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            GroundTree::Leaf(_) => 1,
            GroundTree::Node(_, cs) => 1 + cs.iter().map(GroundTree::size).sum::<usize>(),
        }
    }

    pub fn root_name(&self) -> String {
        match self {
            GroundTree::Leaf(c) => c.to_string(),
            GroundTree::Node(l, _) => l.to_string(),
        }
    }

    /// Constants occurring as leaves.
    pub fn leaves(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut BTreeSet<Symbol>) {
        match self {
            GroundTree::Leaf(c) => {
                out.insert(c.clone());
            }
            GroundTree::Node(_, cs) => cs.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    /// Whether a leaf `c` occurs anywhere.
    pub fn has_leaf(&self, c: &Symbol) -> bool {
        match self {
            GroundTree::Leaf(d) => d == c,
            GroundTree::Node(_, cs) => cs.iter().any(|t| t.has_leaf(c)),
        }
    }

    /// Calls `visit` on every subtree, root included.
    pub fn for_each_subtree<'a, F: FnMut(&'a GroundTree<L>)>(&'a self, visit: &mut F) {
        visit(self);
        if let GroundTree::Node(_, cs) = self {
            for c in cs {
                c.for_each_subtree(visit);
            }
        }
    }

    pub fn unmark(&self) -> GroundTree<Symbol> {
        match self {
            GroundTree::Leaf(c) => GroundTree::Leaf(c.clone()),
            GroundTree::Node(l, cs) => GroundTree::Node(
                l.base().clone(),
                cs.iter().map(GroundTree::unmark).collect(),
            ),
        }
    }

    /// Checks that every node's arity matches its rank in `alphabet`.
    pub fn validate(&self, alphabet: &RankedAlphabet) -> Result<()> {
        match self {
            GroundTree::Leaf(c) => match alphabet.rank(c.as_str()) {
                Some(0) => Ok(()),
                Some(rank) => Err(Error::ArityMismatch {
                    symbol: c.clone(),
                    rank,
                    found: 0,
                }),
                None => Err(Error::UnknownTreeSymbol(c.to_string())),
            },
            GroundTree::Node(l, cs) => {
                let f = l.base();
                match alphabet.rank(f.as_str()) {
                    Some(rank) if rank == cs.len() => {
                        cs.iter().try_for_each(|c| c.validate(alphabet))
                    }
                    Some(rank) => Err(Error::ArityMismatch {
                        symbol: f.clone(),
                        rank,
                        found: cs.len(),
                    }),
                    None => Err(Error::UnknownTreeSymbol(f.to_string())),
                }
            }
        }
    }

    /// The tree substitution `t{c ← L}`: every `c` leaf is replaced,
    /// independently, by a tree of `lang`.
    pub fn substitute(
        &self,
        c: &Symbol,
        lang: &BTreeSet<GroundTree<L>>,
    ) -> BTreeSet<GroundTree<L>> {
        match self {
            GroundTree::Leaf(d) if d == c => lang.clone(),
            GroundTree::Leaf(_) => BTreeSet::from([self.clone()]),
            GroundTree::Node(l, cs) => {
                let options: Vec<Vec<GroundTree<L>>> = cs
                    .iter()
                    .map(|t| t.substitute(c, lang).into_iter().collect())
                    .collect();
                cartesian(&options)
                    .into_iter()
                    .map(|children| GroundTree::Node(l.clone(), children))
                    .collect()
            }
        }
    }
}

/// All ways of picking one element per slot.
pub(crate) fn cartesian<T: Clone>(options: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut acc: Vec<Vec<T>> = vec![Vec::with_capacity(options.len())];
    for slot in options {
        let mut next = Vec::with_capacity(acc.len() * slot.len());
        for prefix in &acc {
            for choice in slot {
                let mut v = prefix.clone();
                v.push(choice.clone());
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

impl<L: Label> fmt::Display for GroundTree<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundTree::Leaf(c) => write!(f, "{c}"),
            GroundTree::Node(l, cs) => {
                write!(f, "{l}(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}
