//! Brute-force language semantics, bounded by tree depth.
//!
//! This is the oracle every position function and the automaton are checked
//! against, so it follows the set-level definitions directly: c-products by
//! tree substitution and c-closures by iterating `L^{(n+1)_c} = L^{n_c} ∪ L ·_c L^{n_c}`
//! until nothing new fits under the depth bound.

use std::collections::BTreeSet;

use crate::alphabet::Symbol;
use crate::expr::{Label, TreeExpr};
use crate::tree::GroundTree;

/// Result of a bounded enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration<L> {
    pub trees: BTreeSet<GroundTree<L>>,
    /// Set when some intermediate language hit the count cap; `trees` is then
    /// only a subset of the bounded language.
    pub truncated: bool,
}

impl<L: Label> Enumeration<L> {
    pub fn roots(&self) -> BTreeSet<String> {
        self.trees.iter().map(GroundTree::root_name).collect()
    }

    pub fn leaves(&self) -> BTreeSet<Symbol> {
        self.trees.iter().flat_map(|t| t.leaves()).collect()
    }
}

/// `{ t ∈ ⟦E⟧ | depth(t) ≤ max_depth }`, capped at `max_count` trees per
/// intermediate language.
pub fn enumerate_language<L: Label>(
    expr: &TreeExpr<L>,
    max_depth: usize,
    max_count: usize,
) -> Enumeration<L> {
    assert!(max_depth >= 1 && max_count >= 1, "bounds must be positive");
    let mut ctx = Ctx {
        cap: max_count,
        truncated: false,
    };
    let trees = ctx.lang(expr, max_depth);
    Enumeration {
        trees,
        truncated: ctx.truncated,
    }
}

struct Ctx {
    cap: usize,
    truncated: bool,
}

impl Ctx {
    fn clip<T: Ord>(&mut self, set: &mut BTreeSet<T>) {
        if set.len() > self.cap {
            self.truncated = true;
            while set.len() > self.cap {
                set.pop_last();
            }
        }
    }

    fn lang<L: Label>(&mut self, e: &TreeExpr<L>, depth: usize) -> BTreeSet<GroundTree<L>> {
        if depth == 0 {
            return BTreeSet::new();
        }
        let mut out = match e {
            TreeExpr::Empty => BTreeSet::new(),
            TreeExpr::Const(c) => BTreeSet::from([GroundTree::Leaf(c.clone())]),
            TreeExpr::Apply(l, cs) => {
                let options: Vec<Vec<GroundTree<L>>> = cs
                    .iter()
                    .map(|c| self.lang(c, depth - 1).into_iter().collect())
                    .collect();
                let mut out = BTreeSet::new();
                self.product_into(&options, &mut |children| {
                    out.insert(GroundTree::Node(l.clone(), children));
                });
                out
            }
            TreeExpr::Sum(l, r) => {
                let mut out = self.lang(l, depth);
                out.extend(self.lang(r, depth));
                out
            }
            TreeExpr::Product(l, c, r) => {
                let left = self.lang(l, depth);
                let right = ByDepth::new(self.lang(r, depth));
                self.c_product(&left, c, &right, depth)
            }
            TreeExpr::Star(body, c) => {
                let base = self.lang(body, depth);
                let mut acc = BTreeSet::from([GroundTree::Leaf(c.clone())]);
                loop {
                    let step = self.c_product(&base, c, &ByDepth::new(acc.clone()), depth);
                    let before = acc.len();
                    acc.extend(step);
                    self.clip(&mut acc);
                    if acc.len() == before {
                        break;
                    }
                }
                acc
            }
        };
        self.clip(&mut out);
        out
    }

    fn c_product<L: Label>(
        &mut self,
        left: &BTreeSet<GroundTree<L>>,
        c: &Symbol,
        right: &ByDepth<L>,
        depth: usize,
    ) -> BTreeSet<GroundTree<L>> {
        let mut out = BTreeSet::new();
        for t in left {
            for s in self.substitute(t, c, right, depth) {
                out.insert(s);
            }
            if out.len() > self.cap {
                break;
            }
        }
        self.clip(&mut out);
        out
    }

    /// `t{c ← right}` restricted to results of depth ≤ `budget`.
    fn substitute<L: Label>(
        &mut self,
        t: &GroundTree<L>,
        c: &Symbol,
        right: &ByDepth<L>,
        budget: usize,
    ) -> Vec<GroundTree<L>> {
        if budget == 0 {
            return Vec::new();
        }
        match t {
            GroundTree::Leaf(d) if d == c => right.up_to(budget).cloned().collect(),
            GroundTree::Leaf(_) => vec![t.clone()],
            GroundTree::Node(l, cs) => {
                if !t.has_leaf(c) {
                    return if t.depth() <= budget {
                        vec![t.clone()]
                    } else {
                        Vec::new()
                    };
                }
                let options: Vec<Vec<GroundTree<L>>> = cs
                    .iter()
                    .map(|ch| self.substitute(ch, c, right, budget - 1))
                    .collect();
                let mut out = Vec::new();
                self.product_into(&options, &mut |children| {
                    out.push(GroundTree::Node(l.clone(), children));
                });
                out
            }
        }
    }

    /// Cartesian product of the slots, stopping once the cap is exceeded.
    fn product_into<T: Clone>(&mut self, options: &[Vec<T>], emit: &mut impl FnMut(Vec<T>)) {
        if options.iter().any(Vec::is_empty) {
            return;
        }
        let mut idx = vec![0usize; options.len()];
        let mut emitted = 0usize;
        loop {
            if emitted > self.cap {
                self.truncated = true;
                return;
            }
            emit(
                idx.iter()
                    .zip(options)
                    .map(|(&i, o)| o[i].clone())
                    .collect(),
            );
            emitted += 1;
            let mut slot = options.len();
            loop {
                if slot == 0 {
                    return;
                }
                slot -= 1;
                idx[slot] += 1;
                if idx[slot] < options[slot].len() {
                    break;
                }
                idx[slot] = 0;
            }
        }
    }
}

/// A language sorted by tree depth for bounded substitution.
struct ByDepth<L> {
    trees: Vec<(usize, GroundTree<L>)>,
}

impl<L: Label> ByDepth<L> {
    fn new(set: BTreeSet<GroundTree<L>>) -> Self {
        let mut trees: Vec<_> = set.into_iter().map(|t| (t.depth(), t)).collect();
        trees.sort_by_key(|(d, _)| *d);
        ByDepth { trees }
    }

    fn up_to(&self, depth: usize) -> impl Iterator<Item = &GroundTree<L>> {
        let end = self.trees.partition_point(|(d, _)| *d <= depth);
        self.trees[..end].iter().map(|(_, t)| t)
    }
}
