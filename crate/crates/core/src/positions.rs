//! Reference computations of First, Last and Follow on linearized expressions.
//!
//! Two families live here. The `*_naive` functions follow the inductive
//! First/Follow rules directly and serve as ground truth. The decomposed
//! functions split each set into its constant part (`first0`, `last_follow`)
//! and its rank ≥ 1 part (`first_sup`, `follow_sup`) and compute the parts by
//! their own recurrences. Both are plain recursions over the syntax tree; the
//! fast versions are in [`crate::zpc`].
//!
//! Every entry point requires a star-normalized expression.

use std::collections::BTreeSet;
use std::fmt;

use crate::alphabet::Symbol;
use crate::error::{Error, Result};
use crate::expr::{Position, TreeExpr};
use crate::linear::LinearizedExpr;
use crate::MarkedExpr;

/// A set of positions, split into constants and marked positions.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct PositionSet {
    pub constants: BTreeSet<Symbol>,
    pub marked: BTreeSet<Position>,
}

impl PositionSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parts(
        constants: impl IntoIterator<Item = Symbol>,
        marked: impl IntoIterator<Item = Position>,
    ) -> Self {
        PositionSet {
            constants: constants.into_iter().collect(),
            marked: marked.into_iter().collect(),
        }
    }

    /// Builds a set from printed names: marked positions end in digits.
    pub fn from_names(names: &[&str]) -> Self {
        let mut s = Self::new();
        for n in names {
            match Position::parse(n) {
                Some(p) => s.marked.insert(p),
                None => s.constants.insert(Symbol::new(n)),
            };
        }
        s
    }

    pub fn is_empty(&self) -> bool {
        self.constants.is_empty() && self.marked.is_empty()
    }

    pub fn len(&self) -> usize {
        self.constants.len() + self.marked.len()
    }

    pub fn has_constant(&self, c: &Symbol) -> bool {
        self.constants.contains(c)
    }

    pub fn union_with(&mut self, other: &PositionSet) {
        self.constants.extend(other.constants.iter().cloned());
        self.marked.extend(other.marked.iter().cloned());
    }

    /// `S ·_c S'`: if `c ∈ S`, drop `c` and add `S'`; otherwise keep `S`.
    pub fn c_product(mut self, c: &Symbol, next: &PositionSet) -> PositionSet {
        if self.constants.remove(c) {
            self.union_with(next);
        }
        self
    }

    /// Printed names in canonical order: constants first, then marks.
    pub fn names(&self) -> Vec<String> {
        self.constants
            .iter()
            .map(|c| c.to_string())
            .chain(self.marked.iter().map(|p| p.to_string()))
            .collect()
    }
}

impl fmt::Display for PositionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names().join(", "))
    }
}

impl fmt::Debug for PositionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn require_normalized(lin: &LinearizedExpr) {
    assert!(
        lin.is_star_normalized(),
        "position functions need a star-normalized expression"
    );
}

fn slot_precondition(lin: &LinearizedExpr, p: &Position, k: usize) -> Result<()> {
    if !lin.is_star_normalized() {
        return Err(Error::NotNormalized);
    }
    lin.check_slot(p, k).map(|_| ())
}

/// `First(Ē)`: roots of the trees of the language.
pub fn first_naive(lin: &LinearizedExpr) -> PositionSet {
    require_normalized(lin);
    first(lin.expr())
}

/// `Last(Ē)`: constants occurring as leaves of trees of the language.
pub fn last_naive(lin: &LinearizedExpr) -> BTreeSet<Symbol> {
    require_normalized(lin);
    last(lin.expr())
}

/// `Follow(Ē, f_j, k)`: what can sit as `k`-th child of `f_j`.
pub fn follow_naive(lin: &LinearizedExpr, p: &Position, k: usize) -> Result<PositionSet> {
    slot_precondition(lin, p, k)?;
    Ok(follow(lin.expr(), p, k))
}

/// Constant part of `First(Ē)`.
pub fn first0(lin: &LinearizedExpr) -> BTreeSet<Symbol> {
    require_normalized(lin);
    first_constants(lin.expr())
}

/// Rank ≥ 1 part of `First(Ē)`.
pub fn first_sup(lin: &LinearizedExpr) -> BTreeSet<Position> {
    require_normalized(lin);
    first_marked(lin.expr())
}

/// Constant part of `Follow(Ē, f_j, k)`.
pub fn last_follow(lin: &LinearizedExpr, p: &Position, k: usize) -> Result<BTreeSet<Symbol>> {
    slot_precondition(lin, p, k)?;
    Ok(las(lin.expr(), p, k))
}

/// Rank ≥ 1 part of `Follow(Ē, f_j, k)`.
pub fn follow_sup(lin: &LinearizedExpr, p: &Position, k: usize) -> Result<BTreeSet<Position>> {
    slot_precondition(lin, p, k)?;
    Ok(fw(lin.expr(), p, k))
}

/// `first0 ⊎ first_sup`.
pub fn first_decomposed(lin: &LinearizedExpr) -> PositionSet {
    PositionSet {
        constants: first0(lin),
        marked: first_sup(lin),
    }
}

/// `last_follow ⊎ follow_sup`.
pub fn follow_decomposed(lin: &LinearizedExpr, p: &Position, k: usize) -> Result<PositionSet> {
    Ok(PositionSet {
        constants: last_follow(lin, p, k)?,
        marked: follow_sup(lin, p, k)?,
    })
}

pub(crate) fn first(e: &MarkedExpr) -> PositionSet {
    match e {
        TreeExpr::Empty => PositionSet::new(),
        TreeExpr::Const(a) => PositionSet::from_parts([a.clone()], []),
        TreeExpr::Apply(p, _) => PositionSet::from_parts([], [p.clone()]),
        TreeExpr::Sum(l, r) => {
            let mut s = first(l);
            s.union_with(&first(r));
            s
        }
        TreeExpr::Product(l, c, r) => {
            let mut s = first(l);
            if l.contains_constant(c) {
                s.constants.remove(c);
                s.union_with(&first(r));
            }
            s
        }
        TreeExpr::Star(body, _) => first(body),
    }
}

pub(crate) fn last(e: &MarkedExpr) -> BTreeSet<Symbol> {
    match e {
        TreeExpr::Empty => BTreeSet::new(),
        TreeExpr::Const(a) => BTreeSet::from([a.clone()]),
        TreeExpr::Apply(_, cs) => cs.iter().flat_map(last).collect(),
        TreeExpr::Sum(l, r) => {
            let mut s = last(l);
            s.extend(last(r));
            s
        }
        TreeExpr::Product(l, c, r) => {
            let mut s = last(l);
            if s.remove(c) {
                s.extend(last(r));
            }
            s
        }
        TreeExpr::Star(body, c) => {
            let mut s = last(body);
            s.insert(c.clone());
            s
        }
    }
}

fn follow(e: &MarkedExpr, p: &Position, k: usize) -> PositionSet {
    match e {
        TreeExpr::Empty | TreeExpr::Const(_) => PositionSet::new(),
        TreeExpr::Apply(g, cs) => {
            if g == p {
                first(&cs[k - 1])
            } else {
                cs.iter()
                    .find(|c| c.contains_label(p))
                    .map_or_else(PositionSet::new, |c| follow(c, p, k))
            }
        }
        TreeExpr::Sum(l, r) => {
            if l.contains_label(p) {
                follow(l, p, k)
            } else if r.contains_label(p) {
                follow(r, p, k)
            } else {
                PositionSet::new()
            }
        }
        TreeExpr::Product(l, c, r) => {
            if l.contains_label(p) {
                follow(l, p, k).c_product(c, &first(r))
            } else if r.contains_label(p) && last(l).contains(c) {
                follow(r, p, k)
            } else {
                PositionSet::new()
            }
        }
        TreeExpr::Star(body, c) => {
            let mut s = follow(body, p, k);
            if s.has_constant(c) {
                s.union_with(&first(body));
            }
            s
        }
    }
}

pub(crate) fn first_constants(e: &MarkedExpr) -> BTreeSet<Symbol> {
    match e {
        TreeExpr::Empty | TreeExpr::Apply(..) => BTreeSet::new(),
        TreeExpr::Const(a) => BTreeSet::from([a.clone()]),
        TreeExpr::Sum(l, r) => {
            let mut s = first_constants(l);
            s.extend(first_constants(r));
            s
        }
        TreeExpr::Product(l, c, r) => {
            let mut s = first_constants(l);
            if l.contains_constant(c) {
                s.remove(c);
                s.extend(first_constants(r));
            }
            s
        }
        TreeExpr::Star(body, _) => first_constants(body),
    }
}

pub(crate) fn first_marked(e: &MarkedExpr) -> BTreeSet<Position> {
    match e {
        TreeExpr::Empty | TreeExpr::Const(_) => BTreeSet::new(),
        TreeExpr::Apply(p, _) => BTreeSet::from([p.clone()]),
        TreeExpr::Sum(l, r) => {
            let mut s = first_marked(l);
            s.extend(first_marked(r));
            s
        }
        TreeExpr::Product(l, c, r) => {
            let mut s = first_marked(l);
            if l.contains_constant(c) {
                s.extend(first_marked(r));
            }
            s
        }
        TreeExpr::Star(body, _) => first_marked(body),
    }
}

fn las(e: &MarkedExpr, p: &Position, k: usize) -> BTreeSet<Symbol> {
    match e {
        TreeExpr::Empty | TreeExpr::Const(_) => BTreeSet::new(),
        TreeExpr::Apply(g, cs) => {
            if g == p {
                first_constants(&cs[k - 1])
            } else {
                cs.iter()
                    .find(|c| c.contains_label(p))
                    .map_or_else(BTreeSet::new, |c| las(c, p, k))
            }
        }
        TreeExpr::Sum(l, r) => {
            if l.contains_label(p) {
                las(l, p, k)
            } else if r.contains_label(p) {
                las(r, p, k)
            } else {
                BTreeSet::new()
            }
        }
        TreeExpr::Product(l, c, r) => {
            if l.contains_label(p) {
                let mut s = las(l, p, k);
                if s.remove(c) {
                    s.extend(first_constants(r));
                }
                s
            } else if r.contains_label(p) && last(l).contains(c) {
                las(r, p, k)
            } else {
                BTreeSet::new()
            }
        }
        TreeExpr::Star(body, c) => {
            let mut s = las(body, p, k);
            if s.remove(c) {
                s.extend(first_constants(body));
            }
            s
        }
    }
}

fn fw(e: &MarkedExpr, p: &Position, k: usize) -> BTreeSet<Position> {
    match e {
        TreeExpr::Empty | TreeExpr::Const(_) => BTreeSet::new(),
        TreeExpr::Apply(g, cs) => {
            if g == p {
                first_marked(&cs[k - 1])
            } else {
                cs.iter()
                    .find(|c| c.contains_label(p))
                    .map_or_else(BTreeSet::new, |c| fw(c, p, k))
            }
        }
        TreeExpr::Sum(l, r) => {
            if l.contains_label(p) {
                fw(l, p, k)
            } else if r.contains_label(p) {
                fw(r, p, k)
            } else {
                BTreeSet::new()
            }
        }
        TreeExpr::Product(l, c, r) => {
            if l.contains_label(p) {
                let mut s = fw(l, p, k);
                if las(l, p, k).contains(c) {
                    s.extend(first_marked(r));
                }
                s
            } else if r.contains_label(p) && last(l).contains(c) {
                fw(r, p, k)
            } else {
                BTreeSet::new()
            }
        }
        TreeExpr::Star(body, c) => {
            let mut s = fw(body, p, k);
            if las(body, p, k).contains(c) {
                s.extend(first_marked(body));
            }
            s
        }
    }
}
