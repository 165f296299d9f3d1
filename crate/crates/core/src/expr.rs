//! Regular tree expressions and their syntactic queries.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::Hash;

use crate::alphabet::{RankedAlphabet, Symbol};
use crate::error::{Error, Result};

/// Label of an `Apply` node: either a plain symbol or a marked position.
pub trait Label: Clone + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync {
    /// The unmarked alphabet symbol (the `h` image).
    fn base(&self) -> &Symbol;
}

impl Label for Symbol {
    fn base(&self) -> &Symbol {
        self
    }
}

/// A marked occurrence `f_j` of a symbol of rank at least one.
///
/// Ordering is by mark index first, which is the canonical order used for
/// printing position sets.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position {
    pub mark: usize,
    pub symbol: Symbol,
}

impl Position {
    pub fn new(symbol: impl Into<Symbol>, mark: usize) -> Self {
        Position {
            mark,
            symbol: symbol.into(),
        }
    }

    /// Parses `f3` style names: a symbol name followed by a decimal mark.
    pub fn parse(text: &str) -> Option<Position> {
        let split = text.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        if split == 0 || split == text.len() {
            return None;
        }
        let mark = text[split..].parse().ok()?;
        Some(Position::new(&text[..split], mark))
    }
}

impl Label for Position {
    fn base(&self) -> &Symbol {
        &self.symbol
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.symbol, self.mark)
    }
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.symbol, self.mark)
    }
}

/// Syntax tree of a regular tree expression.
///
/// `Product(l, c, r)` is the c-product `l ·_c r`; `Star(e, c)` is the
/// c-closure `e^{*_c}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum TreeExpr<L = Symbol> {
    Empty,
    Const(Symbol),
    Apply(L, Vec<TreeExpr<L>>),
    Sum(Box<TreeExpr<L>>, Box<TreeExpr<L>>),
    Product(Box<TreeExpr<L>>, Symbol, Box<TreeExpr<L>>),
    Star(Box<TreeExpr<L>>, Symbol),
}

/// Size figures of an expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Measure {
    /// Node count of the syntax tree.
    pub size: usize,
    /// Occurrences of rank ≥ 1 symbols.
    pub width: usize,
    /// Occurrences of constant leaves; some authors fold these into the width.
    pub constant_leaves: usize,
}

impl<L: Label> TreeExpr<L> {
    pub fn constant(name: &str) -> Self {
        TreeExpr::Const(Symbol::new(name))
    }

    pub fn apply(label: L, children: Vec<TreeExpr<L>>) -> Self {
        TreeExpr::Apply(label, children)
    }

    pub fn sum(left: Self, right: Self) -> Self {
        TreeExpr::Sum(Box::new(left), Box::new(right))
    }

    pub fn product(left: Self, c: &str, right: Self) -> Self {
        TreeExpr::Product(Box::new(left), Symbol::new(c), Box::new(right))
    }

    pub fn star(body: Self, c: &str) -> Self {
        TreeExpr::Star(Box::new(body), Symbol::new(c))
    }

    /// Direct subexpressions, left to right.
    pub fn children(&self) -> Vec<&TreeExpr<L>> {
        match self {
            TreeExpr::Empty | TreeExpr::Const(_) => Vec::new(),
            TreeExpr::Apply(_, cs) => cs.iter().collect(),
            TreeExpr::Sum(l, r) | TreeExpr::Product(l, _, r) => vec![l, r],
            TreeExpr::Star(e, _) => vec![e],
        }
    }

    pub fn measure(&self) -> Measure {
        let mut m = Measure {
            size: 0,
            width: 0,
            constant_leaves: 0,
        };
        self.walk(&mut |e| {
            m.size += 1;
            match e {
                TreeExpr::Apply(..) => m.width += 1,
                TreeExpr::Const(_) => m.constant_leaves += 1,
                _ => {}
            }
        });
        m
    }

    pub fn size(&self) -> usize {
        self.measure().size
    }

    pub fn width(&self) -> usize {
        self.measure().width
    }

    /// Preorder traversal.
    pub fn walk<'a, F: FnMut(&'a TreeExpr<L>)>(&'a self, visit: &mut F) {
        let mut stack = vec![self];
        while let Some(e) = stack.pop() {
            visit(e);
            let cs = e.children();
            stack.extend(cs.into_iter().rev());
        }
    }

    /// Apply labels in preorder (left to right in the syntax tree).
    pub fn labels(&self) -> Vec<&L> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let TreeExpr::Apply(l, _) = e {
                out.push(l);
            }
        });
        out
    }

    /// Every constant mentioned, including product and star annotations.
    pub fn constants(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.walk(&mut |e| match e {
            TreeExpr::Const(c) | TreeExpr::Product(_, c, _) | TreeExpr::Star(_, c) => {
                out.insert(c.clone());
            }
            _ => {}
        });
        out
    }

    pub fn contains_label(&self, label: &L) -> bool {
        let mut found = false;
        self.walk(&mut |e| {
            if let TreeExpr::Apply(l, _) = e {
                found |= l == label;
            }
        });
        found
    }

    pub fn map_labels<M: Label>(&self, f: &mut impl FnMut(&L) -> M) -> TreeExpr<M> {
        match self {
            TreeExpr::Empty => TreeExpr::Empty,
            TreeExpr::Const(c) => TreeExpr::Const(c.clone()),
            TreeExpr::Apply(l, cs) => {
                let label = f(l);
                TreeExpr::Apply(label, cs.iter().map(|c| c.map_labels(f)).collect())
            }
            TreeExpr::Sum(l, r) => {
                let l = l.map_labels(f);
                TreeExpr::Sum(Box::new(l), Box::new(r.map_labels(f)))
            }
            TreeExpr::Product(l, c, r) => {
                let l = l.map_labels(f);
                TreeExpr::Product(Box::new(l), c.clone(), Box::new(r.map_labels(f)))
            }
            TreeExpr::Star(e, c) => TreeExpr::Star(Box::new(e.map_labels(f)), c.clone()),
        }
    }

    /// The `h` image: every label replaced by its base symbol.
    pub fn unmark(&self) -> TreeExpr<Symbol> {
        self.map_labels(&mut |l| l.base().clone())
    }

    /// Rewrites every `F^{*_c}` into `(F + c)^{*_c}`, innermost first.
    ///
    /// Already-normalized stars are left alone, which makes the rewrite
    /// idempotent.
    pub fn normalize_stars(&self) -> TreeExpr<L> {
        match self {
            TreeExpr::Empty | TreeExpr::Const(_) => self.clone(),
            TreeExpr::Apply(l, cs) => {
                TreeExpr::Apply(l.clone(), cs.iter().map(|c| c.normalize_stars()).collect())
            }
            TreeExpr::Sum(l, r) => TreeExpr::sum(l.normalize_stars(), r.normalize_stars()),
            TreeExpr::Product(l, c, r) => TreeExpr::Product(
                Box::new(l.normalize_stars()),
                c.clone(),
                Box::new(r.normalize_stars()),
            ),
            TreeExpr::Star(body, c) => {
                let inner = match &**body {
                    TreeExpr::Sum(f, last) if matches!(&**last, TreeExpr::Const(d) if d == c) => {
                        TreeExpr::sum(f.normalize_stars(), TreeExpr::Const(c.clone()))
                    }
                    other => TreeExpr::sum(other.normalize_stars(), TreeExpr::Const(c.clone())),
                };
                TreeExpr::Star(Box::new(inner), c.clone())
            }
        }
    }

    /// Whether every star has the shape `(F + c)^{*_c}`.
    pub fn is_star_normalized(&self) -> bool {
        let mut ok = true;
        self.walk(&mut |e| {
            if let TreeExpr::Star(body, c) = e {
                ok &= matches!(&**body, TreeExpr::Sum(_, last) if matches!(&**last, TreeExpr::Const(d) if d == c));
            }
        });
        ok
    }

    /// Decides `c ∈ ⟦E⟧` by structural induction.
    pub fn contains_constant(&self, c: &Symbol) -> bool {
        match self {
            TreeExpr::Empty | TreeExpr::Apply(..) => false,
            TreeExpr::Const(d) => d == c,
            TreeExpr::Sum(l, r) => l.contains_constant(c) || r.contains_constant(c),
            TreeExpr::Product(l, d, r) => {
                (d != c && l.contains_constant(c))
                    || (l.contains_constant(d) && r.contains_constant(c))
            }
            TreeExpr::Star(e, d) => d == c || e.contains_constant(c),
        }
    }

    /// Decides `⟦E⟧ = ∅`, conservatively answering `false` for c-products
    /// whose emptiness would need more than [`surely_has_leaf`].
    ///
    /// [`surely_has_leaf`]: TreeExpr::surely_has_leaf
    pub fn is_empty_language(&self) -> bool {
        match self {
            TreeExpr::Empty => true,
            TreeExpr::Const(_) | TreeExpr::Star(..) => false,
            TreeExpr::Apply(_, cs) => cs.iter().any(|c| c.is_empty_language()),
            TreeExpr::Sum(l, r) => l.is_empty_language() && r.is_empty_language(),
            TreeExpr::Product(l, c, r) => {
                l.is_empty_language() || (r.is_empty_language() && l.surely_has_leaf(c))
            }
        }
    }

    /// Sufficient condition for "every tree of ⟦E⟧ has a leaf `c`".
    /// Vacuously true on the empty language.
    pub fn surely_has_leaf(&self, c: &Symbol) -> bool {
        match self {
            TreeExpr::Empty => true,
            TreeExpr::Const(d) => d == c,
            TreeExpr::Apply(_, cs) => cs.iter().any(|e| e.surely_has_leaf(c)),
            TreeExpr::Sum(l, r) => l.surely_has_leaf(c) && r.surely_has_leaf(c),
            TreeExpr::Product(l, d, r) => {
                if d == c {
                    l.surely_has_leaf(c) && r.surely_has_leaf(c)
                } else {
                    l.surely_has_leaf(c) || (l.surely_has_leaf(d) && r.surely_has_leaf(c))
                }
            }
            TreeExpr::Star(e, d) => d == c && e.surely_has_leaf(c),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            TreeExpr::Sum(..) => 0,
            TreeExpr::Product(..) => 1,
            TreeExpr::Star(..) => 2,
            _ => 3,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            f.write_str("(")?;
            self.fmt_prec(f, 0)?;
            return f.write_str(")");
        }
        match self {
            TreeExpr::Empty => f.write_str("0"),
            TreeExpr::Const(c) => write!(f, "{c}"),
            TreeExpr::Apply(l, cs) => {
                write!(f, "{l}(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    c.fmt_prec(f, 0)?;
                }
                f.write_str(")")
            }
            TreeExpr::Sum(l, r) => {
                l.fmt_prec(f, 0)?;
                f.write_str(" + ")?;
                r.fmt_prec(f, 1)
            }
            TreeExpr::Product(l, c, r) => {
                l.fmt_prec(f, 1)?;
                write!(f, " .{c} ")?;
                r.fmt_prec(f, 2)
            }
            TreeExpr::Star(e, c) => {
                e.fmt_prec(f, 2)?;
                write!(f, "*{c}")
            }
        }
    }
}

impl TreeExpr<Symbol> {
    /// Checks arities and annotation ranks against an alphabet.
    pub fn validate(&self, alphabet: &RankedAlphabet) -> Result<()> {
        let need_constant = |c: &Symbol| match alphabet.rank(c.as_str()) {
            None => Err(Error::UndeclaredSymbol(c.clone())),
            Some(0) => Ok(()),
            Some(_) => Err(Error::NotConstant(c.clone())),
        };
        match self {
            TreeExpr::Empty => Ok(()),
            TreeExpr::Const(c) => need_constant(c),
            TreeExpr::Apply(f, cs) => {
                let rank = alphabet
                    .rank(f.as_str())
                    .ok_or_else(|| Error::UndeclaredSymbol(f.clone()))?;
                if rank != cs.len() || rank == 0 {
                    return Err(Error::ArityMismatch {
                        symbol: f.clone(),
                        rank,
                        found: cs.len(),
                    });
                }
                cs.iter().try_for_each(|c| c.validate(alphabet))
            }
            TreeExpr::Sum(l, r) => {
                l.validate(alphabet)?;
                r.validate(alphabet)
            }
            TreeExpr::Product(l, c, r) => {
                need_constant(c)?;
                l.validate(alphabet)?;
                r.validate(alphabet)
            }
            TreeExpr::Star(e, c) => {
                need_constant(c)?;
                e.validate(alphabet)
            }
        }
    }
}

impl<L: Label> fmt::Display for TreeExpr<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
