//! Linearization: marking every rank ≥ 1 occurrence with a distinct index.

use std::collections::BTreeMap;

use crate::alphabet::Symbol;
use crate::error::{Error, Result};
use crate::expr::{Position, TreeExpr};
use crate::{Expr, MarkedExpr};

/// An expression over positions, together with the expression it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearizedExpr {
    expr: MarkedExpr,
    origin: Expr,
    arity: BTreeMap<Position, usize>,
}

impl LinearizedExpr {
    /// Wraps an already-marked expression, checking that no position repeats.
    pub fn new(expr: MarkedExpr) -> Result<Self> {
        let mut arity = BTreeMap::new();
        let mut marks = BTreeMap::new();
        let mut err = None;
        expr.walk(&mut |e| {
            if let TreeExpr::Apply(p, cs) = e {
                if marks.insert(p.mark, p.clone()).is_some() && err.is_none() {
                    err = Some(Error::NotLinear(p.to_string()));
                }
                arity.insert(p.clone(), cs.len());
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        let origin = expr.unmark();
        Ok(LinearizedExpr {
            expr,
            origin,
            arity,
        })
    }

    pub fn expr(&self) -> &MarkedExpr {
        &self.expr
    }

    /// The unmarked expression; equal to `h(expr)`.
    pub fn origin(&self) -> &Expr {
        &self.origin
    }

    /// Positions in mark order.
    pub fn positions(&self) -> impl Iterator<Item = &Position> + '_ {
        self.arity.keys()
    }

    pub fn position_count(&self) -> usize {
        self.arity.len()
    }

    pub fn arity(&self, p: &Position) -> Option<usize> {
        self.arity.get(p).copied()
    }

    /// The un-marking map `h`.
    pub fn h<'a>(&self, p: &'a Position) -> &'a Symbol {
        &p.symbol
    }

    /// Looks a position up by its printed name, e.g. `g3`.
    pub fn position_named(&self, name: &str) -> Option<&Position> {
        let wanted = Position::parse(name)?;
        self.arity.get_key_value(&wanted).map(|(p, _)| p)
    }

    pub fn is_star_normalized(&self) -> bool {
        self.expr.is_star_normalized()
    }

    /// Checks that `(p, k)` names a child slot of a position of this expression.
    pub fn check_slot(&self, p: &Position, k: usize) -> Result<usize> {
        let rank = self
            .arity(p)
            .ok_or_else(|| Error::PositionAbsent(p.to_string()))?;
        if k == 0 || k > rank {
            return Err(Error::ChildOutOfRange {
                position: p.to_string(),
                k,
                rank,
            });
        }
        Ok(rank)
    }

    /// Every `(position, k)` pair in canonical order.
    pub fn slots(&self) -> Vec<(Position, usize)> {
        self.arity
            .iter()
            .flat_map(|(p, &r)| (1..=r).map(move |k| (p.clone(), k)))
            .collect()
    }
}

/// Marks rank ≥ 1 symbols `1, 2, …` in left-to-right preorder.
pub fn linearize(e: &Expr) -> LinearizedExpr {
    let mut next = 0;
    let marked = e.map_labels(&mut |f: &Symbol| {
        next += 1;
        Position::new(f.clone(), next)
    });
    LinearizedExpr::new(marked).expect("fresh marks are distinct")
}
