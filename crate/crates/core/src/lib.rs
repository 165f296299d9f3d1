//! Regular tree expressions, their position functions, and the k-position
//! tree automaton.
//!
//! The pipeline is: parse an [`Expr`], star-normalize and [`linearize`] it,
//! compute First and Follow (naively, by decomposition, or on the
//! [`ZpcStructure`]), then assemble the [`Nfta`].
//!
//! ```
//! use treepos::{build_position_automaton, parse_tree, parse_unchecked};
//!
//! let e = parse_unchecked("f(a)*a .a b").unwrap();
//! let a = build_position_automaton(&e);
//! assert!(a.accepts(&parse_tree("f(f(b))").unwrap()).unwrap());
//! assert!(!a.accepts(&parse_tree("f(a)").unwrap()).unwrap());
//! ```

pub mod algo;
pub mod alphabet;
pub mod automaton;
pub mod constset;
pub mod error;
pub mod expr;
pub mod gen;
pub mod harness;
pub mod lang;
pub mod linear;
pub mod parse;
pub mod positions;
pub mod tree;
pub mod zpc;

pub use algo::{follow_sets, FollowAlgorithm};
pub use alphabet::{RankedAlphabet, Symbol};
pub use automaton::{build_position_automaton, build_position_automaton_over, Nfta, Rule, State};
pub use error::{Error, Result};
pub use expr::{Label, Position, TreeExpr};
pub use lang::{enumerate_language, Enumeration};
pub use linear::{linearize, LinearizedExpr};
pub use parse::{
    infer_alphabet, parse_alphabet, parse_expression, parse_expression_file, parse_tree,
    parse_unchecked, ExpressionFile,
};
pub use positions::PositionSet;
pub use tree::GroundTree;
pub use zpc::{build_zpc, FollowMap, ZpcStructure};

/// Expression over plain symbols.
pub type Expr = TreeExpr<Symbol>;
/// Linearized expression: rank ≥ 1 symbols carry marks.
pub type MarkedExpr = TreeExpr<Position>;
pub type Tree = GroundTree<Symbol>;
pub type MarkedTree = GroundTree<Position>;
