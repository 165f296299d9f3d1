//! ZPC structure and the fast Follow computations built on it.
//!
//! [`build_zpc`] decorates the syntax tree of a star-normalized linear
//! expression with three things:
//!
//! * `first0` at every node, a membership array over the constants;
//! * the First forest: the tree links that survive pruning, so that a prefix
//!   traversal below a node yields `First₊` of its subexpression;
//! * γ links, from the left operand of each `·_c` to the right operand and
//!   from the body of each `*_c` to the star node.
//!
//! Follow is then available three ways: [`ZpcStructure::follow_via_gamma`]
//! (product of First sets along the γ chain), [`ZpcStructure::follow_fast`]
//! (constant part bottom-up, then las-guarded forest unions) and
//! [`ZpcStructure::follow_all`], which shares work between the children of a
//! position through the substituted expressions `E^a_{f_j}`.

mod dot;
mod follow;
mod structure;

pub use follow::{follow_all, follow_fast, follow_via_gamma, substitute_subexpr, FollowMap};
pub use structure::{build_zpc, NodeId, NodeKind, Removal, ZpcNode, ZpcStats, ZpcStructure};
