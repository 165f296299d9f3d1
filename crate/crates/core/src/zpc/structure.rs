use std::collections::{BTreeMap, BTreeSet};

use crate::constset::{ConstIndex, ConstSet};
use crate::error::{Error, Result};
use crate::expr::{Position, TreeExpr};
use crate::linear::LinearizedExpr;
use crate::MarkedExpr;

pub type NodeId = usize;

/// Operator at a syntax-tree node. Constants are stored by [`ConstIndex`] id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    Empty,
    Const(usize),
    Apply(Position),
    Sum,
    Product(usize),
    Star(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZpcNode {
    pub kind: NodeKind,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
    /// Child links kept in the First forest.
    pub forest_children: Vec<NodeId>,
    /// False for constant leaves, which are deleted from the forest.
    pub in_forest: bool,
    /// Constant part of First of the subexpression rooted here.
    pub first0: ConstSet,
    /// Last of the subexpression rooted here.
    pub last: ConstSet,
    pub gamma: Option<NodeId>,
}

/// Why a tree link is missing from the First forest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Removal {
    /// `F ·_c G` with `c ∉ first0(F)`: the link to `G` goes.
    ProductGuard,
    /// Every link below an `Apply` node goes.
    ApplyChild,
    /// The child is a constant leaf, deleted from the forest.
    ConstantLeaf,
}

/// Size figures used to check the linear-size claims.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZpcStats {
    pub nodes: usize,
    pub tree_links: usize,
    pub forest_links: usize,
    pub gamma_links: usize,
    pub first0_cells: usize,
}

/// Syntax tree of a linearized expression decorated with per-node constant
/// First sets, the pruned First forest and γ follow links.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZpcStructure {
    nodes: Vec<ZpcNode>,
    root: NodeId,
    constants: ConstIndex,
    position_index: BTreeMap<Position, NodeId>,
    removed: Vec<(NodeId, NodeId, Removal)>,
}

/// Builds the ZPC structure of a star-normalized linear expression.
pub fn build_zpc(lin: &LinearizedExpr) -> Result<ZpcStructure> {
    if !lin.is_star_normalized() {
        return Err(Error::NotNormalized);
    }
    let constants = ConstIndex::new(lin.expr().constants());
    let mut b = Builder {
        nodes: Vec::with_capacity(lin.expr().size()),
        constants: &constants,
    };
    let root = b.add(lin.expr(), None);
    let mut nodes = b.nodes;

    // First0 and Last, children before parents (ids are preorder).
    for id in (0..nodes.len()).rev() {
        let (first0, last) = {
            let n = &nodes[id];
            let mut first0 = constants.empty_set();
            let mut last = constants.empty_set();
            match n.kind {
                NodeKind::Empty => {}
                NodeKind::Const(c) => {
                    first0.insert(c);
                    last.insert(c);
                }
                NodeKind::Apply(_) => {
                    for &ch in &n.children {
                        last.union_with(&nodes[ch].last);
                    }
                }
                NodeKind::Sum => {
                    for &ch in &n.children {
                        first0.union_with(&nodes[ch].first0);
                        last.union_with(&nodes[ch].last);
                    }
                }
                NodeKind::Product(c) => {
                    let (l, r) = (&nodes[n.children[0]], &nodes[n.children[1]]);
                    first0.union_with(&l.first0);
                    if first0.remove(c) {
                        first0.union_with(&r.first0);
                    }
                    last.union_with(&l.last);
                    if last.remove(c) {
                        last.union_with(&r.last);
                    }
                }
                NodeKind::Star(c) => {
                    let body = &nodes[n.children[0]];
                    first0.union_with(&body.first0);
                    last.union_with(&body.last);
                    last.insert(c);
                }
            }
            (first0, last)
        };
        nodes[id].first0 = first0;
        nodes[id].last = last;
    }

    // First forest.
    let mut removed = Vec::new();
    for id in 0..nodes.len() {
        let kind = nodes[id].kind.clone();
        let children = nodes[id].children.clone();
        let mut keep = Vec::with_capacity(children.len());
        for (i, &ch) in children.iter().enumerate() {
            let why = match kind {
                NodeKind::Apply(_) => Some(Removal::ApplyChild),
                NodeKind::Product(c) if i == 1 && !nodes[children[0]].first0.contains(c) => {
                    Some(Removal::ProductGuard)
                }
                _ if matches!(nodes[ch].kind, NodeKind::Const(_)) => Some(Removal::ConstantLeaf),
                _ => None,
            };
            match why {
                Some(r) => removed.push((id, ch, r)),
                None => keep.push(ch),
            }
        }
        nodes[id].forest_children = keep;
        nodes[id].in_forest = !matches!(kind, NodeKind::Const(_));
    }

    // γ links.
    for id in 0..nodes.len() {
        match nodes[id].kind {
            NodeKind::Product(_) => {
                let (l, r) = (nodes[id].children[0], nodes[id].children[1]);
                nodes[l].gamma = Some(r);
            }
            NodeKind::Star(_) => {
                let body = nodes[id].children[0];
                nodes[body].gamma = Some(id);
            }
            _ => {}
        }
    }

    let position_index = nodes
        .iter()
        .enumerate()
        .filter_map(|(id, n)| match &n.kind {
            NodeKind::Apply(p) => Some((p.clone(), id)),
            _ => None,
        })
        .collect();

    Ok(ZpcStructure {
        nodes,
        root,
        constants,
        position_index,
        removed,
    })
}

struct Builder<'a> {
    nodes: Vec<ZpcNode>,
    constants: &'a ConstIndex,
}

impl Builder<'_> {
    fn add(&mut self, e: &MarkedExpr, parent: Option<NodeId>) -> NodeId {
        let cid = |c| self.constants.id(c).expect("constant indexed");
        let kind = match e {
            TreeExpr::Empty => NodeKind::Empty,
            TreeExpr::Const(c) => NodeKind::Const(cid(c)),
            TreeExpr::Apply(p, _) => NodeKind::Apply(p.clone()),
            TreeExpr::Sum(..) => NodeKind::Sum,
            TreeExpr::Product(_, c, _) => NodeKind::Product(cid(c)),
            TreeExpr::Star(_, c) => NodeKind::Star(cid(c)),
        };
        let id = self.nodes.len();
        self.nodes.push(ZpcNode {
            kind,
            parent,
            children: Vec::new(),
            forest_children: Vec::new(),
            in_forest: true,
            first0: ConstSet::default(),
            last: ConstSet::default(),
            gamma: None,
        });
        let children: Vec<NodeId> = e
            .children()
            .into_iter()
            .map(|c| self.add(c, Some(id)))
            .collect();
        self.nodes[id].children = children;
        id
    }
}

impl ZpcStructure {
    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: NodeId) -> Result<&ZpcNode> {
        self.nodes.get(id).ok_or(Error::InvalidNode(id))
    }

    pub fn nodes(&self) -> &[ZpcNode] {
        &self.nodes
    }

    pub fn constants(&self) -> &ConstIndex {
        &self.constants
    }

    pub fn position_node(&self, p: &Position) -> Option<NodeId> {
        self.position_index.get(p).copied()
    }

    pub fn positions(&self) -> impl Iterator<Item = (&Position, NodeId)> + '_ {
        self.position_index.iter().map(|(p, &id)| (p, id))
    }

    /// Tree links missing from the First forest, with the reason.
    pub fn removed_links(&self) -> &[(NodeId, NodeId, Removal)] {
        &self.removed
    }

    /// `(from, to)` for every γ link, in node order.
    pub fn gamma_links(&self) -> Vec<(NodeId, NodeId)> {
        self.nodes
            .iter()
            .enumerate()
            .filter_map(|(id, n)| n.gamma.map(|g| (id, g)))
            .collect()
    }

    /// The constant annotation of the product or star above `id`, if any.
    pub fn op(&self, id: NodeId) -> Option<usize> {
        let parent = self.nodes[id].parent?;
        match self.nodes[parent].kind {
            NodeKind::Product(c) | NodeKind::Star(c) => Some(c),
            _ => None,
        }
    }

    /// Short label: the operator or symbol at the node.
    pub fn label(&self, id: NodeId) -> String {
        let c = |i| self.constants.name(i).to_string();
        match &self.nodes[id].kind {
            NodeKind::Empty => "0".into(),
            NodeKind::Const(i) => c(*i),
            NodeKind::Apply(p) => p.to_string(),
            NodeKind::Sum => "+".into(),
            NodeKind::Product(i) => format!(".{}", c(*i)),
            NodeKind::Star(i) => format!("*{}", c(*i)),
        }
    }

    /// Reconstructs the subexpression rooted at `id`.
    pub fn subexpr(&self, id: NodeId) -> Result<MarkedExpr> {
        let n = self.node(id)?;
        let c = |i: usize| self.constants.name(i).clone();
        let sub = |i: usize| self.subexpr(n.children[i]).map(Box::new);
        Ok(match &n.kind {
            NodeKind::Empty => TreeExpr::Empty,
            NodeKind::Const(i) => TreeExpr::Const(c(*i)),
            NodeKind::Apply(p) => TreeExpr::Apply(
                p.clone(),
                n.children
                    .iter()
                    .map(|&ch| self.subexpr(ch))
                    .collect::<Result<_>>()?,
            ),
            NodeKind::Sum => TreeExpr::Sum(sub(0)?, sub(1)?),
            NodeKind::Product(i) => TreeExpr::Product(sub(0)?, c(*i), sub(1)?),
            NodeKind::Star(i) => TreeExpr::Star(sub(0)?, c(*i)),
        })
    }

    /// Constant part of First at `id`, as symbols.
    pub fn first0_symbols(&self, id: NodeId) -> Result<BTreeSet<crate::Symbol>> {
        Ok(self.constants.to_symbols(&self.node(id)?.first0))
    }

    pub fn last_symbols(&self, id: NodeId) -> Result<BTreeSet<crate::Symbol>> {
        Ok(self.constants.to_symbols(&self.node(id)?.last))
    }

    pub fn stats(&self) -> ZpcStats {
        ZpcStats {
            nodes: self.nodes.len(),
            tree_links: self.nodes.iter().map(|n| n.children.len()).sum(),
            forest_links: self.nodes.iter().map(|n| n.forest_children.len()).sum(),
            gamma_links: self.nodes.iter().filter(|n| n.gamma.is_some()).count(),
            first0_cells: self.nodes.iter().map(|n| n.first0.cells()).sum(),
        }
    }

    /// Walks parent links from `id` to the root, `id` included.
    pub(crate) fn ancestors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        std::iter::successors(Some(id), move |&n| self.nodes[n].parent)
    }
}
