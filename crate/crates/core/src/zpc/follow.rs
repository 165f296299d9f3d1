use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::alphabet::Symbol;
use crate::constset::ConstSet;
use crate::error::{Error, Result};
use crate::expr::{Position, TreeExpr};
use crate::linear::LinearizedExpr;
use crate::positions::PositionSet;
use crate::MarkedExpr;

use super::structure::{build_zpc, NodeId, NodeKind, ZpcStructure};

/// Follow sets of every `(position, k)` slot.
pub type FollowMap = BTreeMap<(Position, usize), PositionSet>;

impl ZpcStructure {
    /// `First₊` of the subexpression at `id`, read off the First forest.
    pub fn first_sup_from_forest(&self, id: NodeId) -> Result<BTreeSet<Position>> {
        self.node(id)?;
        let mut visited = vec![false; self.len()];
        let mut out = BTreeSet::new();
        self.collect_forest(id, &mut visited, &mut out);
        Ok(out)
    }

    /// Prefix traversal of the forest below `id`, skipping subtrees already
    /// visited. Forest subtrees are nested or disjoint, so a visited root
    /// means its whole subtree is done.
    fn collect_forest(&self, id: NodeId, visited: &mut [bool], out: &mut BTreeSet<Position>) {
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            let node = &self.nodes()[n];
            if visited[n] || !node.in_forest {
                continue;
            }
            visited[n] = true;
            if let NodeKind::Apply(p) = &node.kind {
                out.insert(p.clone());
            }
            stack.extend(node.forest_children.iter().rev());
        }
    }

    /// Full First set of the subexpression at `id`.
    pub fn first_at(&self, id: NodeId) -> Result<PositionSet> {
        Ok(PositionSet {
            constants: self.first0_symbols(id)?,
            marked: self.first_sup_from_forest(id)?,
        })
    }

    /// `Γ_ν`: nodes from `id` up to the root whose γ link is defined,
    /// innermost first.
    pub fn gamma_chain(&self, id: NodeId) -> Result<Vec<NodeId>> {
        self.node(id)?;
        Ok(self
            .ancestors(id)
            .filter(|&n| self.nodes()[n].gamma.is_some())
            .collect())
    }

    /// False when `id` sits in the right operand of some `F ·_c G` with
    /// `c ∉ Last(F)`: no tree of the language then reaches it.
    pub fn is_live(&self, id: NodeId) -> bool {
        let nodes = self.nodes();
        self.ancestors(id).all(|n| match nodes[n].parent {
            Some(p) => match nodes[p].kind {
                NodeKind::Product(c) if nodes[p].children[1] == n => {
                    nodes[nodes[p].children[0]].last.contains(c)
                }
                _ => true,
            },
            None => true,
        })
    }

    fn slot(&self, p: &Position, k: usize) -> Result<(NodeId, NodeId)> {
        let id = self
            .position_node(p)
            .ok_or_else(|| Error::PositionAbsent(p.to_string()))?;
        let node = &self.nodes()[id];
        if k == 0 || k > node.children.len() {
            return Err(Error::ChildOutOfRange {
                position: p.to_string(),
                k,
                rank: node.children.len(),
            });
        }
        Ok((id, node.children[k - 1]))
    }

    /// Follow by the γ-chain product
    /// `(((First(E_ν₀) ·_{op(ν₁)} First(E_{γ(ν₁)})) ·_{op(ν₂)} …)`.
    pub fn follow_via_gamma(&self, p: &Position, k: usize) -> Result<PositionSet> {
        let (at, child) = self.slot(p, k)?;
        if !self.is_live(at) {
            return Ok(PositionSet::new());
        }
        let mut acc = self.first_at(child)?;
        for mu in self.gamma_chain(at)? {
            let op = self
                .op(mu)
                .expect("γ is defined only below products and stars");
            let target = self.nodes()[mu].gamma.expect("chain node has γ");
            acc = acc.c_product(self.constants().name(op), &self.first_at(target)?);
        }
        Ok(acc)
    }

    /// Two-phase Follow: constant part bottom-up along the root path, then
    /// the rank ≥ 1 part by walking the γ chain with las-guarded unions.
    pub fn follow_fast(&self, p: &Position, k: usize) -> Result<PositionSet> {
        let (at, child) = self.slot(p, k)?;
        let seed = self.nodes()[child].first0.clone();
        Ok(self.walk_up(at, seed, Some(child)))
    }

    /// Runs both phases from node `at` with an initial constant set and an
    /// optional node whose forest seeds the rank ≥ 1 part.
    fn walk_up(&self, at: NodeId, mut las: ConstSet, seed_root: Option<NodeId>) -> PositionSet {
        let nodes = self.nodes();
        // Phase 1: las along the root path, remembering for each γ node
        // whether its annotation was in las just before the step.
        let mut unions: Vec<NodeId> = Vec::new();
        let mut x = at;
        while let Some(y) = nodes[x].parent {
            match nodes[y].kind {
                NodeKind::Product(c) => {
                    let (l, r) = (nodes[y].children[0], nodes[y].children[1]);
                    if x == l {
                        if las.remove(c) {
                            las.union_with(&nodes[r].first0);
                            unions.push(r);
                        }
                    } else if !nodes[l].last.contains(c) {
                        return PositionSet::new();
                    }
                }
                NodeKind::Star(c) if las.remove(c) => {
                    las.union_with(&nodes[x].first0);
                    unions.push(y);
                }
                _ => {}
            }
            x = y;
        }
        // Phase 2: Fw from the forests of the seed and of every γ target
        // whose guard held.
        let mut visited = vec![false; nodes.len()];
        let mut marked = BTreeSet::new();
        if let Some(root) = seed_root {
            self.collect_forest(root, &mut visited, &mut marked);
        }
        for target in unions {
            self.collect_forest(target, &mut visited, &mut marked);
        }
        PositionSet {
            constants: self.constants().to_symbols(&las),
            marked,
        }
    }

    /// `Follow(E^a_{f_j}, f_j, 1)` without building `E^a_{f_j}`: the
    /// substituted expression only differs below `f_j`.
    pub(crate) fn follow_substituted(&self, at: NodeId, a: usize) -> PositionSet {
        let mut seed = self.constants().empty_set();
        seed.insert(a);
        self.walk_up(at, seed, None)
    }

    /// Every Follow set, sharing the per-constant work across the children
    /// of each position:
    /// `Follow(E,f_j,k) = First₊(E_k) ⊎ ⋃_{a ∈ First₀(E_k)} Follow(E^a_{f_j}, f_j, 1)`.
    pub fn follow_all(&self) -> FollowMap {
        let mut out = FollowMap::new();
        for (p, at) in self.positions() {
            let node = &self.nodes()[at];
            if !self.is_live(at) {
                for k in 1..=node.children.len() {
                    out.insert((p.clone(), k), PositionSet::new());
                }
                continue;
            }
            let mut cache: HashMap<usize, PositionSet> = HashMap::new();
            for (i, &child) in node.children.iter().enumerate() {
                let mut set = PositionSet {
                    constants: BTreeSet::new(),
                    marked: self
                        .first_sup_from_forest(child)
                        .expect("child id is valid"),
                };
                for a in self.nodes()[child].first0.iter() {
                    let part = cache
                        .entry(a)
                        .or_insert_with(|| self.follow_substituted(at, a));
                    set.union_with(part);
                }
                out.insert((p.clone(), i + 1), set);
            }
        }
        out
    }
}

/// `Follow(Ē, f_j, k)` via the γ chain.
pub fn follow_via_gamma(lin: &LinearizedExpr, p: &Position, k: usize) -> Result<PositionSet> {
    build_zpc(lin)?.follow_via_gamma(p, k)
}

/// `Follow(Ē, f_j, k)` by the two-phase walk.
pub fn follow_fast(lin: &LinearizedExpr, p: &Position, k: usize) -> Result<PositionSet> {
    build_zpc(lin)?.follow_fast(p, k)
}

/// Every Follow set of `Ē`.
pub fn follow_all(lin: &LinearizedExpr) -> Result<FollowMap> {
    Ok(build_zpc(lin)?.follow_all())
}

/// `E^a_{f_j}`: the subexpression `f_j(E₁,…,E_m)` replaced by `f_j(a)`.
pub fn substitute_subexpr(
    lin: &LinearizedExpr,
    p: &Position,
    a: &Symbol,
) -> Result<LinearizedExpr> {
    if lin.arity(p).is_none() {
        return Err(Error::PositionAbsent(p.to_string()));
    }
    fn go(e: &MarkedExpr, p: &Position, a: &Symbol) -> MarkedExpr {
        match e {
            TreeExpr::Apply(q, _) if q == p => {
                TreeExpr::Apply(q.clone(), vec![TreeExpr::Const(a.clone())])
            }
            TreeExpr::Apply(q, cs) => {
                TreeExpr::Apply(q.clone(), cs.iter().map(|c| go(c, p, a)).collect())
            }
            TreeExpr::Sum(l, r) => TreeExpr::Sum(Box::new(go(l, p, a)), Box::new(go(r, p, a))),
            TreeExpr::Product(l, c, r) => {
                TreeExpr::Product(Box::new(go(l, p, a)), c.clone(), Box::new(go(r, p, a)))
            }
            TreeExpr::Star(b, c) => TreeExpr::Star(Box::new(go(b, p, a)), c.clone()),
            TreeExpr::Empty | TreeExpr::Const(_) => e.clone(),
        }
    }
    LinearizedExpr::new(go(lin.expr(), p, a))
}
