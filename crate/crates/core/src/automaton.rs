//! The k-position tree automaton and bottom-up evaluation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::alphabet::{RankedAlphabet, Symbol};
use crate::error::{Error, Result};
use crate::expr::{Label, Position};
use crate::lang::Enumeration;
use crate::linear::{linearize, LinearizedExpr};
use crate::parse::infer_alphabet;
use crate::positions::PositionSet;
use crate::tree::GroundTree;
use crate::zpc::{build_zpc, FollowMap};
use crate::{Expr, Tree};

mod export;

/// A state: the final state `ε¹`, or `f_j^k` for child `k` of position `f_j`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum State {
    Final,
    Slot(Position, usize),
}

impl State {
    pub fn name(&self) -> String {
        self.to_string()
    }

    /// Inverse of the printed name: `eps1` or `<base><mark>^<k>`.
    pub fn parse(name: &str) -> Option<State> {
        if name == "eps1" {
            return Some(State::Final);
        }
        let (p, k) = name.split_once('^')?;
        let k: usize = k.parse().ok()?;
        (k >= 1).then_some(())?;
        Some(State::Slot(Position::parse(p)?, k))
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            State::Final => f.write_str("eps1"),
            State::Slot(p, k) => write!(f, "{p}^{k}"),
        }
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A transition `symbol(args…) → target`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Rule {
    pub symbol: Symbol,
    pub args: Vec<State>,
    pub target: State,
}

impl Rule {
    /// Canonical sort key: symbol name, argument names, target name.
    pub fn sort_key(&self) -> (String, Vec<String>, String) {
        (
            self.symbol.to_string(),
            self.args.iter().map(State::name).collect(),
            self.target.name(),
        )
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.args.is_empty() {
            write!(f, "{} -> {}", self.symbol, self.target)
        } else {
            let args: Vec<String> = self.args.iter().map(State::name).collect();
            write!(f, "{}({}) -> {}", self.symbol, args.join(","), self.target)
        }
    }
}

/// Bottom-up nondeterministic finite tree automaton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfta {
    pub alphabet: RankedAlphabet,
    pub states: BTreeSet<State>,
    pub final_states: BTreeSet<State>,
    pub rules: BTreeSet<Rule>,
}

impl Nfta {
    /// Rules in canonical (name-lexicographic) order.
    pub fn sorted_rules(&self) -> Vec<&Rule> {
        let mut v: Vec<&Rule> = self.rules.iter().collect();
        v.sort_by_cached_key(|r| r.sort_key());
        v
    }

    fn rules_by_symbol(&self) -> BTreeMap<&Symbol, Vec<&Rule>> {
        let mut m: BTreeMap<&Symbol, Vec<&Rule>> = BTreeMap::new();
        for r in &self.rules {
            m.entry(&r.symbol).or_default().push(r);
        }
        m
    }

    /// `Δ*(t)`, the states reachable at the root of `t`.
    pub fn run(&self, t: &Tree) -> Result<BTreeSet<State>> {
        t.validate(&self.alphabet)?;
        let index = self.rules_by_symbol();
        Ok(eval(&index, t))
    }

    pub fn accepts(&self, t: &Tree) -> Result<bool> {
        Ok(!self.run(t)?.is_disjoint(&self.final_states))
    }

    /// Accepted trees of depth ≤ `max_depth`, derived bottom-up from the
    /// rules; capped at `max_count` trees per state.
    pub fn accepted_trees(&self, max_depth: usize, max_count: usize) -> Enumeration<Symbol> {
        let mut truncated = false;
        let mut reach: BTreeMap<&State, BTreeSet<Tree>> = BTreeMap::new();
        for _ in 0..max_depth {
            let mut next: BTreeMap<&State, BTreeSet<Tree>> = BTreeMap::new();
            for r in &self.rules {
                let options: Option<Vec<Vec<&Tree>>> = r
                    .args
                    .iter()
                    .map(|q| reach.get(q).map(|s| s.iter().collect()))
                    .collect();
                let Some(options) = options else { continue };
                let slot = next.entry(&r.target).or_default();
                for children in crate::tree::cartesian(&options) {
                    if slot.len() >= max_count {
                        truncated = true;
                        break;
                    }
                    slot.insert(if children.is_empty() {
                        GroundTree::Leaf(r.symbol.clone())
                    } else {
                        GroundTree::Node(r.symbol.clone(), children.into_iter().cloned().collect())
                    });
                }
            }
            reach = next;
        }
        let trees = self
            .final_states
            .iter()
            .filter_map(|q| reach.get(q))
            .flatten()
            .cloned()
            .collect();
        Enumeration { trees, truncated }
    }
}

fn eval(index: &BTreeMap<&Symbol, Vec<&Rule>>, t: &Tree) -> BTreeSet<State> {
    let (sym, kids): (&Symbol, &[Tree]) = match t {
        GroundTree::Leaf(c) => (c, &[]),
        GroundTree::Node(f, cs) => (f, cs),
    };
    let child_states: Vec<BTreeSet<State>> = kids.iter().map(|c| eval(index, c)).collect();
    let mut out = BTreeSet::new();
    for r in index.get(sym).into_iter().flatten() {
        if r.args.len() == child_states.len()
            && r.args
                .iter()
                .zip(&child_states)
                .all(|(q, set)| set.contains(q))
        {
            out.insert(r.target.clone());
        }
    }
    out
}

/// Assembles the automaton from First and the Follow map of a linearized
/// expression.
pub fn automaton_from_sets(
    lin: &LinearizedExpr,
    alphabet: RankedAlphabet,
    first: &PositionSet,
    follow: &FollowMap,
) -> Nfta {
    let mut states = BTreeSet::from([State::Final]);
    for (p, k) in lin.slots() {
        states.insert(State::Slot(p, k));
    }
    let entering = |g: &Position| -> Vec<State> {
        let rank = lin.arity(g).expect("position of this expression");
        (1..=rank).map(|i| State::Slot(g.clone(), i)).collect()
    };
    let mut rules = BTreeSet::new();
    let mut emit = |set: &PositionSet, target: &State| {
        for c in &set.constants {
            rules.insert(Rule {
                symbol: c.clone(),
                args: Vec::new(),
                target: target.clone(),
            });
        }
        for g in &set.marked {
            rules.insert(Rule {
                symbol: g.base().clone(),
                args: entering(g),
                target: target.clone(),
            });
        }
    };
    emit(first, &State::Final);
    for ((p, k), set) in follow {
        emit(set, &State::Slot(p.clone(), *k));
    }
    Nfta {
        alphabet,
        states,
        final_states: BTreeSet::from([State::Final]),
        rules,
    }
}

/// The k-position tree automaton of `e`, over the symbols `e` uses.
pub fn build_position_automaton(e: &Expr) -> Nfta {
    let alphabet = infer_alphabet(e).expect("well-formed expression has consistent ranks");
    build_position_automaton_over(e, &alphabet).expect("alphabet inferred from the expression")
}

/// The k-position tree automaton of `e`, listing `alphabet` in its output.
pub fn build_position_automaton_over(e: &Expr, alphabet: &RankedAlphabet) -> Result<Nfta> {
    e.validate(alphabet)?;
    let lin = linearize(&e.normalize_stars());
    let z = build_zpc(&lin)?;
    let first = z.first_at(z.root())?;
    let follow = z.follow_all();
    Ok(automaton_from_sets(&lin, alphabet.clone(), &first, &follow))
}

impl Nfta {
    /// Checks that rule symbols are declared with matching rank and that
    /// every state mentioned is listed.
    pub fn check(&self) -> Result<()> {
        for r in &self.rules {
            match self.alphabet.rank(r.symbol.as_str()) {
                Some(n) if n == r.args.len() => {}
                _ => {
                    return Err(Error::InvalidAutomaton(format!(
                        "rule `{r}` does not match the alphabet"
                    )))
                }
            }
            for q in r.args.iter().chain([&r.target]) {
                if !self.states.contains(q) {
                    return Err(Error::InvalidAutomaton(format!("unknown state `{q}`")));
                }
            }
        }
        if !self.final_states.is_subset(&self.states) {
            return Err(Error::InvalidAutomaton(
                "final state not in state set".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_tree, parse_unchecked};

    fn rule_strings(a: &Nfta) -> Vec<String> {
        a.sorted_rules().iter().map(|r| r.to_string()).collect()
    }

    #[test]
    fn single_constant_automaton() {
        let a = build_position_automaton(&parse_unchecked("b").unwrap());
        assert_eq!(a.states, BTreeSet::from([State::Final]));
        assert_eq!(rule_strings(&a), ["b -> eps1"]);
    }

    #[test]
    fn unary_symbol_automaton() {
        let a = build_position_automaton(&parse_unchecked("f(a)").unwrap());
        assert_eq!(a.states.len(), 2);
        assert_eq!(rule_strings(&a), ["a -> f1^1", "f(f1^1) -> eps1"]);
        assert!(a.accepts(&parse_tree("f(a)").unwrap()).unwrap());
        assert!(!a.accepts(&parse_tree("f(f(a))").unwrap()).unwrap());
        assert!(!a.accepts(&parse_tree("a").unwrap()).unwrap());
    }

    #[test]
    fn empty_expression_recognizes_nothing() {
        let alphabet = RankedAlphabet::from_pairs([("a", 0)]).unwrap();
        let a = build_position_automaton_over(&Expr::Empty, &alphabet).unwrap();
        assert_eq!(a.states, BTreeSet::from([State::Final]));
        assert!(a.rules.is_empty());
        assert!(!a.accepts(&parse_tree("a").unwrap()).unwrap());
    }

    #[test]
    fn unknown_symbol_is_an_error() {
        let a = build_position_automaton(&parse_unchecked("f(a)").unwrap());
        assert!(matches!(
            a.accepts(&parse_tree("q(a)").unwrap()),
            Err(Error::UnknownTreeSymbol(_))
        ));
        assert!(matches!(
            a.accepts(&parse_tree("f(a,a)").unwrap()),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn state_names_round_trip() {
        let s = State::Slot(Position::new("g", 3), 2);
        assert_eq!(s.name(), "g3^2");
        assert_eq!(State::parse("g3^2"), Some(s));
        assert_eq!(State::parse("eps1"), Some(State::Final));
        assert_eq!(State::parse("g3"), None);
        assert_eq!(State::parse("g3^0"), None);
    }

    #[test]
    fn accepted_trees_of_a_star() {
        let a = build_position_automaton(&parse_unchecked("f(a)*a").unwrap());
        let got = a.accepted_trees(3, 100);
        let names: Vec<String> = got.trees.iter().map(|t| t.to_string()).collect();
        assert_eq!(names, ["a", "f(a)", "f(f(a))"]);
        assert!(!got.truncated);
    }
}
