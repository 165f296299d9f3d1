//! Randomized cross-checking of the Follow algorithms and the automaton
//! against the bounded-enumeration semantics.

use std::collections::BTreeSet;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algo::{first_set, follow_sets, FollowAlgorithm};
use crate::alphabet::RankedAlphabet;
use crate::automaton::build_position_automaton_over;
use crate::gen::{random_tree, ExprGen, GenConfig};
use crate::lang::enumerate_language;
use crate::linear::{linearize, LinearizedExpr};
use crate::positions;
use crate::zpc::FollowMap;
use crate::Expr;

/// Hook that may rewrite an algorithm's output before comparison; used to
/// check that the harness notices faults.
pub type FaultHook = Box<dyn Fn(FollowAlgorithm, &LinearizedExpr, &mut FollowMap) + Send + Sync>;

#[derive(Debug, Clone)]
pub struct OracleConfig {
    pub seed: u64,
    pub count: usize,
    pub gen: GenConfig,
    /// Tree depth bound for the language comparison.
    pub depth: usize,
    /// Per-language cap on enumerated trees.
    pub max_trees: usize,
    /// Random trees tried against the automaton per expression.
    pub negatives: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            seed: 42,
            count: 100,
            gen: GenConfig::default(),
            depth: 4,
            max_trees: 20_000,
            negatives: 50,
        }
    }
}

/// Outcome of the language comparison for one expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LanguageCheck {
    /// Both sides agree on this many trees.
    Agree(usize),
    /// The enumeration hit the cap, so no verdict.
    Truncated,
}

/// A failing expression and what went wrong.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub expr: Expr,
    pub original: Expr,
    pub message: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "counterexample: {}", self.expr)?;
        writeln!(f, "  shrunk from: {}", self.original)?;
        write!(f, "  {}", self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub expressions: usize,
    pub trees: usize,
    /// Expressions whose language check was skipped due to truncation.
    pub truncated: usize,
    pub counterexample: Option<Counterexample>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            Some(c) => write!(f, "oracle check: FAIL\n{c}"),
            None => write!(
                f,
                "oracle check: PASS ({} expressions, {} trees, {} truncated)",
                self.expressions, self.trees, self.truncated
            ),
        }
    }
}

pub struct Oracle {
    pub config: OracleConfig,
    alphabet: RankedAlphabet,
    fault: Option<FaultHook>,
}

impl Oracle {
    pub fn new(config: OracleConfig) -> Self {
        Oracle {
            config,
            alphabet: crate::gen::default_alphabet(),
            fault: None,
        }
    }

    pub fn with_fault(mut self, hook: FaultHook) -> Self {
        self.fault = Some(hook);
        self
    }

    /// Runs `count` random expressions; stops at the first failure and
    /// shrinks it.
    pub fn run(&self) -> OracleReport {
        let mut gen = ExprGen::new(self.config.seed, self.config.gen.clone());
        let mut report = OracleReport {
            expressions: 0,
            trees: 0,
            truncated: 0,
            counterexample: None,
        };
        for _ in 0..self.config.count {
            let e = gen.next_expr();
            report.expressions += 1;
            match self.check(&e) {
                Ok(LanguageCheck::Agree(n)) => report.trees += n,
                Ok(LanguageCheck::Truncated) => report.truncated += 1,
                Err(_) => {
                    report.counterexample = Some(self.shrink(&e));
                    break;
                }
            }
        }
        report
    }

    /// Every check on one expression.
    pub fn check(&self, e: &Expr) -> Result<LanguageCheck, String> {
        self.check_follow(e)?;
        check_language(
            e,
            &self.alphabet,
            self.config.depth,
            self.config.max_trees,
            self.config.negatives,
            seed_for(e),
        )
    }

    /// Agreement of every Follow algorithm with the inductive one, and of the
    /// decomposed First with the plain one.
    pub fn check_follow(&self, e: &Expr) -> Result<(), String> {
        let lin = linearize(&e.normalize_stars());
        let run = |algo| -> Result<FollowMap, String> {
            let mut m = follow_sets(&lin, algo).map_err(|err| format!("{algo}: {err}"))?;
            if let Some(hook) = &self.fault {
                hook(algo, &lin, &mut m);
            }
            Ok(m)
        };
        let want = run(FollowAlgorithm::Naive)?;
        let first = first_set(&lin, FollowAlgorithm::Naive).map_err(|e| e.to_string())?;
        for algo in FollowAlgorithm::ALL {
            let got = run(algo)?;
            if let Some(((p, k), w)) = want.iter().find(|(slot, w)| got.get(slot) != Some(*w)) {
                return Err(format!(
                    "Follow({p}, {k}): naive = {w}, {algo} = {}",
                    got.get(&(p.clone(), *k))
                        .map(|s| s.to_string())
                        .unwrap_or_default()
                ));
            }
            if got.len() != want.len() {
                return Err(format!(
                    "{algo} returned {} slots, expected {}",
                    got.len(),
                    want.len()
                ));
            }
            let f = first_set(&lin, algo).map_err(|e| e.to_string())?;
            if f != first {
                return Err(format!("First: naive = {first}, {algo} = {f}"));
            }
        }
        Ok(())
    }

    /// Descends into subexpressions while they still fail.
    pub fn shrink(&self, e: &Expr) -> Counterexample {
        let mut current = e.clone();
        let mut message = self.check(&current).err().unwrap_or_default();
        'outer: loop {
            for child in current.children() {
                if let Err(m) = self.check(child) {
                    current = child.clone();
                    message = m;
                    continue 'outer;
                }
            }
            break;
        }
        Counterexample {
            expr: current,
            original: e.clone(),
            message,
        }
    }
}

fn seed_for(e: &Expr) -> u64 {
    // FNV-1a over the printed form: stable across runs and platforms.
    e.to_string()
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
            (h ^ b as u64).wrapping_mul(0x100_0000_01b3)
        })
}

/// Compares the language of `e` with that of its position automaton on
/// trees of depth ≤ `depth`: equal tree sets, every enumerated tree
/// accepted, and agreement on `negatives` random trees over `alphabet`.
pub fn check_language(
    e: &Expr,
    alphabet: &RankedAlphabet,
    depth: usize,
    max_trees: usize,
    negatives: usize,
    seed: u64,
) -> Result<LanguageCheck, String> {
    let lang = enumerate_language(e, depth, max_trees);
    if lang.truncated {
        return Ok(LanguageCheck::Truncated);
    }
    let nfta = build_position_automaton_over(e, alphabet).map_err(|err| err.to_string())?;
    let derived = nfta.accepted_trees(depth, max_trees);
    if derived.truncated {
        return Ok(LanguageCheck::Truncated);
    }
    if derived.trees != lang.trees {
        let extra = derived.trees.difference(&lang.trees).next();
        let missing = lang.trees.difference(&derived.trees).next();
        return Err(match (extra, missing) {
            (Some(t), _) => format!("automaton accepts {t}, not in the language"),
            (_, Some(t)) => format!("automaton rejects {t}, which is in the language"),
            _ => unreachable!(),
        });
    }
    for t in &lang.trees {
        if !nfta.accepts(t).map_err(|err| err.to_string())? {
            return Err(format!("accepts({t}) is false, but {t} is in the language"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..negatives {
        let t = random_tree(&mut rng, alphabet, depth);
        let accepted = nfta.accepts(&t).map_err(|err| err.to_string())?;
        if accepted != lang.trees.contains(&t) {
            return Err(format!("accepts({t}) = {accepted}, membership disagrees"));
        }
    }
    Ok(LanguageCheck::Agree(lang.trees.len()))
}

/// Outcome of comparing First and Last with the roots and leaves of the
/// enumerated language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Grounding {
    /// Enumeration stabilized and matched.
    Exact,
    /// Enumeration truncated; only the inclusion was checked.
    Inclusion,
}

/// First and Last of `Ē` against the roots and leaves of its enumerated
/// language. Enumerates at depths `‖Ē‖+1` and `‖Ē‖+2`: along any path of a
/// shallowest witness tree the positions are distinct, so every root and leaf
/// already shows up at `‖Ē‖+1`. Requires both depths to agree, then equality.
pub fn check_grounding(e: &Expr, max_trees: usize) -> Result<Grounding, String> {
    let lin = linearize(&e.normalize_stars());
    let first: BTreeSet<String> = positions::first_naive(&lin).names().into_iter().collect();
    let last: BTreeSet<String> = positions::last_naive(&lin)
        .iter()
        .map(|c| c.to_string())
        .collect();
    let d = lin.position_count() + 1;
    let observe = |depth| {
        let en = enumerate_language(lin.expr(), depth, max_trees);
        let leaves: BTreeSet<String> = en.leaves().iter().map(|c| c.to_string()).collect();
        (en.roots(), leaves, en.truncated)
    };
    let (r1, l1, t1) = observe(d);
    let (r2, l2, t2) = observe(d + 1);
    for (roots, leaves) in [(&r1, &l1), (&r2, &l2)] {
        if !roots.is_subset(&first) {
            return Err(format!("roots {roots:?} not within First {first:?}"));
        }
        if !leaves.is_subset(&last) {
            return Err(format!("leaves {leaves:?} not within Last {last:?}"));
        }
    }
    if t1 || t2 {
        return Ok(Grounding::Inclusion);
    }
    if r1 != r2 || l1 != l2 {
        return Err(format!(
            "enumeration did not stabilize between depths {d} and {}",
            d + 1
        ));
    }
    if r1 != first {
        return Err(format!("roots {r1:?} differ from First {first:?}"));
    }
    if l1 != last {
        return Err(format!("leaves {l1:?} differ from Last {last:?}"));
    }
    Ok(Grounding::Exact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_unchecked;
    use crate::positions::PositionSet;

    fn small() -> OracleConfig {
        OracleConfig {
            seed: 3,
            count: 40,
            gen: GenConfig {
                max_width: 4,
                max_depth: 4,
                allow_empty: true,
            },
            depth: 3,
            max_trees: 5_000,
            negatives: 20,
        }
    }

    #[test]
    fn passes_on_correct_algorithms() {
        let r = Oracle::new(small()).run();
        assert!(r.passed(), "{r}");
        assert_eq!(r.expressions, 40);
    }

    #[test]
    fn zero_count_is_vacuous_pass() {
        let r = Oracle::new(OracleConfig {
            count: 0,
            ..small()
        })
        .run();
        assert!(r.passed());
        assert_eq!(r.expressions, 0);
        assert!(r.to_string().starts_with("oracle check: PASS"));
    }

    #[test]
    fn injected_fault_is_caught_and_shrunk() {
        let hook: FaultHook = Box::new(|algo, _, m| {
            if algo == FollowAlgorithm::Zpc {
                for set in m.values_mut() {
                    if let Some(c) = set.constants.iter().next().cloned() {
                        set.constants.remove(&c);
                        return;
                    }
                }
            }
        });
        let oracle = Oracle::new(OracleConfig {
            count: 200,
            ..small()
        })
        .with_fault(hook);
        let r = oracle.run();
        let c = r.counterexample.expect("fault must be found");
        assert!(c.message.contains("zpc"), "{}", c.message);
        assert!(c.expr.size() <= c.original.size());
        // The shrunk expression fails but none of its children do.
        assert!(oracle.check(&c.expr).is_err());
        assert!(c.expr.children().iter().all(|ch| oracle.check(ch).is_ok()));
    }

    #[test]
    fn language_check_on_fixed_expressions() {
        let alphabet = crate::gen::default_alphabet();
        for text in [
            "f(a)*a .a b",
            "g(a, b) + h(c)",
            "(f(a) + g(a, a))*a .a (b + c)",
            "0",
            "f(0)",
        ] {
            let e = parse_unchecked(text).unwrap();
            let r = check_language(&e, &alphabet, 4, 10_000, 30, 1).unwrap();
            assert!(matches!(r, LanguageCheck::Agree(_)), "{text}");
        }
        let e = parse_unchecked("f(a)*a").unwrap();
        assert_eq!(
            check_language(&e, &alphabet, 3, 10_000, 0, 1),
            Ok(LanguageCheck::Agree(3))
        );
    }

    #[test]
    fn grounding_on_fixed_expressions() {
        for text in ["a + f(f(f(b)))", "f(a)*a .a b", "g(c, a)*c"] {
            let e = parse_unchecked(text).unwrap();
            assert_eq!(check_grounding(&e, 100_000), Ok(Grounding::Exact), "{text}");
        }
        let _ = PositionSet::new();
    }
}
