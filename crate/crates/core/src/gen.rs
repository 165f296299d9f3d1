//! Seeded random expressions and trees, and the benchmark family.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{RankedAlphabet, Symbol};
use crate::expr::TreeExpr;
use crate::{Expr, Tree};

/// Bounds for [`ExprGen`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    /// Maximum number of rank ≥ 1 occurrences.
    pub max_width: usize,
    /// Maximum height of the syntax tree (a leaf has height 1).
    pub max_depth: usize,
    /// Whether `0` may appear.
    pub allow_empty: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_width: 5,
            max_depth: 5,
            allow_empty: true,
        }
    }
}

/// The fixed alphabet random expressions are drawn from: constants `a b c`,
/// unary `f h`, binary `g`, ternary `k`.
pub fn default_alphabet() -> RankedAlphabet {
    RankedAlphabet::from_pairs([
        ("a", 0),
        ("b", 0),
        ("c", 0),
        ("f", 1),
        ("h", 1),
        ("g", 2),
        ("k", 3),
    ])
    .expect("distinct symbols")
}

#[derive(Clone, Copy)]
enum Kind {
    Empty,
    Const,
    Apply,
    Sum,
    Product,
    Star,
}

/// Random expression generator, stratified by node kind under a depth
/// budget and a width budget.
pub struct ExprGen {
    rng: ChaCha8Rng,
    config: GenConfig,
    constants: Vec<Symbol>,
    symbols: Vec<(Symbol, usize)>,
}

impl ExprGen {
    pub fn new(seed: u64, config: GenConfig) -> Self {
        let alphabet = default_alphabet();
        ExprGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            config,
            constants: alphabet.constants().cloned().collect(),
            symbols: alphabet
                .non_constants()
                .map(|s| (s.clone(), alphabet.rank(s.as_str()).unwrap_or(0)))
                .collect(),
        }
    }

    pub fn alphabet(&self) -> RankedAlphabet {
        default_alphabet()
    }

    pub fn next_expr(&mut self) -> Expr {
        let mut budget = self.config.max_width;
        let depth = self.config.max_depth.max(1);
        self.expr(depth, &mut budget)
    }

    fn constant(&mut self) -> Symbol {
        self.constants
            .choose(&mut self.rng)
            .expect("constants")
            .clone()
    }

    fn expr(&mut self, depth: usize, budget: &mut usize) -> Expr {
        // Leaves are rare above the bottom level so that languages stay
        // non-trivial at small depths.
        let inner = depth >= 2;
        let mut kinds: Vec<(Kind, u32)> = vec![(Kind::Const, if inner { 2 } else { 6 })];
        if self.config.allow_empty {
            kinds.push((Kind::Empty, 1));
        }
        if inner {
            kinds.extend([(Kind::Sum, 3), (Kind::Product, 3), (Kind::Star, 3)]);
            if *budget > 0 {
                kinds.push((Kind::Apply, 6));
            }
        }
        let kind = kinds
            .choose_weighted(&mut self.rng, |k| k.1)
            .expect("weights")
            .0;
        match kind {
            Kind::Empty => TreeExpr::Empty,
            Kind::Const => TreeExpr::Const(self.constant()),
            Kind::Apply => {
                *budget -= 1;
                let (f, rank) = self.symbols.choose(&mut self.rng).expect("symbols").clone();
                let children = (0..rank).map(|_| self.expr(depth - 1, budget)).collect();
                TreeExpr::Apply(f, children)
            }
            Kind::Sum => {
                let l = self.expr(depth - 1, budget);
                TreeExpr::Sum(Box::new(l), Box::new(self.expr(depth - 1, budget)))
            }
            Kind::Product => {
                let l = self.expr(depth - 1, budget);
                let c = self.constant();
                TreeExpr::Product(Box::new(l), c, Box::new(self.expr(depth - 1, budget)))
            }
            Kind::Star => {
                let body = self.expr(depth - 1, budget);
                TreeExpr::Star(Box::new(body), self.constant())
            }
        }
    }
}

/// `count` expressions from `seed`.
pub fn generate(seed: u64, count: usize, config: &GenConfig) -> Vec<Expr> {
    let mut g = ExprGen::new(seed, config.clone());
    (0..count).map(|_| g.next_expr()).collect()
}

/// A uniform-ish random tree over `alphabet` of depth ≤ `max_depth`.
pub fn random_tree(rng: &mut impl Rng, alphabet: &RankedAlphabet, max_depth: usize) -> Tree {
    let constants: Vec<&Symbol> = alphabet.constants().collect();
    let others: Vec<(&Symbol, usize)> = alphabet.iter().filter(|(_, r)| *r > 0).collect();
    assert!(!constants.is_empty(), "alphabet needs a constant");
    fn go(
        rng: &mut impl Rng,
        constants: &[&Symbol],
        others: &[(&Symbol, usize)],
        depth: usize,
    ) -> Tree {
        if depth <= 1 || others.is_empty() || rng.gen_bool(0.35) {
            return Tree::Leaf((*constants.choose(rng).expect("constant")).clone());
        }
        let (f, rank) = *others.choose(rng).expect("symbol");
        let children = (0..rank)
            .map(|_| go(rng, constants, others, depth - 1))
            .collect();
        Tree::Node(f.clone(), children)
    }
    go(rng, &constants, &others, max_depth.max(1))
}

/// One benchmark block `(f(a)*a .a cᵢ + h(cᵢ))*cᵢ`.
fn bench_block(i: usize) -> Expr {
    let c = format!("c{i}");
    let inner = Expr::product(
        Expr::star(Expr::apply("f".into(), vec![Expr::constant("a")]), "a"),
        "a",
        Expr::constant(&c),
    );
    Expr::star(
        Expr::sum(inner, Expr::apply("h".into(), vec![Expr::constant(&c)])),
        &c,
    )
}

/// `Eₙ = ((B₁ ·_{c₁} B₂) ·_{c₂} B₃) ⋯ ·_{c_{n-1}} Bₙ` with the blocks of
/// [`bench_block`]; size and width grow linearly in `n`. `E₀ = 0`.
pub fn bench_family(n: usize) -> Expr {
    let mut e = match n {
        0 => return Expr::Empty,
        _ => bench_block(1),
    };
    for i in 2..=n {
        e = Expr::product(e, &format!("c{}", i - 1), bench_block(i));
    }
    e
}
