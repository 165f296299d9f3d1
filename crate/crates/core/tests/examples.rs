use std::collections::BTreeSet;

use treepos::positions::{self, PositionSet};
use treepos::zpc::{build_zpc, substitute_subexpr, Removal};
use treepos::{
    build_position_automaton, enumerate_language, follow_sets, linearize, parse_alphabet,
    parse_expression, parse_tree, parse_unchecked, Error, Expr, FollowAlgorithm, LinearizedExpr,
    Position,
};

const E1: &str = "(f(a)*a .a b + h(b))*b + g(c,a)*c .c (f(a)*a .a b + h(b))*b";

fn e1() -> Expr {
    let alphabet = parse_alphabet("a:0 b:0 c:0 f:1 h:1 g:2").unwrap();
    parse_expression(E1, &alphabet).unwrap()
}

fn e1_bar() -> LinearizedExpr {
    linearize(&e1().normalize_stars())
}

fn pos(name: &str) -> Position {
    Position::parse(name).unwrap()
}

fn set(names: &[&str]) -> PositionSet {
    PositionSet::from_names(names)
}

#[test]
fn linearized_form_has_five_marks_in_order() {
    let lin = linearize(&e1());
    assert_eq!(
        lin.expr().to_string(),
        "(f1(a)*a .a b + h2(b))*b + g3(c,a)*c .c (f4(a)*a .a b + h5(b))*b"
    );
    let marks: Vec<String> = lin.positions().map(|p| p.to_string()).collect();
    assert_eq!(marks, ["f1", "h2", "g3", "f4", "h5"]);
    assert_eq!(lin.expr().unmark(), e1());
}

#[test]
fn measures_of_running_example() {
    let e = e1();
    assert_eq!(e.width(), 5);
    assert_eq!(e.size(), 24);
    assert_eq!(e.normalize_stars().size(), 34);
}

#[test]
fn first_of_running_example() {
    let lin = e1_bar();
    let want = set(&["b", "f1", "h2", "g3", "f4", "h5"]);
    assert_eq!(positions::first_naive(&lin), want);
    assert_eq!(positions::first_decomposed(&lin), want);
    assert_eq!(positions::first0(&lin), BTreeSet::from(["b".into()]));
}

#[test]
fn last_of_running_example() {
    let lin = e1_bar();
    assert_eq!(
        positions::last_naive(&lin),
        BTreeSet::from(["a".into(), "b".into()])
    );
}

#[test]
fn follow_sets_of_running_example() {
    let lin = e1_bar();
    let want = [
        ("f1", 1, set(&["b", "f1", "h2"])),
        ("h2", 1, set(&["b", "f1", "h2"])),
        ("g3", 1, set(&["b", "g3", "f4", "h5"])),
        ("g3", 2, set(&["a"])),
        ("f4", 1, set(&["b", "f4", "h5"])),
        ("h5", 1, set(&["b", "f4", "h5"])),
    ];
    for algo in FollowAlgorithm::ALL {
        let all = follow_sets(&lin, algo).unwrap();
        assert_eq!(all.len(), want.len(), "{algo}");
        for (p, k, w) in &want {
            assert_eq!(&all[&(pos(p), *k)], w, "{algo} Follow({p}, {k})");
        }
    }
}

#[test]
fn follow_parts_of_running_example() {
    let lin = e1_bar();
    let consts = |p, k| positions::last_follow(&lin, &pos(p), k).unwrap();
    let marked = |p, k| positions::follow_sup(&lin, &pos(p), k).unwrap();
    assert_eq!(consts("f1", 1), BTreeSet::from(["b".into()]));
    assert_eq!(consts("g3", 2), BTreeSet::from(["a".into()]));
    assert_eq!(marked("h5", 1), BTreeSet::from([pos("f4"), pos("h5")]));
    assert_eq!(
        marked("g3", 1),
        BTreeSet::from([pos("g3"), pos("f4"), pos("h5")])
    );
}

#[test]
fn follow_errors() {
    let lin = e1_bar();
    assert!(matches!(
        positions::follow_naive(&lin, &pos("g3"), 3),
        Err(Error::ChildOutOfRange { k: 3, rank: 2, .. })
    ));
    assert!(matches!(
        positions::follow_naive(&lin, &pos("f9"), 1),
        Err(Error::PositionAbsent(_))
    ));
    let raw = linearize(&e1());
    assert!(matches!(
        positions::follow_naive(&raw, &pos("f1"), 1),
        Err(Error::NotNormalized)
    ));
}

#[test]
fn language_of_running_example_contains_listed_trees() {
    let lin = linearize(&e1());
    let lang = enumerate_language(lin.expr(), 3, 100_000);
    assert!(!lang.truncated);
    let names: BTreeSet<String> = lang.trees.iter().map(|t| t.to_string()).collect();
    for t in [
        "b",
        "f1(b)",
        "f1(f1(b))",
        "f1(h2(b))",
        "h2(b)",
        "h2(f1(b))",
        "h2(h2(b))",
        "g3(b,a)",
        "g3(g3(b,a),a)",
        "g3(f4(b),a)",
        "g3(h5(b),a)",
        "f4(f4(b))",
        "f4(h5(b))",
        "h5(f4(b))",
        "h5(h5(b))",
    ] {
        assert!(names.contains(t), "{t}");
    }
}

/// `(symbol, args, target)` rules of the position automaton of the running example.
fn listed_rules() -> BTreeSet<String> {
    [
        "f(f1^1) -> eps1",
        "f(f1^1) -> f1^1",
        "f(f1^1) -> h2^1",
        "h(h2^1) -> eps1",
        "h(h2^1) -> f1^1",
        "h(h2^1) -> h2^1",
        "g(g3^1,g3^2) -> g3^1",
        "g(g3^1,g3^2) -> eps1",
        "f(f4^1) -> eps1",
        "f(f4^1) -> g3^1",
        "f(f4^1) -> f4^1",
        "f(f4^1) -> h5^1",
        "h(h5^1) -> eps1",
        "h(h5^1) -> g3^1",
        "h(h5^1) -> f4^1",
        "h(h5^1) -> h5^1",
        "a -> g3^2",
        "b -> eps1",
        "b -> f1^1",
        "b -> h2^1",
        "b -> g3^1",
        "b -> f4^1",
        "b -> h5^1",
    ]
    .into_iter()
    .map(String::from)
    .collect()
}

#[test]
fn automaton_of_running_example() {
    let a = build_position_automaton(&e1());
    let states: BTreeSet<String> = a.states.iter().map(|q| q.name()).collect();
    let want_states: BTreeSet<String> = ["eps1", "f1^1", "h2^1", "g3^1", "g3^2", "f4^1", "h5^1"]
        .into_iter()
        .map(String::from)
        .collect();
    assert_eq!(states, want_states);
    assert_eq!(
        a.final_states.iter().map(|q| q.name()).collect::<Vec<_>>(),
        ["eps1"]
    );
    let rules: BTreeSet<String> = a.rules.iter().map(|r| r.to_string()).collect();
    assert_eq!(rules, listed_rules());
    assert_eq!(a.rules.len(), 23);
}

#[test]
fn membership_in_running_example() {
    let a = build_position_automaton(&e1());
    let yes = ["g(b,a)", "b", "f(h(b))", "g(g(f(b),a),a)", "h(f(f(b)))"];
    let no = ["a", "f(a)", "g(a,b)", "g(b,b)", "f(g(b,a))", "c"];
    for t in yes {
        assert!(a.accepts(&parse_tree(t).unwrap()).unwrap(), "{t}");
    }
    for t in no {
        assert!(!a.accepts(&parse_tree(t).unwrap()).unwrap(), "{t}");
    }
}

#[test]
fn automaton_matches_language_on_shallow_trees() {
    let e = e1();
    let lang = enumerate_language(&e, 4, 100_000);
    assert!(!lang.truncated);
    let derived = build_position_automaton(&e).accepted_trees(4, 100_000);
    assert_eq!(derived.trees, lang.trees);
}

#[test]
fn small_automata() {
    let a = build_position_automaton(&parse_unchecked("f(a)").unwrap());
    assert_eq!(a.states.len(), 2);
    assert_eq!(a.rules.len(), 2);
    let b = build_position_automaton(&parse_unchecked("b").unwrap());
    assert_eq!(b.states.len(), 1);
    assert_eq!(b.rules.len(), 1);
}

/// Hand-derived preorder of the normalized running-example syntax tree.
const NODES: [&str; 34] = [
    "+", "*b", "+", "+", ".a", "*a", "+", "f1", "a", "a", "b", "h2", "b", "b", ".c", "*c", "+",
    "g3", "c", "a", "c", "*b", "+", "+", ".a", "*a", "+", "f4", "a", "a", "b", "h5", "b", "b",
];

#[test]
fn zpc_structure_of_running_example() {
    let z = build_zpc(&e1_bar()).unwrap();
    let labels: Vec<String> = (0..z.len()).map(|id| z.label(id)).collect();
    assert_eq!(labels, NODES);

    // One γ link per product (left operand → right operand) and per star
    // (body → star).
    let gamma = z.gamma_links();
    assert_eq!(
        gamma,
        [
            (2, 1),
            (5, 10),
            (6, 5),
            (15, 21),
            (16, 15),
            (22, 21),
            (25, 30),
            (26, 25)
        ]
    );

    let removed = |why| {
        z.removed_links()
            .iter()
            .filter(|r| r.2 == why)
            .map(|&(a, b, _)| (a, b))
            .collect::<Vec<_>>()
    };
    assert!(removed(Removal::ProductGuard).is_empty());
    assert_eq!(
        removed(Removal::ApplyChild),
        [(7, 8), (11, 12), (17, 18), (17, 19), (27, 28), (31, 32)]
    );
    let deleted: Vec<usize> = (0..z.len())
        .filter(|&id| !z.node(id).unwrap().in_forest)
        .collect();
    assert_eq!(deleted, [8, 9, 10, 12, 13, 18, 19, 20, 28, 29, 30, 32, 33]);
    for &id in &deleted {
        assert!(NODES[id].len() == 1 && NODES[id].chars().all(|c| c.is_ascii_lowercase()));
    }

    let chain = z.gamma_chain(z.position_node(&pos("f4")).unwrap()).unwrap();
    assert_eq!(chain, [26, 25, 22]);
}

#[test]
fn substitution_example() {
    let e = parse_unchecked("f(a + g(b), a + b + h(a))*a .b l(b)").unwrap();
    let lin = linearize(&e);
    let f1 = pos("f1");
    let ea = substitute_subexpr(&lin, &f1, &"a".into()).unwrap();
    let eb = substitute_subexpr(&lin, &f1, &"b".into()).unwrap();
    assert_eq!(ea.origin().to_string(), "f(a)*a .b l(b)");
    assert_eq!(eb.origin().to_string(), "f(b)*a .b l(b)");
}

#[test]
fn product_with_leading_constant() {
    let lin = linearize(&parse_unchecked("a .a b").unwrap());
    assert_eq!(positions::first_naive(&lin), set(&["b"]));
    let lang = enumerate_language(&parse_unchecked("f(a) .a b").unwrap(), 3, 100);
    let names: Vec<String> = lang.trees.iter().map(|t| t.to_string()).collect();
    assert_eq!(names, ["f(b)"]);
}

#[test]
fn parse_errors() {
    let alphabet = parse_alphabet("a:0 b:0 f:1").unwrap();
    assert!(matches!(
        parse_expression("f(a,b)", &alphabet),
        Err(Error::ArityMismatch {
            rank: 1,
            found: 2,
            ..
        })
    ));
    assert!(matches!(
        parse_expression("q(a)", &alphabet),
        Err(Error::UndeclaredSymbol(_))
    ));
    assert!(matches!(parse_unchecked("f(a"), Err(Error::Syntax { .. })));
}
