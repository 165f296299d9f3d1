//! End-to-end acceptance checks. Runs as one test so the timing criterion is
//! not disturbed by sibling tests; prints one line per criterion.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::{Duration, Instant};

use treepos::gen::{bench_family, GenConfig};
use treepos::harness::{check_grounding, Grounding, Oracle, OracleConfig};
use treepos::positions::PositionSet;
use treepos::zpc::{build_zpc, Removal};
use treepos::{
    build_position_automaton, follow_sets, linearize, parse_alphabet, parse_expression, Expr,
    FollowAlgorithm, LinearizedExpr, Position,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const E1: &str = "(f(a)*a .a b + h(b))*b + g(c,a)*c .c (f(a)*a .a b + h(b))*b";

fn e1() -> Expr {
    let alphabet = parse_alphabet("a:0 b:0 c:0 f:1 h:1 g:2").unwrap();
    parse_expression(E1, &alphabet).unwrap()
}

fn e1_bar() -> LinearizedExpr {
    linearize(&e1().normalize_stars())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))
}

fn golden_first_follow() -> Outcome {
    let start = Instant::now();
    let lin = e1_bar();
    let pos = |s| Position::parse(s).unwrap();
    let want_first = PositionSet::from_names(&["b", "f1", "h2", "g3", "f4", "h5"]);
    let want = [
        ("f1", 1, vec!["b", "f1", "h2"]),
        ("h2", 1, vec!["b", "f1", "h2"]),
        ("g3", 1, vec!["b", "g3", "f4", "h5"]),
        ("g3", 2, vec!["a"]),
        ("f4", 1, vec!["b", "f4", "h5"]),
        ("h5", 1, vec!["b", "f4", "h5"]),
    ];
    let algos = [
        FollowAlgorithm::Naive,
        FollowAlgorithm::Decomposed,
        FollowAlgorithm::Gamma,
        FollowAlgorithm::Zpc,
        FollowAlgorithm::Improved,
    ];
    for algo in algos {
        let first = treepos::algo::first_set(&lin, algo).map_err(|e| e.to_string())?;
        ensure(first == want_first, || format!("{algo}: First = {first}"))?;
        let all = follow_sets(&lin, algo).map_err(|e| e.to_string())?;
        ensure(all.len() == 6, || {
            format!("{algo}: {} Follow sets", all.len())
        })?;
        for (p, k, names) in &want {
            let got = &all[&(pos(p), *k)];
            ensure(*got == PositionSet::from_names(names), || {
                format!("{algo}: Follow({p}, {k}) = {got}")
            })?;
        }
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!(
        "First and 6 Follow sets exact for {} algorithms",
        algos.len()
    ))
}

fn golden_automaton() -> Outcome {
    let start = Instant::now();
    let a = build_position_automaton(&e1());
    let states: BTreeSet<String> = a.states.iter().map(|q| q.name()).collect();
    let want_states: BTreeSet<String> = ["eps1", "f1^1", "h2^1", "g3^1", "g3^2", "f4^1", "h5^1"]
        .map(String::from)
        .into();
    ensure(states == want_states, || format!("states {states:?}"))?;
    let finals: Vec<String> = a.final_states.iter().map(|q| q.name()).collect();
    ensure(finals == ["eps1"], || format!("final states {finals:?}"))?;
    let listed: BTreeSet<String> = [
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
    .map(String::from)
    .into();
    let rules: BTreeSet<String> = a.sorted_rules().iter().map(|r| r.to_string()).collect();
    ensure(rules == listed, || {
        let extra: Vec<_> = rules.difference(&listed).collect();
        let missing: Vec<_> = listed.difference(&rules).collect();
        format!("extra {extra:?}, missing {missing:?}")
    })?;
    within(start, Duration::from_secs(1))?;
    Ok(format!(
        "{} states, {} rules, exactly the listed ones",
        a.states.len(),
        a.rules.len()
    ))
}

fn theorem_one() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut trees = 0;
    let mut truncated = 0;
    for (seed, allow_empty) in [(2024, true), (2025, false)] {
        let config = OracleConfig {
            seed,
            count: 300,
            gen: GenConfig {
                max_width: 5,
                max_depth: 5,
                allow_empty,
            },
            depth: 4,
            max_trees: 20_000,
            negatives: 50,
        };
        let report = Oracle::new(config).run();
        if let Some(c) = &report.counterexample {
            return Err(c.to_string());
        }
        checked += report.expressions - report.truncated;
        trees += report.trees;
        truncated += report.truncated;
    }
    ensure(checked >= 500, || {
        format!("only {checked} expressions checked")
    })?;
    within(start, Duration::from_secs(300))?;
    Ok(format!(
        "{checked} expressions, {trees} trees of depth <= 4 agree ({truncated} skipped as truncated)"
    ))
}

fn algorithm_equivalence() -> Outcome {
    let start = Instant::now();
    let config = OracleConfig {
        seed: 99,
        gen: GenConfig {
            max_width: 8,
            max_depth: 6,
            allow_empty: true,
        },
        ..OracleConfig::default()
    };
    let oracle = Oracle::new(config.clone());
    let mut gen = treepos::gen::ExprGen::new(config.seed, config.gen);
    let mut slots = 0;
    let count = 1000;
    for _ in 0..count {
        let e = gen.next_expr();
        oracle.check_follow(&e).map_err(|m| format!("{e}: {m}"))?;
        let lin = linearize(&e.normalize_stars());
        for (p, k) in lin.slots() {
            let whole = treepos::positions::follow_naive(&lin, &p, k).map_err(|e| e.to_string())?;
            let c = treepos::positions::last_follow(&lin, &p, k).map_err(|e| e.to_string())?;
            let m = treepos::positions::follow_sup(&lin, &p, k).map_err(|e| e.to_string())?;
            ensure(whole.constants == c && whole.marked == m, || {
                format!("{e}: decomposition of Follow({p}, {k})")
            })?;
            slots += 1;
        }
        let first = treepos::positions::first_naive(&lin);
        ensure(
            first.constants == treepos::positions::first0(&lin)
                && first.marked == treepos::positions::first_sup(&lin),
            || format!("{e}: decomposition of First"),
        )?;
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!(
        "{count} expressions, {slots} slots, 5 algorithms agree"
    ))
}

fn grounding() -> Outcome {
    let start = Instant::now();
    let mut gen = treepos::gen::ExprGen::new(
        5,
        GenConfig {
            max_width: 4,
            max_depth: 4,
            allow_empty: false,
        },
    );
    let mut exact = 0;
    let mut redrawn = 0;
    while exact < 200 {
        let e = gen.next_expr();
        match check_grounding(&e, 20_000).map_err(|m| format!("{e}: {m}"))? {
            Grounding::Exact => exact += 1,
            Grounding::Inclusion => redrawn += 1,
        }
        ensure(redrawn < 200, || {
            format!("{redrawn} truncated enumerations")
        })?;
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!(
        "{exact} expressions stable and exact ({redrawn} redrawn after truncation)"
    ))
}

fn min_time(reps: usize, mut f: impl FnMut()) -> Duration {
    (0..reps)
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed()
        })
        .min()
        .expect("at least one repetition")
}

fn measure_scaling() -> Result<(Vec<f64>, Vec<f64>), String> {
    let mut improved = Vec::new();
    let mut speedup = Vec::new();
    for n in [8, 16, 32, 64] {
        let lin = linearize(&bench_family(n).normalize_stars());
        let want = follow_sets(&lin, FollowAlgorithm::Naive).map_err(|e| e.to_string())?;
        let fast = follow_sets(&lin, FollowAlgorithm::Improved).map_err(|e| e.to_string())?;
        ensure(fast == want, || format!("n = {n}: results differ"))?;
        let ti = min_time(7, || {
            std::hint::black_box(follow_sets(&lin, FollowAlgorithm::Improved).unwrap());
        });
        let tn = min_time(3, || {
            std::hint::black_box(follow_sets(&lin, FollowAlgorithm::Naive).unwrap());
        });
        improved.push(ti.as_secs_f64());
        speedup.push(tn.as_secs_f64() / ti.as_secs_f64());
    }
    let ratios = improved.windows(2).map(|w| w[1] / w[0]).collect();
    Ok((ratios, speedup))
}

fn scaling() -> Outcome {
    let start = Instant::now();
    // Wall-clock measurements can be disturbed by other processes; a
    // measurement round is repeated up to three times.
    let mut last = String::new();
    for attempt in 1..=3 {
        let (ratios, speedup) = measure_scaling()?;
        let ratios_ok = ratios[1..].iter().all(|r| (2.0..=6.0).contains(r));
        let growing = speedup.windows(2).all(|w| w[1] > w[0]) && speedup[0] > 1.0;
        last = format!(
            "doubling ratios {:.2?}, speedup over naive {:.1?}",
            ratios, speedup
        );
        if ratios_ok && growing {
            within(start, Duration::from_secs(120))?;
            return Ok(format!("{last} (round {attempt})"));
        }
    }
    Err(last)
}

fn zpc_counts() -> Outcome {
    let z = build_zpc(&e1_bar()).map_err(|e| e.to_string())?;
    ensure(z.len() == 34, || format!("{} nodes", z.len()))?;
    let label = |id| z.label(id);
    let gamma = z.gamma_links();
    let want = [
        (2, 1),
        (5, 10),
        (6, 5),
        (15, 21),
        (16, 15),
        (22, 21),
        (25, 30),
        (26, 25),
    ];
    ensure(gamma == want, || format!("γ links {gamma:?}"))?;
    // Each link starts at the left operand of a product or the body of a
    // star and ends at the right operand or the star itself.
    for &(from, to) in &gamma {
        let parent = z.node(from).unwrap().parent.unwrap();
        let ok = match label(parent).chars().next() {
            Some('.') => z.node(parent).unwrap().children == [from, to],
            Some('*') => parent == to,
            _ => false,
        };
        ensure(ok, || {
            format!("γ link {from}->{to} under {}", label(parent))
        })?;
    }
    let count = |why| z.removed_links().iter().filter(|r| r.2 == why).count();
    let guard = count(Removal::ProductGuard);
    let apply: Vec<(usize, usize)> = z
        .removed_links()
        .iter()
        .filter(|r| r.2 == Removal::ApplyChild)
        .map(|&(a, b, _)| (a, b))
        .collect();
    ensure(guard == 0, || format!("{guard} product-guard removals"))?;
    ensure(
        apply == [(7, 8), (11, 12), (17, 18), (17, 19), (27, 28), (31, 32)],
        || format!("apply-child removals {apply:?}"),
    )?;
    let deleted: Vec<usize> = (0..z.len())
        .filter(|&id| !z.node(id).unwrap().in_forest)
        .collect();
    ensure(
        deleted == [8, 9, 10, 12, 13, 18, 19, 20, 28, 29, 30, 32, 33],
        || format!("deleted leaves {deleted:?}"),
    )?;
    Ok(format!(
        "{} γ links, {} apply-child removals, {} deleted constant leaves, {} guard removals",
        gamma.len(),
        apply.len(),
        deleted.len(),
        guard
    ))
}

/// Writes past the test harness's output capture so the verdicts show up
/// in a plain `cargo test` run.
fn report(line: String) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 7] = [
        ("golden First/Follow", golden_first_follow),
        ("golden automaton", golden_automaton),
        ("language equality", theorem_one),
        ("algorithm equivalence", algorithm_equivalence),
        ("oracle grounding", grounding),
        ("scaling", scaling),
        ("ZPC structure", zpc_counts),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => report(format!("criterion {} ({name}): PASS: {detail}", i + 1)),
            Err(why) => {
                report(format!("criterion {} ({name}): FAIL: {why}", i + 1));
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
