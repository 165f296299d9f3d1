use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use treepos::gen::{bench_family, generate, GenConfig};
use treepos::harness::{check_language, FaultHook, LanguageCheck, Oracle, OracleConfig};
use treepos::positions;
use treepos::{
    algo, build_position_automaton_over, build_zpc, follow_sets, linearize, parse_expression_file,
    parse_tree, ExpressionFile, FollowAlgorithm, Nfta,
};

#[derive(Parser)]
#[command(
    name = "treepos",
    version,
    about = "Position automata for regular tree expressions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print First, Last and every Follow set of an expression.
    Follow {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Algo::Improved)]
        algo: Algo,
    },
    /// Build the position automaton and write it as JSON, DOT or text.
    Automaton {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write to this file instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Compare the automaton with the enumerated language.
        #[arg(long)]
        check: bool,
        /// Tree depth bound for `--check`.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Seed for the random trees tried by `--check`.
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Run a tree through an automaton: exit 0 if accepted, 1 if rejected.
    Accept {
        /// Automaton JSON file, as written by `treepos automaton`.
        automaton: PathBuf,
        /// Tree literal such as `g(b,a)`.
        tree: String,
        /// Print the states reached at the root.
        #[arg(short, long)]
        verbose: bool,
    },
    /// Cross-check all Follow algorithms and the automaton on random expressions.
    OracleCheck {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Tree depth bound for the language comparison.
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[command(flatten)]
        gen: GenArgs,
        #[arg(short, long)]
        verbose: bool,
        /// Corrupt the output of the zpc algorithm (harness self-test).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Time the improved and naive Follow computations on the benchmark family.
    Bench {
        /// Comma-separated family sizes.
        #[arg(long, default_value = "8,16,32,64")]
        sizes: String,
        /// Repetitions per measurement; the minimum is reported.
        #[arg(long, default_value_t = 3)]
        reps: usize,
    },
    /// Print random expressions, one per line.
    Gen {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[command(flatten)]
        gen: GenArgs,
    },
    /// Print the ZPC structure of an expression.
    Zpc {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
}

#[derive(Args)]
struct Input {
    /// Expression file (`alphabet:` and `expr:` lines); `-` reads standard input.
    #[arg(required_unless_present = "expr", conflicts_with = "expr")]
    file: Option<PathBuf>,
    /// Inline expression instead of a file; ranks are inferred.
    #[arg(long)]
    expr: Option<String>,
}

impl Input {
    fn load(&self) -> Result<ExpressionFile> {
        let text = match (&self.file, &self.expr) {
            (_, Some(e)) => format!("expr: {e}"),
            (Some(p), None) if p.as_os_str() == "-" => {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s)?;
                s
            }
            (Some(p), None) => {
                fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?
            }
            (None, None) => bail!("no input"),
        };
        Ok(parse_expression_file(&text)?)
    }
}

#[derive(Args)]
struct GenArgs {
    /// Maximum number of rank >= 1 occurrences.
    #[arg(long, default_value_t = 5)]
    width: usize,
    /// Maximum syntax-tree height.
    #[arg(long, default_value_t = 5)]
    expr_depth: usize,
    /// Never generate `0`.
    #[arg(long)]
    no_empty: bool,
}

impl GenArgs {
    fn config(&self) -> Result<GenConfig> {
        if self.expr_depth == 0 {
            bail!("--expr-depth must be positive");
        }
        Ok(GenConfig {
            max_width: self.width,
            max_depth: self.expr_depth,
            allow_empty: !self.no_empty,
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Naive,
    Decomposed,
    Zpc,
    Gamma,
    Improved,
}

impl From<Algo> for FollowAlgorithm {
    fn from(a: Algo) -> Self {
        match a {
            Algo::Naive => FollowAlgorithm::Naive,
            Algo::Decomposed => FollowAlgorithm::Decomposed,
            Algo::Zpc => FollowAlgorithm::Zpc,
            Algo::Gamma => FollowAlgorithm::Gamma,
            Algo::Improved => FollowAlgorithm::Improved,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    let mut out = io::stdout().lock();
    match command {
        Command::Follow { input, algo } => {
            let file = input.load()?;
            let lin = linearize(&file.expr.normalize_stars());
            let algo = FollowAlgorithm::from(algo);
            let first = algo::first_set(&lin, algo)?;
            let last: Vec<String> = positions::last_naive(&lin)
                .iter()
                .map(|c| c.to_string())
                .collect();
            writeln!(out, "First = {first}")?;
            writeln!(out, "Last = {{{}}}", last.join(", "))?;
            for ((p, k), set) in follow_sets(&lin, algo)? {
                writeln!(out, "Follow({p}, {k}) = {set}")?;
            }
        }
        Command::Automaton {
            input,
            format,
            output,
            check,
            depth,
            seed,
        } => {
            let file = input.load()?;
            let nfta = build_position_automaton_over(&file.expr, &file.alphabet)?;
            let text = render_automaton(&nfta, format);
            match output {
                Some(path) => {
                    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?
                }
                None => out.write_all(text.as_bytes())?,
            }
            if check {
                if depth == 0 {
                    bail!("--depth must be positive");
                }
                match check_language(&file.expr, &file.alphabet, depth, 1_000_000, 200, seed) {
                    Ok(LanguageCheck::Agree(n)) => eprintln!("oracle check: PASS ({n} trees)"),
                    Ok(LanguageCheck::Truncated) => {
                        bail!("oracle check: language too large to enumerate at depth {depth}")
                    }
                    Err(m) => {
                        eprintln!("oracle check: FAIL: {m}");
                        return Ok(ExitCode::from(1));
                    }
                }
            }
        }
        Command::Accept {
            automaton,
            tree,
            verbose,
        } => {
            let text = fs::read_to_string(&automaton)
                .with_context(|| format!("reading {}", automaton.display()))?;
            let nfta = Nfta::from_json(&text)?;
            let t = parse_tree(&tree)?;
            let reached = nfta.run(&t)?;
            let accepted = !reached.is_disjoint(&nfta.final_states);
            if verbose {
                let names: Vec<String> = reached.iter().map(|q| q.name()).collect();
                writeln!(out, "reached = {{{}}}", names.join(", "))?;
            }
            writeln!(out, "{}", if accepted { "accepted" } else { "rejected" })?;
            return Ok(ExitCode::from(if accepted { 0 } else { 1 }));
        }
        Command::OracleCheck {
            seed,
            count,
            depth,
            gen,
            verbose,
            inject_fault,
        } => {
            if depth == 0 {
                bail!("--depth must be positive");
            }
            let config = OracleConfig {
                seed,
                count,
                gen: gen.config()?,
                depth,
                ..OracleConfig::default()
            };
            if verbose {
                eprintln!("{config:?}");
            }
            let mut oracle = Oracle::new(config);
            if inject_fault {
                oracle = oracle.with_fault(drop_one_constant());
            }
            let report = oracle.run();
            writeln!(out, "{report}")?;
            if !report.passed() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Bench { sizes, reps } => {
            let sizes: Vec<usize> = sizes
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| s.parse().with_context(|| format!("bad size `{s}`")))
                .collect::<Result<_>>()?;
            writeln!(out, "n,size,width,t_naive_ns,t_improved_ns")?;
            for n in sizes {
                let e = bench_family(n);
                let lin = linearize(&e.normalize_stars());
                let reps = reps.max(1);
                let naive = min_time(reps, || follow_sets(&lin, FollowAlgorithm::Naive).map(drop))?;
                let improved = min_time(reps, || {
                    follow_sets(&lin, FollowAlgorithm::Improved).map(drop)
                })?;
                writeln!(
                    out,
                    "{n},{},{},{},{}",
                    e.size(),
                    e.width(),
                    naive.as_nanos(),
                    improved.as_nanos()
                )?;
            }
        }
        Command::Gen { seed, count, gen } => {
            for e in generate(seed, count, &gen.config()?) {
                writeln!(out, "{e}")?;
            }
        }
        Command::Zpc { input, format } => {
            let file = input.load()?;
            let z = build_zpc(&linearize(&file.expr.normalize_stars()))?;
            match format {
                Format::Dot => out.write_all(z.to_dot().as_bytes())?,
                Format::Text | Format::Json => {
                    if format == Format::Json {
                        bail!("the ZPC structure is available as dot or text");
                    }
                    for id in 0..z.len() {
                        let n = z.node(id)?;
                        let first0: Vec<String> = z
                            .first0_symbols(id)?
                            .iter()
                            .map(|c| c.to_string())
                            .collect();
                        write!(out, "{id} {} first0={{{}}}", z.label(id), first0.join(","))?;
                        if let Some(g) = n.gamma {
                            write!(out, " gamma={g}")?;
                        }
                        if !n.in_forest {
                            write!(out, " deleted")?;
                        }
                        writeln!(out)?;
                    }
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn render_automaton(nfta: &Nfta, format: Format) -> String {
    match format {
        Format::Json => nfta.to_json() + "\n",
        Format::Dot => nfta.to_dot(),
        Format::Text => {
            let names = |it: &mut dyn Iterator<Item = String>| it.collect::<Vec<_>>().join(", ");
            let mut s = format!(
                "states = {{{}}}\nfinal = {{{}}}\n",
                names(&mut nfta.states.iter().map(|q| q.name())),
                names(&mut nfta.final_states.iter().map(|q| q.name()))
            );
            for r in nfta.sorted_rules() {
                s.push_str(&format!("{r}\n"));
            }
            s
        }
    }
}

fn min_time(reps: usize, mut f: impl FnMut() -> treepos::Result<()>) -> Result<Duration> {
    let mut best = Duration::MAX;
    for _ in 0..reps {
        let t = Instant::now();
        f()?;
        best = best.min(t.elapsed());
    }
    Ok(best)
}

/// Removes one constant from the first non-empty Follow set of the zpc
/// algorithm, so the harness has something to find.
fn drop_one_constant() -> FaultHook {
    Box::new(|algo, _, sets| {
        if algo != FollowAlgorithm::Zpc {
            return;
        }
        if let Some(set) = sets.values_mut().find(|s| !s.constants.is_empty()) {
            let c = set.constants.iter().next().cloned().expect("non-empty");
            set.constants.remove(&c);
        }
    })
}
