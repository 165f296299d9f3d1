use std::collections::BTreeSet;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{Nfta, Rule, State};
use crate::alphabet::{RankedAlphabet, Symbol};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct JsonSymbol {
    symbol: String,
    rank: usize,
}

#[derive(Serialize, Deserialize)]
struct JsonRule {
    symbol: String,
    args: Vec<String>,
    target: String,
}

#[derive(Serialize, Deserialize)]
struct JsonAutomaton {
    alphabet: Vec<JsonSymbol>,
    states: Vec<String>,
    #[serde(rename = "final")]
    final_states: Vec<String>,
    rules: Vec<JsonRule>,
}

fn state(name: &str) -> Result<State> {
    State::parse(name).ok_or_else(|| Error::InvalidAutomaton(format!("bad state name `{name}`")))
}

impl Nfta {
    /// JSON with rules sorted by symbol, arguments and target names.
    pub fn to_json(&self) -> String {
        let doc = JsonAutomaton {
            alphabet: self
                .alphabet
                .iter()
                .map(|(s, rank)| JsonSymbol {
                    symbol: s.to_string(),
                    rank,
                })
                .collect(),
            states: self.states.iter().map(State::name).collect(),
            final_states: self.final_states.iter().map(State::name).collect(),
            rules: self
                .sorted_rules()
                .into_iter()
                .map(|r| {
                    let (symbol, args, target) = r.sort_key();
                    JsonRule {
                        symbol,
                        args,
                        target,
                    }
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Nfta> {
        let doc: JsonAutomaton =
            serde_json::from_str(text).map_err(|e| Error::InvalidAutomaton(e.to_string()))?;
        let mut alphabet = RankedAlphabet::new();
        for s in doc.alphabet {
            alphabet.insert(Symbol::from(s.symbol), s.rank)?;
        }
        let states = doc
            .states
            .iter()
            .map(|s| state(s))
            .collect::<Result<BTreeSet<_>>>()?;
        let final_states = doc
            .final_states
            .iter()
            .map(|s| state(s))
            .collect::<Result<BTreeSet<_>>>()?;
        let rules = doc
            .rules
            .into_iter()
            .map(|r| {
                Ok(Rule {
                    symbol: Symbol::from(r.symbol),
                    args: r.args.iter().map(|a| state(a)).collect::<Result<_>>()?,
                    target: state(&r.target)?,
                })
            })
            .collect::<Result<BTreeSet<_>>>()?;
        let a = Nfta {
            alphabet,
            states,
            final_states,
            rules,
        };
        a.check()?;
        Ok(a)
    }

    /// Graphviz rendering. Rules of rank ≥ 2 fan in through a small
    /// auxiliary node; constant rules start from an invisible point.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph nfta {\n  rankdir=LR;\n");
        for q in &self.states {
            let shape = if self.final_states.contains(q) {
                "doublecircle"
            } else {
                "circle"
            };
            let _ = writeln!(s, "  \"{q}\" [shape={shape}];");
        }
        for (i, r) in self.sorted_rules().into_iter().enumerate() {
            match r.args.len() {
                0 => {
                    let _ = writeln!(s, "  in{i} [shape=point, style=invis];");
                    let _ = writeln!(s, "  in{i} -> \"{}\" [label=\"{}\"];", r.target, r.symbol);
                }
                1 => {
                    let _ = writeln!(
                        s,
                        "  \"{}\" -> \"{}\" [label=\"{}\"];",
                        r.args[0], r.target, r.symbol
                    );
                }
                _ => {
                    let _ = writeln!(s, "  r{i} [shape=point];");
                    for (k, q) in r.args.iter().enumerate() {
                        let _ = writeln!(
                            s,
                            "  \"{q}\" -> r{i} [label=\"{}\", arrowhead=none];",
                            k + 1
                        );
                    }
                    let _ = writeln!(s, "  r{i} -> \"{}\" [label=\"{}\"];", r.target, r.symbol);
                }
            }
        }
        s.push_str("}\n");
        s
    }
}
