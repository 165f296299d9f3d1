use std::fmt::Write;

use super::structure::{Removal, ZpcStructure};

impl ZpcStructure {
    /// Graphviz rendering: solid edges for First-forest links, dashed edges
    /// for tree links removed from the forest, red curved edges for γ links.
    /// Constant leaves deleted from the forest are drawn grey.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph zpc {\n  node [shape=plaintext];\n");
        for (id, n) in self.nodes().iter().enumerate() {
            let label = escape(&self.label(id));
            let first0: Vec<String> = self
                .constants()
                .to_symbols(&n.first0)
                .iter()
                .map(|c| c.to_string())
                .collect();
            let style = if n.in_forest {
                String::new()
            } else {
                ", fontcolor=gray50".into()
            };
            let _ = writeln!(
                s,
                "  n{id} [label=\"{label}\", tooltip=\"first0={{{}}}\"{style}];",
                first0.join(",")
            );
        }
        for (id, n) in self.nodes().iter().enumerate() {
            for &ch in &n.forest_children {
                let _ = writeln!(s, "  n{id} -> n{ch};");
            }
        }
        for &(from, to, why) in self.removed_links() {
            let color = match why {
                Removal::ProductGuard => "blue",
                Removal::ApplyChild => "black",
                Removal::ConstantLeaf => "gray50",
            };
            let _ = writeln!(s, "  n{from} -> n{to} [style=dashed, color={color}];");
        }
        for (from, to) in self.gamma_links() {
            let _ = writeln!(
                s,
                "  n{from} -> n{to} [color=red, constraint=false, style=bold];"
            );
        }
        s.push_str("}\n");
        s
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
