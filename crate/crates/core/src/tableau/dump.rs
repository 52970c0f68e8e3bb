use std::fmt::Write;

use super::{closure::preorder, NodeId, Tableau};
use crate::arguments::{render_support, Support};

fn entry_text(t: &Tableau, id: usize) -> String {
    let e = t.entry(id);
    format!("({}, {})", render_support(&e.support), e.formula)
}

fn bottoms(t: &Tableau, n: NodeId) -> Vec<&Support> {
    let nd = t.node(n);
    let mut out: Vec<&Support> = nd.closures.iter().collect();
    for r in &nd.records {
        if !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

/// One node per line, indented by depth; ⊥ supports follow their node.
pub fn render_text(t: &Tableau) -> String {
    let mut out = String::new();
    let mut depth = vec![0usize; t.node_count()];
    for n in preorder(t, Tableau::ROOT) {
        let nd = t.node(n);
        if let Some(p) = nd.parent {
            depth[n] = depth[p] + 1;
        }
        let pad = "  ".repeat(depth[n]);
        let entries: Vec<String> = nd.entries.iter().map(|&e| entry_text(t, e)).collect();
        let _ = writeln!(out, "{pad}n{n}: {}", entries.join("; "));
        for s in bottoms(t, n) {
            let _ = writeln!(out, "{pad}  ({}, false)", render_support(s));
        }
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz digraph: nodes labelled with their entries, edges parent to child.
pub fn render_dot(t: &Tableau) -> String {
    let mut out = String::from("digraph tableau {\n  node [shape=box, fontname=\"monospace\"];\n");
    for n in preorder(t, Tableau::ROOT) {
        let nd = t.node(n);
        let mut lines: Vec<String> = nd.entries.iter().map(|&e| entry_text(t, e)).collect();
        lines.extend(bottoms(t, n).into_iter().map(|s| format!("({}, false)", render_support(s))));
        let label: Vec<String> = lines.iter().map(|l| escape(l)).collect();
        let _ = writeln!(out, "  n{n} [label=\"{}\\l\"];", label.join("\\l"));
        for c in &nd.children {
            let _ = writeln!(out, "  n{n} -> n{c};");
        }
    }
    out.push_str("}\n");
    out
}
