use std::fmt::Write as _;

use crate::text::dot_string;

use super::{Automaton, GrammarGraph, Input, Label, NodeContent};

fn label_text(l: &Label) -> String {
    let mut s = match &l.input {
        Input::Epsilon => "<E>".to_string(),
        Input::Mask(m) => m.to_string(),
        Input::Call(g) => format!(":{g}"),
    };
    if let Some(o) = &l.output {
        let _ = write!(s, "/{o}");
    }
    if l.weight != 0 {
        let _ = write!(s, " w={}", l.weight);
    }
    s
}

/// Graphviz rendering of a compiled automaton; edge weights are shown in
/// the labels and as a `weight` attribute.
pub fn export_dot(a: &Automaton) -> String {
    let mut out = format!("digraph {} {{\n  rankdir=LR;\n", dot_string(&a.name));
    for (s, f) in a.finals.iter().enumerate() {
        let (shape, label) = match f {
            Some(0) => ("doublecircle", s.to_string()),
            Some(w) => ("doublecircle", format!("{s} w={w}")),
            None => ("circle", s.to_string()),
        };
        let _ = writeln!(out, "  {s} [label={}, shape={shape}];", dot_string(&label));
    }
    let _ = writeln!(out, "  start [shape=point];\n  start -> {};", a.initial);
    for t in &a.transitions {
        let _ = writeln!(
            out,
            "  {} -> {} [label={}, weight={}];",
            t.from,
            t.to,
            dot_string(&label_text(&t.label)),
            t.label.weight.max(0) + 1
        );
    }
    out.push_str("}\n");
    out
}

/// Graphviz rendering of a source graph: boxes as nodes, weighted edges.
pub fn export_graph_dot(g: &GrammarGraph) -> String {
    let mut out = format!("digraph {} {{\n  rankdir=LR;\n  node [shape=box];\n", dot_string(&g.name));
    for (i, n) in g.nodes.iter().enumerate() {
        let mut text = match &n.content {
            NodeContent::Epsilon => "<E>".to_string(),
            NodeContent::Masks(ms) => ms.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"),
            NodeContent::Call(c) => format!(":{c}"),
        };
        if let Some(o) = &n.output {
            let _ = write!(text, "/{o}");
        }
        let shape = if i == g.start || i == g.end { ", shape=ellipse" } else { "" };
        let _ = writeln!(out, "  n{i} [label={}{shape}];", dot_string(&text));
    }
    for e in &g.edges {
        let _ = writeln!(
            out,
            "  n{} -> n{} [label={}, weight={}];",
            e.from,
            e.to,
            dot_string(&format!("w={}", e.weight)),
            e.weight.max(0) + 1
        );
    }
    out.push_str("}\n");
    out
}
