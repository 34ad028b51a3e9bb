use std::fmt::Write as _;

use super::{Label, SentenceAutomaton, TaggedText};

pub(crate) fn dot_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn edge_label(label: &Label) -> String {
    match label {
        Label::Analysis(a) => format!("{}/{}.{}", a.form, a.lemma, a.pos),
        Label::Unknown(s) => format!("{s}/?"),
        Label::Mark(s) => format!("<{s}>"),
    }
}

fn write_body(out: &mut String, a: &SentenceAutomaton, prefix: &str, indent: &str) {
    for (id, q) in a.states.iter().enumerate() {
        let shape = if id == a.final_state { "doublecircle" } else { "circle" };
        let _ = writeln!(
            out,
            "{indent}{} [label=\"{}\", shape={shape}];",
            dot_string(&format!("{prefix}{id}")),
            q.token_pos
        );
    }
    for t in &a.transitions {
        let _ = writeln!(
            out,
            "{indent}{} -> {} [label={}];",
            dot_string(&format!("{prefix}{}", t.from)),
            dot_string(&format!("{prefix}{}", t.to)),
            dot_string(&edge_label(&t.label))
        );
    }
}

/// Graphviz rendering of one sentence automaton.
pub fn export_dot(a: &SentenceAutomaton) -> String {
    let mut out = format!("digraph {} {{\n  rankdir=LR;\n", dot_string(&a.id));
    write_body(&mut out, a, "", "  ");
    out.push_str("}\n");
    out
}

/// Graphviz rendering of a whole text, one cluster per sentence.
pub fn export_text_dot(tagged: &TaggedText) -> String {
    let mut out = String::from("digraph text {\n  rankdir=LR;\n");
    for (i, s) in tagged.sentences.iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{i} {{\n    label={};", dot_string(&s.id));
        write_body(&mut out, s, &format!("{}:", s.id), "    ");
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}
