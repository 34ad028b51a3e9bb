//! Compiled network documents.
//!
//! ```xml
//! <wrtn axiom="main" approximate="false">
//!   <automaton name="main" initial="0">
//!     <state id="0">
//!       <tr to="1" mask="DET" output="[" weight="1"/>
//!       <tr to="1" call="NP"/>
//!     </state>
//!     <state id="1" final="0"/>
//!   </automaton>
//! </wrtn>
//! ```
//!
//! A transition without `mask` or `call` reads nothing. Weights default to
//! 0; `final` holds the final weight.

use std::fmt::Write as _;

use crate::model::LexicalMask;
use crate::xml;

use super::{Automaton, GrammarError, Input, Label, Transition, Wrtn};

pub fn write_wrtn(w: &Wrtn) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<wrtn axiom=\"{}\" approximate=\"{}\">",
        xml::escape_attr(&w.axiom),
        w.approximate
    );
    for a in &w.automata {
        let _ = writeln!(
            out,
            "  <automaton name=\"{}\" initial=\"{}\">",
            xml::escape_attr(&a.name),
            a.initial
        );
        let outgoing = a.outgoing();
        for (s, f) in a.finals.iter().enumerate() {
            let _ = write!(out, "    <state id=\"{s}\"");
            if let Some(f) = f {
                let _ = write!(out, " final=\"{f}\"");
            }
            if outgoing[s].is_empty() {
                out.push_str("/>\n");
                continue;
            }
            out.push_str(">\n");
            for &ti in &outgoing[s] {
                let t = &a.transitions[ti];
                let _ = write!(out, "      <tr to=\"{}\"", t.to);
                match &t.label.input {
                    Input::Epsilon => {}
                    Input::Mask(m) => {
                        let _ = write!(out, " mask=\"{}\"", xml::escape_attr(&m.to_string()));
                    }
                    Input::Call(g) => {
                        let _ = write!(out, " call=\"{}\"", xml::escape_attr(g));
                    }
                }
                if let Some(o) = &t.label.output {
                    let _ = write!(out, " output=\"{}\"", xml::escape_attr(o));
                }
                if t.label.weight != 0 {
                    let _ = write!(out, " weight=\"{}\"", t.label.weight);
                }
                out.push_str("/>\n");
            }
            out.push_str("    </state>\n");
        }
        out.push_str("  </automaton>\n");
    }
    out.push_str("</wrtn>\n");
    out
}

fn read_automaton(node: roxmltree::Node<'_, '_>) -> Result<Automaton, GrammarError> {
    let name = xml::req_attr(node, "name")?.to_string();
    let initial: usize = xml::num_attr(node, "initial")?;
    let mut finals = Vec::new();
    let mut pending = Vec::new();
    for state in xml::elements(node) {
        if !state.has_tag_name("state") {
            return Err(xml::malformed(state, "expected <state>").into());
        }
        let id: usize = xml::num_attr(state, "id")?;
        if id != finals.len() {
            return Err(xml::malformed(state, format!("expected state {}, found {id}", finals.len())).into());
        }
        finals.push(match state.attribute("final") {
            Some(_) => Some(xml::num_attr(state, "final")?),
            None => None,
        });
        for tr in xml::elements(state) {
            if !tr.has_tag_name("tr") {
                return Err(xml::malformed(tr, "expected <tr>").into());
            }
            let input = match (tr.attribute("mask"), tr.attribute("call")) {
                (Some(_), Some(_)) => return Err(xml::malformed(tr, "both mask and call").into()),
                (Some(m), None) => Input::Mask(
                    m.parse::<LexicalMask>()
                        .map_err(|e| xml::malformed(tr, format!("bad mask `{m}`: {e}")))?,
                ),
                (None, Some(c)) => Input::Call(c.to_string()),
                (None, None) => Input::Epsilon,
            };
            let weight = match tr.attribute("weight") {
                Some(_) => xml::num_attr(tr, "weight")?,
                None => 0,
            };
            let label = Label {
                input,
                output: tr.attribute("output").map(str::to_string),
                weight,
            };
            pending.push((tr, Transition { from: id, to: xml::num_attr(tr, "to")?, label }));
        }
    }
    if initial >= finals.len() {
        return Err(xml::malformed(node, format!("initial state {initial} is missing")).into());
    }
    let mut transitions = Vec::new();
    for (tr, t) in pending {
        if t.to >= finals.len() {
            return Err(xml::malformed(tr, format!("transition to missing state {}", t.to)).into());
        }
        transitions.push(t);
    }
    Ok(Automaton {
        name,
        initial,
        finals,
        transitions,
    })
}

/// Reads a compiled network and checks it.
pub fn read_wrtn(document: &str) -> Result<Wrtn, GrammarError> {
    let doc = xml::parse(document)?;
    let root = xml::expect_root(&doc, "wrtn")?;
    let approximate = match root.attribute("approximate") {
        None | Some("false") => false,
        Some("true") => true,
        Some(other) => return Err(xml::malformed(root, format!("bad approximate flag `{other}`")).into()),
    };
    let automata = xml::elements(root)
        .map(|a| {
            if a.has_tag_name("automaton") {
                read_automaton(a)
            } else {
                Err(xml::malformed(a, "expected <automaton>").into())
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let w = Wrtn {
        axiom: xml::req_attr(root, "axiom")?.to_string(),
        automata,
        approximate,
    };
    w.validate()?;
    Ok(w)
}
