//! Source grammar documents.
//!
//! ```xml
//! <grammar axiom="main">
//!   <graph name="main" start="0" end="1">
//!     <node id="0"/>
//!     <node id="1"/>
//!     <node id="2" mask="DET|PRO" output="[NP"/>
//!     <node id="3" call="NP"/>
//!     <edge from="0" to="2" weight="1"/>
//!   </graph>
//! </grammar>
//! ```
//!
//! A node has a `mask` list (alternatives separated by `|`), a `call`, or
//! neither (epsilon). Edge weights default to 0.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::model::LexicalMask;
use crate::xml;

use super::{
    Automaton, GrammarError, GrammarGraph, GrammarSet, GraphEdge, GraphNode, Input, Label,
    NodeContent, Transition, Wrtn,
};

/// Splits at `|` characters that are not escaped.
pub(crate) fn split_alternatives(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut start = 0;
    let mut escaped = false;
    for (i, c) in s.char_indices() {
        match c {
            _ if escaped => escaped = false,
            '\\' => escaped = true,
            '|' => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

pub(crate) fn parse_masks(graph: &str, node: &str, text: &str) -> Result<Vec<LexicalMask>, GrammarError> {
    split_alternatives(text)
        .into_iter()
        .map(|m| {
            m.parse::<LexicalMask>().map_err(|e| GrammarError::BadNode {
                graph: graph.to_string(),
                node: node.to_string(),
                message: format!("bad mask `{m}`: {e}"),
            })
        })
        .collect()
}

pub(crate) fn masks_to_string(masks: &[LexicalMask]) -> String {
    masks.iter().map(ToString::to_string).collect::<Vec<_>>().join("|")
}

fn read_graph(node: roxmltree::Node<'_, '_>) -> Result<GrammarGraph, GrammarError> {
    let name = xml::req_attr(node, "name")?.to_string();
    let mut nodes = Vec::new();
    let mut index = HashMap::new();
    let mut edges = Vec::new();
    for child in xml::elements(node) {
        match child.tag_name().name() {
            "node" => {
                let id = xml::req_attr(child, "id")?.to_string();
                let content = match (child.attribute("mask"), child.attribute("call")) {
                    (Some(_), Some(_)) => {
                        return Err(GrammarError::BadNode {
                            graph: name,
                            node: id,
                            message: "a node cannot both read a mask and call a graph".into(),
                        })
                    }
                    (Some(m), None) => NodeContent::Masks(parse_masks(&name, &id, m)?),
                    (None, Some(c)) => NodeContent::Call(c.to_string()),
                    (None, None) => NodeContent::Epsilon,
                };
                if index.insert(id.clone(), nodes.len()).is_some() {
                    return Err(xml::malformed(child, format!("duplicate node `{id}`")).into());
                }
                nodes.push(GraphNode {
                    id,
                    content,
                    output: child.attribute("output").map(str::to_string),
                });
            }
            "edge" => edges.push(child),
            other => return Err(xml::malformed(child, format!("unexpected <{other}>")).into()),
        }
    }
    let resolve = |n: roxmltree::Node<'_, '_>, attr: &str| -> Result<usize, GrammarError> {
        let id = xml::req_attr(n, attr)?;
        index
            .get(id)
            .copied()
            .ok_or_else(|| xml::malformed(n, format!("unknown node `{id}`")).into())
    };
    let start = resolve(node, "start")?;
    let end = resolve(node, "end")?;
    let edges = edges
        .into_iter()
        .map(|e| {
            Ok(GraphEdge {
                from: resolve(e, "from")?,
                to: resolve(e, "to")?,
                weight: match e.attribute("weight") {
                    Some(_) => xml::num_attr(e, "weight")?,
                    None => 0,
                },
            })
        })
        .collect::<Result<Vec<_>, GrammarError>>()?;
    Ok(GrammarGraph {
        name,
        nodes,
        edges,
        start,
        end,
    })
}

/// Reads a grammar document and checks its cross-references.
pub fn read_grammar(document: &str) -> Result<GrammarSet, GrammarError> {
    let doc = xml::parse(document)?;
    let root = xml::expect_root(&doc, "grammar")?;
    let axiom = xml::req_attr(root, "axiom")?.to_string();
    let graphs = xml::elements(root)
        .map(|g| {
            if g.has_tag_name("graph") {
                read_graph(g)
            } else {
                Err(xml::malformed(g, "expected <graph>").into())
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let set = GrammarSet { axiom, graphs };
    set.validate()?;
    Ok(set)
}

pub fn write_grammar(set: &GrammarSet) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(out, "<grammar axiom=\"{}\">", xml::escape_attr(&set.axiom));
    for g in &set.graphs {
        let _ = writeln!(
            out,
            "  <graph name=\"{}\" start=\"{}\" end=\"{}\">",
            xml::escape_attr(&g.name),
            xml::escape_attr(&g.nodes[g.start].id),
            xml::escape_attr(&g.nodes[g.end].id)
        );
        for n in &g.nodes {
            let _ = write!(out, "    <node id=\"{}\"", xml::escape_attr(&n.id));
            match &n.content {
                NodeContent::Epsilon => {}
                NodeContent::Masks(m) => {
                    let _ = write!(out, " mask=\"{}\"", xml::escape_attr(&masks_to_string(m)));
                }
                NodeContent::Call(c) => {
                    let _ = write!(out, " call=\"{}\"", xml::escape_attr(c));
                }
            }
            if let Some(o) = &n.output {
                let _ = write!(out, " output=\"{}\"", xml::escape_attr(o));
            }
            out.push_str("/>\n");
        }
        for e in &g.edges {
            let _ = write!(
                out,
                "    <edge from=\"{}\" to=\"{}\"",
                xml::escape_attr(&g.nodes[e.from].id),
                xml::escape_attr(&g.nodes[e.to].id)
            );
            if e.weight != 0 {
                let _ = write!(out, " weight=\"{}\"", e.weight);
            }
            out.push_str("/>\n");
        }
        out.push_str("  </graph>\n");
    }
    out.push_str("</grammar>\n");
    out
}

impl GrammarSet {
    pub fn get(&self, name: &str) -> Option<&GrammarGraph> {
        self.graphs.iter().find(|g| g.name == name)
    }

    /// Checks graph names, the axiom, edge ends and call targets.
    pub fn validate(&self) -> Result<(), GrammarError> {
        let mut names = BTreeSet::new();
        for g in &self.graphs {
            if !names.insert(g.name.as_str()) {
                return Err(GrammarError::DuplicateGraph(g.name.clone()));
            }
        }
        if !names.contains(self.axiom.as_str()) {
            return Err(GrammarError::UnknownAxiom(self.axiom.clone()));
        }
        for g in &self.graphs {
            let n = g.nodes.len();
            let bad = |node: String, message: &str| GrammarError::BadNode {
                graph: g.name.clone(),
                node,
                message: message.into(),
            };
            if g.start >= n || g.end >= n {
                return Err(bad("?".into(), "start or end node missing"));
            }
            for e in &g.edges {
                if e.from >= n || e.to >= n {
                    return Err(bad(format!("{}->{}", e.from, e.to), "edge refers to a missing node"));
                }
                if e.to == g.start {
                    return Err(bad(g.nodes[e.from].id.clone(), "edge into the start node"));
                }
            }
            for node in &g.nodes {
                match &node.content {
                    NodeContent::Call(c) if !names.contains(c.as_str()) => {
                        return Err(GrammarError::UnresolvedCall {
                            graph: g.name.clone(),
                            callee: c.clone(),
                        })
                    }
                    NodeContent::Masks(m) if m.is_empty() => return Err(bad(node.id.clone(), "empty mask list")),
                    _ => {}
                }
            }
        }
        Ok(())
    }

    /// Uncompiled automata: state 0 precedes the start node and state
    /// `i + 1` follows node `i`; entering a node reads its content.
    pub fn to_wrtn(&self) -> Wrtn {
        Wrtn {
            axiom: self.axiom.clone(),
            automata: self.graphs.iter().map(GrammarGraph::to_automaton).collect(),
            approximate: false,
        }
    }
}

/// An edge in automaton numbering, with the node it enters.
struct GrammarEdgeRef {
    from: usize,
    to: usize,
    node: usize,
    weight: i64,
}

impl GrammarGraph {
    fn entry_labels(&self, node: usize, weight: i64) -> Vec<Label> {
        let n = &self.nodes[node];
        let inputs = match &n.content {
            NodeContent::Epsilon => vec![Input::Epsilon],
            NodeContent::Masks(ms) => ms.iter().cloned().map(Input::Mask).collect(),
            NodeContent::Call(g) => vec![Input::Call(g.clone())],
        };
        inputs
            .into_iter()
            .map(|input| Label {
                input,
                output: n.output.clone(),
                weight,
            })
            .collect()
    }

    pub fn to_automaton(&self) -> Automaton {
        let mut finals = vec![None; self.nodes.len() + 1];
        finals[self.end + 1] = Some(0);
        let mut transitions = Vec::new();
        let entries = std::iter::once(GrammarEdgeRef {
            from: 0,
            to: self.start + 1,
            node: self.start,
            weight: 0,
        })
        .chain(self.edges.iter().map(|e| GrammarEdgeRef {
            from: e.from + 1,
            to: e.to + 1,
            node: e.to,
            weight: e.weight,
        }));
        for e in entries {
            for label in self.entry_labels(e.node, e.weight) {
                transitions.push(Transition {
                    from: e.from,
                    to: e.to,
                    label,
                });
            }
        }
        transitions.sort_by_key(|t| t.from);
        Automaton {
            name: self.name.clone(),
            initial: 0,
            finals,
            transitions,
        }
    }
}
