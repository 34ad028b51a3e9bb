//! Weighted recursive transition networks: named graphs whose transitions
//! read lexical masks or call other graphs, may emit outputs and carry
//! integer weights.
//!
//! Weights add up along a path and competing paths are ranked by their
//! maximum.

mod check;
mod compile;
mod dot;
mod grf;
mod passes;
mod source;
mod wrtn_xml;

use std::collections::BTreeSet;

use thiserror::Error;

pub use check::GrammarWarning;
pub use compile::{compile, compile_with, compile_wrtn, flatten};
pub use dot::{export_dot, export_graph_dot};
pub use grf::{graphs_to_grf, grf_to_graphs};
pub use passes::{determinize, minimize, pass_registry, remove_epsilon, trim, GrammarPass, DEFAULT_PASSES};
pub use source::{read_grammar, write_grammar};
pub use wrtn_xml::{read_wrtn, write_wrtn};

use crate::error::FormatError;
use crate::model::LexicalMask;

pub type Weight = i64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrammarError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("graph `{graph}`, node {node}: {message}")]
    BadNode {
        graph: String,
        node: String,
        message: String,
    },
    #[error("graph `{graph}` calls undefined graph `{callee}`")]
    UnresolvedCall { graph: String, callee: String },
    #[error("axiom `{0}` is not a graph of the grammar")]
    UnknownAxiom(String),
    #[error("graph `{0}` is defined twice")]
    DuplicateGraph(String),
    #[error("graph `{0}` has an epsilon cycle of positive weight")]
    PositiveEpsilonCycle(String),
    #[error("graph `{0}` has a cycle that consumes no input")]
    EmptyCycle(String),
    #[error("unknown grammar pass `{name}` (available: {available})")]
    UnknownPass { name: String, available: String },
    #[error("graphs {} can call each other without consuming input", .0.join(" -> "))]
    EmptyCallCycle(Vec<String>),
}

/// What a node of a source graph reads.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NodeContent {
    Epsilon,
    /// Any one of the masks.
    Masks(Vec<LexicalMask>),
    Call(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphNode {
    pub id: String,
    pub content: NodeContent,
    pub output: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphEdge {
    /// Node indices.
    pub from: usize,
    pub to: usize,
    pub weight: Weight,
}

/// An editable grammar graph: boxes with contents joined by weighted
/// edges. The content of a node is read when the node is entered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrammarGraph {
    pub name: String,
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrammarSet {
    pub axiom: String,
    pub graphs: Vec<GrammarGraph>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Input {
    Epsilon,
    Mask(LexicalMask),
    Call(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub input: Input,
    pub output: Option<String>,
    pub weight: Weight,
}

impl Label {
    /// Output-free epsilons are removed by compilation; epsilons with an
    /// output stay so that the output keeps its position.
    pub fn is_silent(&self) -> bool {
        self.input == Input::Epsilon && self.output.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    pub from: usize,
    pub to: usize,
    pub label: Label,
}

/// One graph as a weighted transducer. `finals[s]` is the final weight of
/// state `s`, if it is final.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    pub name: String,
    pub initial: usize,
    pub finals: Vec<Option<Weight>>,
    pub transitions: Vec<Transition>,
}

impl Automaton {
    pub fn state_count(&self) -> usize {
        self.finals.len()
    }

    pub fn outgoing(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.state_count()];
        for (i, t) in self.transitions.iter().enumerate() {
            out[t.from].push(i);
        }
        out
    }

    /// Graphs called from this automaton.
    pub fn callees(&self) -> BTreeSet<&str> {
        self.transitions
            .iter()
            .filter_map(|t| match &t.label.input {
                Input::Call(g) => Some(g.as_str()),
                _ => None,
            })
            .collect()
    }

    /// Renumbers states breadth-first from the initial state, dropping
    /// unreachable ones; transitions are ordered by source state and then
    /// kept in their previous relative order.
    pub fn canonical(&self) -> Automaton {
        let out = self.outgoing();
        let mut map = vec![usize::MAX; self.state_count()];
        let mut order = vec![self.initial];
        map[self.initial] = 0;
        let mut i = 0;
        while i < order.len() {
            for &ti in &out[order[i]] {
                let to = self.transitions[ti].to;
                if map[to] == usize::MAX {
                    map[to] = order.len();
                    order.push(to);
                }
            }
            i += 1;
        }
        let mut transitions = Vec::new();
        for &s in &order {
            for &ti in &out[s] {
                let t = &self.transitions[ti];
                transitions.push(Transition {
                    from: map[t.from],
                    to: map[t.to],
                    label: t.label.clone(),
                });
            }
        }
        Automaton {
            name: self.name.clone(),
            initial: 0,
            finals: order.iter().map(|&s| self.finals[s]).collect(),
            transitions,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wrtn {
    pub axiom: String,
    pub automata: Vec<Automaton>,
    /// Set when flattening dropped calls beyond its depth limit.
    pub approximate: bool,
}

impl Wrtn {
    pub fn get(&self, name: &str) -> Option<&Automaton> {
        self.automata.iter().find(|a| a.name == name)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.automata.iter().position(|a| a.name == name)
    }

    pub fn total_states(&self) -> usize {
        self.automata.iter().map(Automaton::state_count).sum()
    }
}

#[cfg(test)]
mod tests;
