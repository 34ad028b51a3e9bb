//! Earley-style recognition of a weighted network over sentence automata.
//!
//! Items are `(graph, state, origin, position)` where origin and position
//! are states of the sentence automaton. Every item keeps all the ways it
//! was reached, so the chart doubles as a shared forest: completed graph
//! invocations become [`ForestNode`]s and weights and outputs are computed
//! afterwards by dynamic programming over it.

mod chart;
mod forest;

use std::collections::HashMap;

pub use forest::{Forest, ForestNode, Match, MatchPolicy, PlacedOutput};

use crate::grammar::{remove_epsilon, trim, Automaton, GrammarError, Input, Wrtn};
use crate::model::{LexicalMask, Tagset};
use crate::text::{Label, TaggedText};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParseMode {
    /// The axiom may start at every state: pattern location.
    Anchored,
    /// The axiom must span the sentence from its initial to its final state.
    WholeSentence,
}

/// A network prepared for parsing: calls resolved to graph indices and
/// silent epsilons removed.
#[derive(Debug, Clone)]
pub struct Parser<'t> {
    pub(crate) automata: Vec<Automaton>,
    pub(crate) outgoing: Vec<Vec<Vec<usize>>>,
    /// Callee index per transition, for call transitions.
    pub(crate) callee: Vec<Vec<Option<usize>>>,
    pub(crate) axiom: usize,
    pub(crate) tagset: Option<&'t Tagset>,
}

impl<'t> Parser<'t> {
    pub fn new(wrtn: &Wrtn, tagset: Option<&'t Tagset>) -> Result<Self, GrammarError> {
        wrtn.validate()?;
        let mut automata = Vec::with_capacity(wrtn.automata.len());
        for a in &wrtn.automata {
            if a.transitions.iter().any(|t| t.label.is_silent()) {
                automata.push(trim(&remove_epsilon(a)?));
            } else {
                automata.push(a.clone());
            }
        }
        let index: HashMap<&str, usize> = automata.iter().enumerate().map(|(i, a)| (a.name.as_str(), i)).collect();
        let callee = automata
            .iter()
            .map(|a| {
                a.transitions
                    .iter()
                    .map(|t| match &t.label.input {
                        Input::Call(g) => index.get(g.as_str()).copied(),
                        _ => None,
                    })
                    .collect()
            })
            .collect();
        let outgoing = automata.iter().map(Automaton::outgoing).collect();
        let axiom = index[wrtn.axiom.as_str()];
        Ok(Self {
            automata,
            outgoing,
            callee,
            axiom,
            tagset,
        })
    }

    pub fn graph_name(&self, graph: usize) -> &str {
        &self.automata[graph].name
    }

    pub(crate) fn label_matches(&self, mask: &LexicalMask, label: &Label) -> bool {
        match label {
            Label::Analysis(a) => mask.matches(a, self.tagset),
            Label::Unknown(s) | Label::Mark(s) => mask.matches_surface(s),
        }
    }

    /// Matches of the network over every sentence, in document order.
    /// Sentences are parsed in parallel.
    pub fn locate(&self, text: &TaggedText, mode: ParseMode, policy: MatchPolicy) -> Vec<Match> {
        let n = text.sentences.len();
        let workers = std::thread::available_parallelism().map_or(1, |p| p.get()).min(n.max(1));
        let run = |range: std::ops::Range<usize>| -> Vec<Match> {
            let mut out = Vec::new();
            for i in range {
                let forest = self.parse(&text.sentences[i], mode);
                out.extend(forest.matches(policy).into_iter().map(|mut m| {
                    m.sentence = i;
                    m
                }));
            }
            out
        };
        if workers <= 1 {
            return run(0..n);
        }
        let chunk = n.div_ceil(workers);
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..n)
                .step_by(chunk)
                .map(|start| {
                    let run = &run;
                    scope.spawn(move || run(start..(start + chunk).min(n)))
                })
                .collect();
            handles.into_iter().flat_map(|h| h.join().expect("parser thread panicked")).collect()
        })
    }
}
