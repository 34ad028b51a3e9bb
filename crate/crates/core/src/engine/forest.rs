use std::collections::HashMap;
use std::rc::Rc;

use super::Parser;
use crate::grammar::{Automaton, Input, Weight};

/// Most readings kept per forest node under [`MatchPolicy::All`]; the
/// heaviest are kept.
pub const READINGS_CAP: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Alt {
    /// Graph invocation start.
    Init,
    /// Transition reading one text transition, or an epsilon when `text`
    /// is `None`.
    Step { prev: u32, trans: u32, text: Option<u32> },
    /// Call transition over a completed invocation.
    Call { prev: u32, trans: u32, node: u32 },
}

#[derive(Debug, Clone)]
pub(crate) struct Item {
    pub graph: u32,
    pub state: u32,
    pub origin: u32,
    pub pos: u32,
    pub alts: Vec<Alt>,
}

/// A completed invocation of a graph over a span of text states.
#[derive(Debug, Clone)]
pub struct ForestNode {
    pub graph: usize,
    pub start: usize,
    pub end: usize,
    /// Items in a final state of the graph: the packed alternatives.
    pub(crate) finals: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchPolicy {
    /// Every distinct reading of every span.
    All,
    /// Per span, the readings of maximum weight.
    BestPerSpan,
}

/// A grammar output placed in the text. It goes at the token boundary
/// `boundary` (a document token index): right after the previous token
/// when `after_previous`, else right before the next one.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlacedOutput {
    pub boundary: usize,
    pub after_previous: bool,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Match {
    /// Sentence index in the tagged text.
    pub sentence: usize,
    /// Start and end states in the sentence automaton.
    pub states: (usize, usize),
    /// Document token range `[start, end)`.
    pub tokens: (usize, usize),
    pub weight: Weight,
    /// Outputs concatenated in path order.
    pub output: String,
    pub outputs: Vec<PlacedOutput>,
    /// Forest node of the match.
    pub root: usize,
}

impl Match {
    /// True for a match of the empty sequence.
    pub fn is_empty(&self) -> bool {
        self.tokens.0 == self.tokens.1 && self.states.0 == self.states.1
    }

    pub fn len(&self) -> usize {
        self.tokens.1 - self.tokens.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Out {
    pos: u32,
    consuming: bool,
    text: Rc<str>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Reading {
    weight: Weight,
    outputs: Vec<Out>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Ref {
    Item(u32),
    Node(u32),
}

/// Shared forest of one sentence: items with their packed alternatives,
/// completed invocations, and the invocations of the axiom as roots.
#[derive(Debug)]
pub struct Forest<'p> {
    automata: &'p [Automaton],
    pub(crate) items: Vec<Item>,
    pub(crate) nodes: Vec<ForestNode>,
    roots: Vec<usize>,
    token_pos: Vec<usize>,
    first_token: usize,
    item_weight: Vec<Weight>,
    node_weight: Vec<Weight>,
}

impl<'p> Forest<'p> {
    pub(crate) fn new(
        parser: &'p Parser<'_>,
        items: Vec<Item>,
        nodes: Vec<ForestNode>,
        roots: Vec<usize>,
        token_pos: Vec<usize>,
        first_token: usize,
    ) -> Self {
        let mut forest = Self {
            automata: &parser.automata,
            item_weight: vec![Weight::MIN; items.len()],
            node_weight: vec![Weight::MIN; nodes.len()],
            items,
            nodes,
            roots,
            token_pos,
            first_token,
        };
        let all: Vec<Ref> = (0..forest.nodes.len() as u32)
            .map(Ref::Node)
            .chain((0..forest.items.len() as u32).map(Ref::Item))
            .collect();
        for r in forest.postorder(&all) {
            match r {
                Ref::Item(i) => {
                    let w = forest.items[i as usize]
                        .alts
                        .iter()
                        .map(|alt| forest.alt_weight(*alt))
                        .max()
                        .unwrap_or(Weight::MIN);
                    forest.item_weight[i as usize] = w;
                }
                Ref::Node(n) => {
                    let w = forest.nodes[n as usize]
                        .finals
                        .iter()
                        .map(|&i| forest.final_weight(i))
                        .max()
                        .unwrap_or(Weight::MIN);
                    forest.node_weight[n as usize] = w;
                }
            }
        }
        forest
    }

    pub fn item_count(&self) -> usize {
        self.items.len()
    }

    pub fn nodes(&self) -> &[ForestNode] {
        &self.nodes
    }

    /// Axiom invocations, ordered by span.
    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn graph_name(&self, node: usize) -> &str {
        &self.automata[self.nodes[node].graph].name
    }

    /// Best derivation weight of a node.
    pub fn weight(&self, node: usize) -> Weight {
        self.node_weight[node]
    }

    fn children(&self, r: Ref, out: &mut Vec<Ref>) {
        match r {
            Ref::Item(i) => {
                for alt in &self.items[i as usize].alts {
                    match *alt {
                        Alt::Init => {}
                        Alt::Step { prev, .. } => out.push(Ref::Item(prev)),
                        Alt::Call { prev, node, .. } => {
                            out.push(Ref::Item(prev));
                            out.push(Ref::Node(node));
                        }
                    }
                }
            }
            Ref::Node(n) => out.extend(self.nodes[n as usize].finals.iter().map(|&i| Ref::Item(i))),
        }
    }

    /// Dependencies before dependents, from `starts`. The forest is acyclic
    /// because networks with cycles that read nothing are rejected.
    fn postorder(&self, starts: &[Ref]) -> Vec<Ref> {
        let mut done_items = vec![false; self.items.len()];
        let mut done_nodes = vec![false; self.nodes.len()];
        let mut order = Vec::new();
        let mut kids = Vec::new();
        for &s in starts {
            let mut stack = vec![(s, false)];
            while let Some((r, expanded)) = stack.pop() {
                let done = match r {
                    Ref::Item(i) => &mut done_items[i as usize],
                    Ref::Node(n) => &mut done_nodes[n as usize],
                };
                if expanded {
                    if !*done {
                        *done = true;
                        order.push(r);
                    }
                    continue;
                }
                if *done {
                    continue;
                }
                stack.push((r, true));
                kids.clear();
                self.children(r, &mut kids);
                for &k in &kids {
                    let seen = match k {
                        Ref::Item(i) => done_items[i as usize],
                        Ref::Node(n) => done_nodes[n as usize],
                    };
                    if !seen {
                        stack.push((k, false));
                    }
                }
            }
        }
        order
    }

    fn trans(&self, item: u32, trans: u32) -> &crate::grammar::Transition {
        let g = self.items[item as usize].graph as usize;
        &self.automata[g].transitions[trans as usize]
    }

    #[cfg(test)]
    pub(crate) fn transition_weight(&self, item: u32, trans: u32) -> Weight {
        self.trans(item, trans).label.weight
    }

    #[cfg(test)]
    pub(crate) fn automata_final(&self, graph: usize, state: usize) -> Weight {
        self.automata[graph].finals[state].expect("final state")
    }

    fn alt_weight(&self, alt: Alt) -> Weight {
        match alt {
            Alt::Init => 0,
            Alt::Step { prev, trans, .. } => self.item_weight[prev as usize] + self.trans(prev, trans).label.weight,
            Alt::Call { prev, trans, node } => {
                self.item_weight[prev as usize] + self.trans(prev, trans).label.weight + self.node_weight[node as usize]
            }
        }
    }

    fn final_weight(&self, item: u32) -> Weight {
        let it = &self.items[item as usize];
        let f = self.automata[it.graph as usize].finals[it.state as usize].expect("final item");
        self.item_weight[item as usize] + f
    }

    /// Readings of every node under `policy`, computed for the roots.
    fn readings(&self, policy: MatchPolicy) -> HashMap<u32, Rc<Vec<Reading>>> {
        let roots: Vec<Ref> = self.roots.iter().map(|&n| Ref::Node(n as u32)).collect();
        let mut items: HashMap<u32, Rc<Vec<Reading>>> = HashMap::new();
        let mut nodes: HashMap<u32, Rc<Vec<Reading>>> = HashMap::new();
        for r in self.postorder(&roots) {
            match r {
                Ref::Item(i) => {
                    let it = &self.items[i as usize];
                    let mut acc = Vec::new();
                    for &alt in &it.alts {
                        if policy == MatchPolicy::BestPerSpan && self.alt_weight(alt) != self.item_weight[i as usize] {
                            continue;
                        }
                        match alt {
                            Alt::Init => acc.push(Reading {
                                weight: 0,
                                outputs: Vec::new(),
                            }),
                            Alt::Step { prev, trans, .. } => {
                                let t = self.trans(prev, trans);
                                let pos = self.items[prev as usize].pos;
                                let consuming = matches!(t.label.input, Input::Mask(_));
                                for r in items[&prev].iter() {
                                    let mut r = r.clone();
                                    r.weight += t.label.weight;
                                    if let Some(o) = &t.label.output {
                                        r.outputs.push(Out {
                                            pos,
                                            consuming,
                                            text: Rc::from(o.as_str()),
                                        });
                                    }
                                    acc.push(r);
                                }
                            }
                            Alt::Call { prev, trans, node } => {
                                let t = self.trans(prev, trans);
                                let pos = self.items[prev as usize].pos;
                                for left in items[&prev].iter() {
                                    for right in nodes[&node].iter() {
                                        let mut outputs = left.outputs.clone();
                                        if let Some(o) = &t.label.output {
                                            outputs.push(Out {
                                                pos,
                                                consuming: false,
                                                text: Rc::from(o.as_str()),
                                            });
                                        }
                                        outputs.extend(right.outputs.iter().cloned());
                                        acc.push(Reading {
                                            weight: left.weight + t.label.weight + right.weight,
                                            outputs,
                                        });
                                    }
                                }
                            }
                        }
                    }
                    items.insert(i, Rc::new(normalize(acc)));
                }
                Ref::Node(n) => {
                    let node = &self.nodes[n as usize];
                    let mut acc = Vec::new();
                    for &i in &node.finals {
                        if policy == MatchPolicy::BestPerSpan && self.final_weight(i) != self.node_weight[n as usize] {
                            continue;
                        }
                        let it = &self.items[i as usize];
                        let f = self.automata[it.graph as usize].finals[it.state as usize].expect("final item");
                        acc.extend(items[&i].iter().map(|r| Reading {
                            weight: r.weight + f,
                            outputs: r.outputs.clone(),
                        }));
                    }
                    nodes.insert(n, Rc::new(normalize(acc)));
                }
            }
        }
        nodes
    }

    /// Matches of the axiom, ordered by span and then by decreasing
    /// weight.
    pub fn matches(&self, policy: MatchPolicy) -> Vec<Match> {
        let readings = self.readings(policy);
        let mut out = Vec::new();
        for &root in &self.roots {
            let node = &self.nodes[root];
            for r in readings[&(root as u32)].iter() {
                out.push(Match {
                    sentence: 0,
                    states: (node.start, node.end),
                    tokens: (
                        self.first_token + self.token_pos[node.start],
                        self.first_token + self.token_pos[node.end],
                    ),
                    weight: r.weight,
                    output: r.outputs.iter().map(|o| &*o.text).collect(),
                    outputs: r
                        .outputs
                        .iter()
                        .map(|o| PlacedOutput {
                            boundary: self.first_token + self.token_pos[o.pos as usize],
                            after_previous: !o.consuming && o.pos as usize != node.start,
                            text: o.text.to_string(),
                        })
                        .collect(),
                    root,
                });
            }
        }
        out
    }
}

/// Sorts by decreasing weight, drops duplicates and applies the cap.
fn normalize(mut readings: Vec<Reading>) -> Vec<Reading> {
    readings.sort_by(|a, b| b.weight.cmp(&a.weight).then_with(|| a.outputs.cmp(&b.outputs)));
    readings.dedup();
    readings.truncate(READINGS_CAP);
    readings
}
