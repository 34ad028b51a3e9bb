use std::collections::HashMap;

use super::forest::{Alt, Forest, ForestNode, Item};
use super::{ParseMode, Parser};
use crate::grammar::Input;
use crate::text::SentenceAutomaton;

struct Chart<'p, 't> {
    parser: &'p Parser<'t>,
    items: Vec<Item>,
    index: HashMap<(u32, u32, u32, u32), u32>,
    nodes: Vec<ForestNode>,
    node_index: HashMap<(u32, u32, u32), u32>,
    /// Items waiting at a text state for a graph to complete, with the call
    /// transition they will take.
    waiters: HashMap<(u32, u32), Vec<(u32, u32)>>,
    agenda: Vec<Vec<u32>>,
}

impl Chart<'_, '_> {
    fn add(&mut self, graph: usize, state: usize, origin: usize, pos: usize, alt: Alt) -> u32 {
        let key = (graph as u32, state as u32, origin as u32, pos as u32);
        if let Some(&i) = self.index.get(&key) {
            let alts = &mut self.items[i as usize].alts;
            if alt != Alt::Init || !alts.contains(&Alt::Init) {
                alts.push(alt);
            }
            return i;
        }
        let i = self.items.len() as u32;
        self.items.push(Item {
            graph: key.0,
            state: key.1,
            origin: key.2,
            pos: key.3,
            alts: vec![alt],
        });
        self.index.insert(key, i);
        self.agenda[pos].push(i);
        i
    }

    fn process(&mut self, i: u32, sentence: &SentenceAutomaton, text_out: &[Vec<usize>]) {
        let parser = self.parser;
        let Item {
            graph, state, origin, pos, ..
        } = self.items[i as usize];
        let (g, q, o, p) = (graph as usize, state as usize, origin as usize, pos as usize);
        let a = &parser.automata[g];
        if a.finals[q].is_some() {
            let key = (graph, origin, pos);
            match self.node_index.get(&key) {
                Some(&n) => self.nodes[n as usize].finals.push(i),
                None => {
                    let n = self.nodes.len() as u32;
                    self.nodes.push(ForestNode {
                        graph: g,
                        start: o,
                        end: p,
                        finals: vec![i],
                    });
                    self.node_index.insert(key, n);
                    let waiting = self.waiters.get(&(origin, graph)).cloned().unwrap_or_default();
                    for (w, t) in waiting {
                        let wi = &self.items[w as usize];
                        let (wg, wo) = (wi.graph as usize, wi.origin as usize);
                        let to = parser.automata[wg].transitions[t as usize].to;
                        self.add(wg, to, wo, p, Alt::Call { prev: w, trans: t, node: n });
                    }
                }
            }
        }
        for &ti in &parser.outgoing[g][q] {
            let t = &a.transitions[ti];
            match &t.label.input {
                Input::Epsilon => {
                    self.add(g, t.to, o, p, Alt::Step {
                        prev: i,
                        trans: ti as u32,
                        text: None,
                    });
                }
                Input::Mask(m) => {
                    for &xi in &text_out[p] {
                        let x = &sentence.transitions[xi];
                        if parser.label_matches(m, &x.label) {
                            self.add(g, t.to, o, x.to, Alt::Step {
                                prev: i,
                                trans: ti as u32,
                                text: Some(xi as u32),
                            });
                        }
                    }
                }
                Input::Call(_) => {
                    let h = parser.callee[g][ti].expect("calls are resolved");
                    self.waiters.entry((pos, h as u32)).or_default().push((i, ti as u32));
                    self.add(h, parser.automata[h].initial, p, p, Alt::Init);
                    if let Some(&n) = self.node_index.get(&(h as u32, pos, pos)) {
                        self.add(g, t.to, o, p, Alt::Call {
                            prev: i,
                            trans: ti as u32,
                            node: n,
                        });
                    }
                }
            }
        }
    }
}

impl Parser<'_> {
    /// Builds the shared forest of all invocations of the network over
    /// `sentence`, which must be acyclic. Never fails: no match gives a
    /// forest without roots.
    pub fn parse(&self, sentence: &SentenceAutomaton, mode: ParseMode) -> Forest<'_> {
        let n = sentence.states.len();
        let order = sentence.topological_order().unwrap_or_default();
        let text_out = sentence.outgoing();
        let mut chart = Chart {
            parser: self,
            items: Vec::new(),
            index: HashMap::new(),
            nodes: Vec::new(),
            node_index: HashMap::new(),
            waiters: HashMap::new(),
            agenda: vec![Vec::new(); n],
        };
        let axiom_init = self.automata[self.axiom].initial;
        for &p in &order {
            if mode == ParseMode::Anchored || p == 0 {
                chart.add(self.axiom, axiom_init, p, p, Alt::Init);
            }
            while let Some(i) = chart.agenda[p].pop() {
                chart.process(i, sentence, &text_out);
            }
        }
        let mut roots: Vec<usize> = (0..chart.nodes.len())
            .filter(|&k| {
                let node = &chart.nodes[k];
                node.graph == self.axiom
                    && (mode == ParseMode::Anchored || (node.start == 0 && node.end == sentence.final_state))
            })
            .collect();
        let token_pos: Vec<usize> = sentence.states.iter().map(|s| s.token_pos).collect();
        roots.sort_by_key(|&k| {
            let node = &chart.nodes[k];
            (token_pos[node.start], token_pos[node.end], node.start, node.end)
        });
        Forest::new(self, chart.items, chart.nodes, roots, token_pos, sentence.first_token)
    }
}
