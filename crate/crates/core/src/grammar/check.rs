//! Structural checks on networks: resolved calls, and the absence of
//! derivations that loop without consuming input.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Automaton, GrammarError, Input, Wrtn};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GrammarWarning {
    /// The axiom accepts no sequence at all.
    EmptyLanguage(String),
}

impl fmt::Display for GrammarWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrammarWarning::EmptyLanguage(g) => write!(f, "graph `{g}` accepts nothing"),
        }
    }
}

fn consumes_nothing(input: &Input, nullable: &BTreeSet<&str>) -> bool {
    match input {
        Input::Epsilon => true,
        Input::Mask(_) => false,
        Input::Call(g) => nullable.contains(g.as_str()),
    }
}

/// States from which a final state is reachable without consuming input.
fn co_empty(a: &Automaton, nullable: &BTreeSet<&str>) -> Vec<bool> {
    let mut ok: Vec<bool> = a.finals.iter().map(Option::is_some).collect();
    loop {
        let mut changed = false;
        for t in &a.transitions {
            if !ok[t.from] && ok[t.to] && consumes_nothing(&t.label.input, nullable) {
                ok[t.from] = true;
                changed = true;
            }
        }
        if !changed {
            return ok;
        }
    }
}

/// States reachable from the initial state without consuming input.
fn empty_reach(a: &Automaton, nullable: &BTreeSet<&str>) -> Vec<bool> {
    let mut ok = vec![false; a.state_count()];
    ok[a.initial] = true;
    loop {
        let mut changed = false;
        for t in &a.transitions {
            if ok[t.from] && !ok[t.to] && consumes_nothing(&t.label.input, nullable) {
                ok[t.to] = true;
                changed = true;
            }
        }
        if !changed {
            return ok;
        }
    }
}

/// Graphs that accept the empty sequence.
pub(crate) fn nullable_graphs(w: &Wrtn) -> BTreeSet<&str> {
    let mut nullable = BTreeSet::new();
    loop {
        let before = nullable.len();
        for a in &w.automata {
            if !nullable.contains(a.name.as_str()) && co_empty(a, &nullable)[a.initial] {
                nullable.insert(a.name.as_str());
            }
        }
        if nullable.len() == before {
            return nullable;
        }
    }
}

/// Graphs that accept at least one sequence.
fn productive_graphs(w: &Wrtn) -> BTreeSet<&str> {
    let mut productive = BTreeSet::new();
    loop {
        let before = productive.len();
        for a in &w.automata {
            if productive.contains(a.name.as_str()) {
                continue;
            }
            let mut ok: Vec<bool> = a.finals.iter().map(Option::is_some).collect();
            loop {
                let mut changed = false;
                for t in &a.transitions {
                    let usable = match &t.label.input {
                        Input::Call(g) => productive.contains(g.as_str()),
                        _ => true,
                    };
                    if usable && ok[t.to] && !ok[t.from] {
                        ok[t.from] = true;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
            if ok[a.initial] {
                productive.insert(a.name.as_str());
            }
        }
        if productive.len() == before {
            return productive;
        }
    }
}

fn reaches(succ: &[Vec<usize>], from: usize, to: usize) -> bool {
    let mut seen = vec![false; succ.len()];
    let mut stack = vec![from];
    while let Some(s) = stack.pop() {
        if s == to {
            return true;
        }
        if !std::mem::replace(&mut seen[s], true) {
            stack.extend(succ[s].iter().copied());
        }
    }
    false
}

fn has_cycle(n: usize, edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
    }
    // 0 unvisited, 1 on stack, 2 done.
    let mut color = vec![0u8; n];
    let mut path = Vec::new();
    fn visit(s: usize, adj: &[Vec<usize>], color: &mut [u8], path: &mut Vec<usize>) -> Option<Vec<usize>> {
        color[s] = 1;
        path.push(s);
        for &t in &adj[s] {
            if color[t] == 1 {
                let i = path.iter().position(|&p| p == t).expect("on stack");
                let mut cycle = path[i..].to_vec();
                cycle.push(t);
                return Some(cycle);
            }
            if color[t] == 0 {
                if let Some(c) = visit(t, adj, color, path) {
                    return Some(c);
                }
            }
        }
        path.pop();
        color[s] = 2;
        None
    }
    (0..n).find_map(|s| if color[s] == 0 { visit(s, &adj, &mut color, &mut path) } else { None })
}

impl Wrtn {
    /// Checks call targets, the axiom, cycles of transitions that consume
    /// nothing within a graph, and graphs deriving themselves without
    /// consuming input.
    pub fn validate(&self) -> Result<Vec<GrammarWarning>, GrammarError> {
        let names: BTreeSet<&str> = self.automata.iter().map(|a| a.name.as_str()).collect();
        if names.len() != self.automata.len() {
            let mut seen = BTreeSet::new();
            let dup = self.automata.iter().find(|a| !seen.insert(a.name.as_str())).expect("duplicate");
            return Err(GrammarError::DuplicateGraph(dup.name.clone()));
        }
        if !names.contains(self.axiom.as_str()) {
            return Err(GrammarError::UnknownAxiom(self.axiom.clone()));
        }
        for a in &self.automata {
            for callee in a.callees() {
                if !names.contains(callee) {
                    return Err(GrammarError::UnresolvedCall {
                        graph: a.name.clone(),
                        callee: callee.to_string(),
                    });
                }
            }
        }
        let nullable = nullable_graphs(self);
        for a in &self.automata {
            // Cycles of silent epsilons are harmless; a cycle that reads
            // nothing but emits an output or enters a call is not.
            let empty: Vec<&super::Transition> = a
                .transitions
                .iter()
                .filter(|t| consumes_nothing(&t.label.input, &nullable))
                .collect();
            let mut succ = vec![Vec::new(); a.state_count()];
            for t in &empty {
                succ[t.from].push(t.to);
            }
            if empty.iter().any(|t| !t.label.is_silent() && reaches(&succ, t.to, t.from)) {
                return Err(GrammarError::EmptyCycle(a.name.clone()));
            }
        }
        let index: BTreeMap<&str, usize> = self.automata.iter().enumerate().map(|(i, a)| (a.name.as_str(), i)).collect();
        let mut unit = Vec::new();
        for (i, a) in self.automata.iter().enumerate() {
            let reach = empty_reach(a, &nullable);
            let co = co_empty(a, &nullable);
            for t in &a.transitions {
                if let Input::Call(g) = &t.label.input {
                    if reach[t.from] && co[t.to] {
                        unit.push((i, index[g.as_str()]));
                    }
                }
            }
        }
        if let Some(cycle) = has_cycle(self.automata.len(), &unit) {
            return Err(GrammarError::EmptyCallCycle(
                cycle.into_iter().map(|i| self.automata[i].name.clone()).collect(),
            ));
        }
        let mut warnings = Vec::new();
        if !productive_graphs(self).contains(self.axiom.as_str()) {
            warnings.push(GrammarWarning::EmptyLanguage(self.axiom.clone()));
        }
        Ok(warnings)
    }
}
