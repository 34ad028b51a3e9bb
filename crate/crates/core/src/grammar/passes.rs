//! Optimisation passes over single automata, selectable by name.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use crate::registry::Registry;

use super::{Automaton, GrammarError, Label, Transition, Weight};

pub trait GrammarPass: Send + Sync {
    fn apply(&self, a: &Automaton) -> Result<Automaton, GrammarError>;
}

struct Trim;
struct EpsilonRemoval;
struct Determinize;
struct Minimize;

impl GrammarPass for Trim {
    fn apply(&self, a: &Automaton) -> Result<Automaton, GrammarError> {
        Ok(trim(a))
    }
}

impl GrammarPass for EpsilonRemoval {
    fn apply(&self, a: &Automaton) -> Result<Automaton, GrammarError> {
        remove_epsilon(a)
    }
}

impl GrammarPass for Determinize {
    fn apply(&self, a: &Automaton) -> Result<Automaton, GrammarError> {
        Ok(determinize(a))
    }
}

impl GrammarPass for Minimize {
    fn apply(&self, a: &Automaton) -> Result<Automaton, GrammarError> {
        Ok(minimize(a))
    }
}

/// Passes run by compilation, in order.
pub const DEFAULT_PASSES: &[&str] = &["trim", "epsilon-removal", "trim", "determinize", "minimize"];

pub fn pass_registry() -> Registry<dyn GrammarPass> {
    Registry::<dyn GrammarPass>::new("grammar pass")
        .with("trim", Box::new(Trim))
        .with("epsilon-removal", Box::new(EpsilonRemoval))
        .with("determinize", Box::new(Determinize))
        .with("minimize", Box::new(Minimize))
}

/// Removes states that are not both reachable from the initial state and
/// able to reach a final state. The initial state is always kept.
pub fn trim(a: &Automaton) -> Automaton {
    let n = a.state_count();
    let mut fwd = vec![false; n];
    let out = a.outgoing();
    let mut stack = vec![a.initial];
    while let Some(s) = stack.pop() {
        if !std::mem::replace(&mut fwd[s], true) {
            stack.extend(out[s].iter().map(|&t| a.transitions[t].to));
        }
    }
    let mut incoming = vec![Vec::new(); n];
    for t in &a.transitions {
        incoming[t.to].push(t.from);
    }
    let mut bwd = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&s| a.finals[s].is_some()).collect();
    while let Some(s) = stack.pop() {
        if !std::mem::replace(&mut bwd[s], true) {
            stack.extend(incoming[s].iter().copied());
        }
    }
    let keep: Vec<bool> = (0..n).map(|s| s == a.initial || (fwd[s] && bwd[s])).collect();
    let mut map = vec![usize::MAX; n];
    let mut finals = Vec::new();
    for s in 0..n {
        if keep[s] {
            map[s] = finals.len();
            finals.push(a.finals[s]);
        }
    }
    let transitions = a
        .transitions
        .iter()
        .filter(|t| keep[t.from] && keep[t.to] && (fwd[t.from] && bwd[t.to]))
        .map(|t| Transition {
            from: map[t.from],
            to: map[t.to],
            label: t.label.clone(),
        })
        .collect();
    Automaton {
        name: a.name.clone(),
        initial: map[a.initial],
        finals,
        transitions,
    }
}

/// Heaviest silent path weights from `p` to every state.
fn silent_closure(a: &Automaton, p: usize, silent: &[&Transition]) -> Result<Vec<Option<Weight>>, GrammarError> {
    let n = a.state_count();
    let mut dist = vec![None; n];
    dist[p] = Some(0);
    for round in 0..=n {
        let mut changed = false;
        for t in silent {
            if let Some(d) = dist[t.from] {
                let w = d + t.label.weight;
                if dist[t.to].is_none_or(|x| w > x) {
                    dist[t.to] = Some(w);
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(dist);
        }
        if round == n {
            break;
        }
    }
    Err(GrammarError::PositiveEpsilonCycle(a.name.clone()))
}

/// Removes output-free epsilon transitions. Each state receives the
/// transitions and final weight of the states it reaches silently, with
/// the heaviest silent path weight added.
pub fn remove_epsilon(a: &Automaton) -> Result<Automaton, GrammarError> {
    let silent: Vec<&Transition> = a.transitions.iter().filter(|t| t.label.is_silent()).collect();
    if silent.is_empty() {
        return Ok(a.clone());
    }
    let out = a.outgoing();
    let mut transitions = Vec::new();
    let mut seen = HashSet::new();
    let mut finals = vec![None; a.state_count()];
    for p in 0..a.state_count() {
        let dist = silent_closure(a, p, &silent)?;
        for (q, d) in dist.iter().enumerate() {
            let Some(d) = *d else { continue };
            if let Some(f) = a.finals[q] {
                finals[p] = Some(finals[p].map_or(d + f, |x: Weight| x.max(d + f)));
            }
            for &ti in &out[q] {
                let t = &a.transitions[ti];
                if t.label.is_silent() {
                    continue;
                }
                let label = Label {
                    weight: t.label.weight + d,
                    ..t.label.clone()
                };
                let nt = Transition { from: p, to: t.to, label };
                if seen.insert(nt.clone()) {
                    transitions.push(nt);
                }
            }
        }
    }
    Ok(Automaton {
        name: a.name.clone(),
        initial: a.initial,
        finals,
        transitions,
    })
}

/// Subset construction treating every distinct label as an opaque symbol.
/// A subset's final weight is the best final weight of its members.
pub fn determinize(a: &Automaton) -> Automaton {
    let out = a.outgoing();
    let start: BTreeSet<usize> = [a.initial].into();
    let mut ids: HashMap<BTreeSet<usize>, usize> = HashMap::new();
    let mut subsets = vec![start.clone()];
    ids.insert(start, 0);
    let mut finals = Vec::new();
    let mut transitions = Vec::new();
    let mut i = 0;
    while i < subsets.len() {
        let subset = subsets[i].clone();
        finals.push(subset.iter().filter_map(|&s| a.finals[s]).max());
        let mut moves: BTreeMap<&Label, BTreeSet<usize>> = BTreeMap::new();
        for &s in &subset {
            for &ti in &out[s] {
                let t = &a.transitions[ti];
                moves.entry(&t.label).or_default().insert(t.to);
            }
        }
        for (label, target) in moves {
            let id = match ids.get(&target) {
                Some(&id) => id,
                None => {
                    let id = subsets.len();
                    ids.insert(target.clone(), id);
                    subsets.push(target);
                    id
                }
            };
            transitions.push(Transition {
                from: i,
                to: id,
                label: label.clone(),
            });
        }
        i += 1;
    }
    Automaton {
        name: a.name.clone(),
        initial: 0,
        finals,
        transitions,
    }
}

/// Merges equivalent states by iterated partition refinement, starting
/// from the partition by final weight. Exact on trim deterministic
/// automata.
pub fn minimize(a: &Automaton) -> Automaton {
    let n = a.state_count();
    let out = a.outgoing();
    let mut label_ids: HashMap<&Label, usize> = HashMap::new();
    for t in &a.transitions {
        let next = label_ids.len();
        label_ids.entry(&t.label).or_insert(next);
    }
    let mut class: Vec<usize> = {
        let mut ids: HashMap<Option<Weight>, usize> = HashMap::new();
        a.finals
            .iter()
            .map(|f| {
                let next = ids.len();
                *ids.entry(*f).or_insert(next)
            })
            .collect()
    };
    let mut count = class.iter().copied().max().map_or(0, |m| m + 1);
    loop {
        let mut ids: HashMap<(usize, Vec<(usize, usize)>), usize> = HashMap::new();
        let next: Vec<usize> = (0..n)
            .map(|s| {
                let mut sig: Vec<(usize, usize)> = out[s]
                    .iter()
                    .map(|&ti| {
                        let t = &a.transitions[ti];
                        (label_ids[&t.label], class[t.to])
                    })
                    .collect();
                sig.sort_unstable();
                sig.dedup();
                let fresh = ids.len();
                *ids.entry((class[s], sig)).or_insert(fresh)
            })
            .collect();
        let new_count = ids.len();
        class = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    let mut finals = vec![None; count];
    let mut transitions = Vec::new();
    let mut done = vec![false; count];
    let mut seen = HashSet::new();
    for s in 0..n {
        let c = class[s];
        if std::mem::replace(&mut done[c], true) {
            continue;
        }
        finals[c] = a.finals[s];
        for &ti in &out[s] {
            let t = &a.transitions[ti];
            let nt = Transition {
                from: c,
                to: class[t.to],
                label: t.label.clone(),
            };
            if seen.insert(nt.clone()) {
                transitions.push(nt);
            }
        }
    }
    Automaton {
        name: a.name.clone(),
        initial: class[a.initial],
        finals,
        transitions,
    }
    .canonical()
}
