use std::collections::{HashMap, HashSet};

use crate::engine::{MatchPolicy, ParseMode, Parser};
use crate::text::{Label, TaggedText, Transition};

/// Most marks one pass adds over a single span.
pub const MAX_MARKS_PER_SPAN: usize = 16;

#[derive(Debug, Clone)]
pub struct Enrichment {
    pub text: TaggedText,
    /// Transitions added by each pass that ran.
    pub added: Vec<usize>,
}

/// Adds a mark transition labelled with the output of every best match,
/// from its start state to its end state, and repeats on the enriched
/// automata up to `iterations` times or until a pass adds nothing. Marks
/// already present are not added again; empty matches and empty outputs
/// add nothing.
pub fn apply_automaton(tagged: &TaggedText, parser: &Parser<'_>, iterations: usize) -> Enrichment {
    let mut text = tagged.clone();
    let mut added = Vec::new();
    for _ in 0..iterations {
        let matches = parser.locate(&text, ParseMode::Anchored, MatchPolicy::BestPerSpan);
        let mut count = 0;
        let mut fresh: Vec<Vec<Transition>> = vec![Vec::new(); text.sentences.len()];
        let mut existing: Vec<HashSet<(usize, usize, &str)>> = text
            .sentences
            .iter()
            .map(|s| {
                s.transitions
                    .iter()
                    .filter_map(|t| match &t.label {
                        Label::Mark(m) => Some((t.from, t.to, m.as_str())),
                        _ => None,
                    })
                    .collect()
            })
            .collect();
        let mut span_counts: HashMap<(usize, usize, usize), usize> = HashMap::new();
        for m in &matches {
            if m.is_empty() || m.output.is_empty() {
                continue;
            }
            let (from, to) = m.states;
            if !existing[m.sentence].insert((from, to, m.output.as_str())) {
                continue;
            }
            let n = span_counts.entry((m.sentence, from, to)).or_default();
            if *n >= MAX_MARKS_PER_SPAN {
                continue;
            }
            *n += 1;
            fresh[m.sentence].push(Transition {
                from,
                to,
                label: Label::Mark(m.output.clone()),
            });
            count += 1;
        }
        drop(existing);
        for (s, new) in text.sentences.iter_mut().zip(fresh) {
            if !new.is_empty() {
                s.transitions.extend(new);
                s.transitions.sort_by_key(|t| t.from);
            }
        }
        added.push(count);
        if count == 0 {
            break;
        }
    }
    Enrichment { text, added }
}
