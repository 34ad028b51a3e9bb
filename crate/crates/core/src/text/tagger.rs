use crate::lexicon::{Cursor, IndexedLexicon, LookupOptions};
use crate::model::LexicalAnalysis;
use crate::segment::{Sentence, SegmentedText};

use super::{Label, SentenceAutomaton, State, TagError, TaggedText, Transition};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TagOptions {
    pub lookup: LookupOptions,
}

/// Builds the text automaton of every sentence.
///
/// From each token, every lexicon is walked across following tokens,
/// reading one space where the source has whitespace between them, so
/// that compound forms yield transitions spanning several tokens. All
/// matches are kept. For each span only the analyses of the highest
/// priority level that knows the form are used. Tokens without a
/// single-token analysis get an unknown-token transition.
pub fn tag(text: &SegmentedText, lexicons: &[&IndexedLexicon], options: TagOptions) -> Result<TaggedText, TagError> {
    if let Some((first, rest)) = lexicons.split_first() {
        if let Some(other) = rest.iter().find(|l| l.tagset_hash != first.tagset_hash) {
            return Err(TagError::TagsetMismatch {
                first: first.name.clone(),
                second: other.name.clone(),
            });
        }
    }
    let mut tagged = TaggedText {
        tagset_hash: lexicons.first().map_or(0, |l| l.tagset_hash),
        ..Default::default()
    };
    for sentence in text.sentences() {
        let first_token = tagged.tokens.len();
        tagged.tokens.extend(sentence.tokens().cloned());
        tagged
            .sentences
            .push(tag_sentence(sentence, first_token, lexicons, options.lookup));
    }
    tagged.recount();
    Ok(tagged)
}

fn tag_sentence(
    sentence: &Sentence,
    first_token: usize,
    lexicons: &[&IndexedLexicon],
    opts: LookupOptions,
) -> SentenceAutomaton {
    let tokens: Vec<_> = sentence.tokens().collect();
    let gaps = sentence.gaps();
    let n = tokens.len();
    let states = (0..=n)
        .map(|i| State {
            token_pos: i,
            byte_pos: match tokens.get(i) {
                Some(t) => t.span.0,
                None => tokens.last().map_or(0, |t| t.span.1),
            },
        })
        .collect();
    let mut transitions = Vec::new();
    for i in 0..n {
        let mut cursors: Vec<Vec<Cursor>> = lexicons
            .iter()
            .map(|l| l.advance(&l.start(), &tokens[i].surface, opts))
            .collect();
        let mut single = false;
        let mut k = i + 1;
        loop {
            let analyses = best_level(lexicons, &cursors);
            if !analyses.is_empty() {
                single |= k == i + 1;
                let surface = sentence.text_between(i, k);
                let mut seen: Vec<LexicalAnalysis> = Vec::new();
                for mut a in analyses {
                    a.form.clone_from(&surface);
                    if !seen.contains(&a) {
                        seen.push(a);
                    }
                }
                transitions.extend(seen.into_iter().map(|a| Transition {
                    from: i,
                    to: k,
                    label: Label::Analysis(a),
                }));
            }
            if k == n {
                break;
            }
            for (l, cs) in lexicons.iter().zip(cursors.iter_mut()) {
                if cs.is_empty() {
                    continue;
                }
                if gaps[k - 1] {
                    *cs = l.advance(cs, " ", opts);
                }
                *cs = l.advance(cs, &tokens[k].surface, opts);
            }
            if cursors.iter().all(Vec::is_empty) {
                break;
            }
            k += 1;
        }
        if !single {
            transitions.push(Transition {
                from: i,
                to: i + 1,
                label: Label::Unknown(tokens[i].surface.clone()),
            });
        }
    }
    SentenceAutomaton {
        id: sentence.id.clone(),
        first_token,
        token_count: n,
        states,
        transitions,
        final_state: n,
    }
}

/// Analyses of completed cursors from the highest priority level that
/// has any.
fn best_level(lexicons: &[&IndexedLexicon], cursors: &[Vec<Cursor>]) -> Vec<LexicalAnalysis> {
    let mut best: Option<i32> = None;
    let mut out = Vec::new();
    for (l, cs) in lexicons.iter().zip(cursors) {
        if best.is_some_and(|p| l.priority < p) {
            continue;
        }
        let found: Vec<LexicalAnalysis> = cs.iter().filter_map(|c| l.accepted(c)).flatten().collect();
        if found.is_empty() {
            continue;
        }
        if best.is_none_or(|p| l.priority > p) {
            best = Some(l.priority);
            out.clear();
        }
        out.extend(found);
    }
    out
}
