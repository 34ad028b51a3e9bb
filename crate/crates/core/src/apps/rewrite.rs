use crate::engine::Match;
use crate::segment::SegmentedText;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LengthPolicy {
    #[default]
    None,
    PreferLongest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RewriteMode {
    /// Outputs are spliced into the text where the grammar placed them.
    #[default]
    Insert,
    /// The matched segment is replaced by the concatenated output.
    Replace,
}

/// Disjoint matches ordered by start token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewritePlan {
    pub mode: RewriteMode,
    matches: Vec<Match>,
}

impl RewritePlan {
    pub fn empty(mode: RewriteMode) -> Self {
        Self {
            mode,
            matches: Vec::new(),
        }
    }

    pub fn with_mode(mut self, mode: RewriteMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn matches(&self) -> &[Match] {
        &self.matches
    }
}

/// Greedy left-to-right selection. Among the matches starting at the
/// leftmost position not yet covered, the heaviest wins; weight ties go to
/// the longest under [`LengthPolicy::PreferLongest`], else to the earliest
/// in `matches`. Matches overlapping a selected one are dropped, as are
/// empty matches.
pub fn select_matches(matches: &[Match], policy: LengthPolicy, mode: RewriteMode) -> RewritePlan {
    let mut cands: Vec<&Match> = matches.iter().filter(|m| m.tokens.1 > m.tokens.0).collect();
    cands.sort_by_key(|m| m.tokens.0);
    let mut selected = Vec::new();
    let mut cursor = 0;
    let mut i = 0;
    while i < cands.len() {
        if cands[i].tokens.0 < cursor {
            i += 1;
            continue;
        }
        let start = cands[i].tokens.0;
        let mut best = cands[i];
        let mut j = i + 1;
        while j < cands.len() && cands[j].tokens.0 == start {
            let m = cands[j];
            let better = m.weight > best.weight
                || (m.weight == best.weight && policy == LengthPolicy::PreferLongest && m.len() > best.len());
            if better {
                best = m;
            }
            j += 1;
        }
        cursor = best.tokens.1;
        selected.push(best.clone());
        i = j;
    }
    debug_assert!(selected.windows(2).all(|w| w[0].tokens.1 <= w[1].tokens.0));
    RewritePlan { mode, matches: selected }
}

/// Rewrites the source text of `text` according to `plan`. Text outside
/// the selected matches is reproduced byte for byte.
pub fn apply_text(text: &SegmentedText, plan: &RewritePlan) -> String {
    let source = text.source_text();
    let offsets = text.token_offsets();
    let end_of_text = offsets.last().map_or(source.len(), |o| o.1);
    let position = |boundary: usize, after_previous: bool| -> usize {
        if (after_previous || boundary >= offsets.len()) && boundary > 0 {
            offsets[boundary - 1].1
        } else if boundary < offsets.len() {
            offsets[boundary].0
        } else {
            end_of_text
        }
    };
    // (start, end, replacement), in order; insertions have start == end.
    let mut edits: Vec<(usize, usize, &str)> = Vec::new();
    for m in &plan.matches {
        match plan.mode {
            RewriteMode::Insert => {
                for o in &m.outputs {
                    let at = position(o.boundary, o.after_previous);
                    edits.push((at, at, &o.text));
                }
            }
            RewriteMode::Replace => {
                let (s, e) = m.tokens;
                edits.push((offsets[s].0, offsets[e - 1].1, &m.output));
            }
        }
    }
    edits.sort_by_key(|e| e.0);
    let mut out = String::with_capacity(source.len());
    let mut at = 0;
    for (start, end, text) in edits {
        out.push_str(&source[at..start]);
        out.push_str(text);
        at = end.max(start);
    }
    out.push_str(&source[at..]);
    out
}
