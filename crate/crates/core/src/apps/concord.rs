use crate::engine::Match;
use crate::grammar::Weight;
use crate::segment::SegmentedText;
use crate::text::TaggedText;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SortOrder {
    /// By sentence, then start token.
    #[default]
    Text,
    /// By matched segment, then right context, in code-point order.
    Lexicographic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConcordOptions {
    /// Context sizes in tokens.
    pub left: usize,
    pub right: usize,
    pub order: SortOrder,
}

impl Default for ConcordOptions {
    fn default() -> Self {
        Self {
            left: 5,
            right: 5,
            order: SortOrder::Text,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcordanceLine {
    pub left: String,
    /// Source text of the match, whitespace included.
    pub matched: String,
    pub right: String,
    pub sentence: String,
    pub tokens: (usize, usize),
    pub weight: Weight,
}

/// One line per match, with contexts of whole tokens taken from the
/// source text around it.
pub fn concord(matches: &[Match], text: &SegmentedText, options: ConcordOptions) -> Vec<ConcordanceLine> {
    let source = text.source_text();
    let offsets = text.token_offsets();
    let sentence_ids: Vec<&str> = text.sentences().map(|s| s.id.as_str()).collect();
    let slice = |from: usize, to: usize| -> &str {
        if from >= to {
            return "";
        }
        &source[offsets[from].0..offsets[to - 1].1]
    };
    let mut keyed: Vec<(usize, ConcordanceLine)> = matches
        .iter()
        .map(|m| {
            let (s, e) = m.tokens;
            let left_from = s.saturating_sub(options.left);
            let right_to = (e + options.right).min(offsets.len());
            let line = ConcordanceLine {
                left: slice(left_from, s).to_string(),
                matched: slice(s, e).to_string(),
                right: slice(e, right_to).to_string(),
                sentence: sentence_ids.get(m.sentence).map_or_else(String::new, |id| id.to_string()),
                tokens: m.tokens,
                weight: m.weight,
            };
            (m.sentence, line)
        })
        .collect();
    match options.order {
        SortOrder::Text => keyed.sort_by_key(|(s, l)| (*s, l.tokens)),
        SortOrder::Lexicographic => {
            keyed.sort_by(|(_, a), (_, b)| a.matched.cmp(&b.matched).then_with(|| a.right.cmp(&b.right)))
        }
    }
    keyed.into_iter().map(|(_, l)| l).collect()
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Tab-separated lines: left, match, right, sentence, token range,
/// weight. Whitespace runs become single spaces.
pub fn write_tsv(lines: &[ConcordanceLine]) -> String {
    let mut out = String::new();
    for l in lines {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}-{}\t{}\n",
            one_line(&l.left),
            one_line(&l.matched),
            one_line(&l.right),
            l.sentence,
            l.tokens.0,
            l.tokens.1,
            l.weight
        ));
    }
    out
}

fn escape_html(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

/// A standalone HTML page with one table row per line.
pub fn write_html(lines: &[ConcordanceLine]) -> String {
    let mut out = String::from(
        "<!DOCTYPE html>\n<html>\n<head><meta charset=\"utf-8\"><title>Concordance</title>\n\
         <style>td.l{text-align:right}td.m{font-weight:bold}</style></head>\n<body>\n<table>\n",
    );
    for l in lines {
        out.push_str(&format!(
            "<tr data-sentence=\"{}\" data-weight=\"{}\"><td class=\"l\">{}</td><td class=\"m\">{}</td><td class=\"r\">{}</td></tr>\n",
            escape_html(&l.sentence),
            l.weight,
            escape_html(&one_line(&l.left)),
            escape_html(&one_line(&l.matched)),
            escape_html(&one_line(&l.right)),
        ));
    }
    out.push_str("</table>\n</body>\n</html>\n");
    out
}

/// Tab-separated listing of matches: sentence id, token range, state
/// range, weight, output and matched surface.
pub fn write_matches(matches: &[Match], text: &TaggedText) -> String {
    let mut out = String::new();
    for m in matches {
        let s = &text.sentences[m.sentence];
        let surface = text.surface_between(s, m.tokens.0 - s.first_token, m.tokens.1 - s.first_token);
        out.push_str(&format!(
            "{}\t{}-{}\t{}-{}\t{}\t{}\t{}\n",
            s.id,
            m.tokens.0,
            m.tokens.1,
            m.states.0,
            m.states.1,
            m.weight,
            one_line(&m.output),
            surface
        ));
    }
    out
}
