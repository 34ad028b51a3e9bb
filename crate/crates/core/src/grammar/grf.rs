//! Plain-text graph format in the style of box-and-arrow graph editors.
//!
//! ```text
//! AXIOM main
//! #Unigraph
//! NAME main
//! 3
//! "<E>" 0 0 1 2
//! "" 200 0 0
//! "<DET>+le/[NP" 100 0 1 1
//! ```
//!
//! Each graph lists its boxes; box 0 is the start and box 1 the end. A
//! box line holds the quoted content, a position and its successors.
//! Content items are joined by `+`: `<E>` reads nothing, `:name` calls a
//! graph, `<mask>` is a lexical mask and a bare word matches that form.
//! An output follows an unescaped `/`. Edges carry no weight here, so
//! weights read from this format are 0.

use std::fmt::Write as _;

use crate::error::FormatError;
use crate::model::LexicalMask;

use super::{GrammarError, GrammarGraph, GrammarSet, GraphEdge, GraphNode, NodeContent};

fn escape(s: &str, special: &[char]) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        if c == '\\' || special.contains(&c) {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            if let Some(n) = chars.next() {
                out.push(n);
            }
        } else {
            out.push(c);
        }
    }
    out
}

/// Byte positions of unescaped occurrences of `c`.
fn unescaped(s: &str, c: char) -> Vec<usize> {
    let mut out = Vec::new();
    let mut escaped = false;
    for (i, ch) in s.char_indices() {
        if escaped {
            escaped = false;
        } else if ch == '\\' {
            escaped = true;
        } else if ch == c {
            out.push(i);
        }
    }
    out
}

const BARE_SPECIAL: &[char] = &['+', '/', '<', '>', ':', '"'];

fn content_text(node: &GraphNode, is_end: bool) -> String {
    let mut out = match &node.content {
        NodeContent::Epsilon if is_end && node.output.is_none() => String::new(),
        NodeContent::Epsilon => "<E>".to_string(),
        NodeContent::Call(g) => format!(":{}", escape(g, BARE_SPECIAL)),
        NodeContent::Masks(ms) => ms
            .iter()
            .map(|m| match &m.form {
                Some(f) if !m.negated && m.is_form_only() && !f.is_empty() && f != "E" => escape(f, BARE_SPECIAL),
                _ => format!("<{m}>"),
            })
            .collect::<Vec<_>>()
            .join("+"),
    };
    if let Some(o) = &node.output {
        out.push('/');
        out.push_str(&escape(o, &['"']));
    }
    out
}

/// Writes graphs in the text format; the axiom is named on the first line.
pub fn graphs_to_grf(set: &GrammarSet) -> String {
    let mut out = format!("AXIOM {}\n", set.axiom);
    for g in &set.graphs {
        // Box 0 is the start, box 1 the end, then the other nodes.
        let mut order = vec![g.start];
        let extra_end = g.start == g.end;
        if !extra_end {
            order.push(g.end);
        }
        order.extend((0..g.nodes.len()).filter(|&n| n != g.start && n != g.end));
        let mut index = vec![0; g.nodes.len()];
        let shift = usize::from(extra_end);
        for (i, &n) in order.iter().enumerate() {
            index[n] = if i == 0 { 0 } else { i + shift };
        }
        let _ = writeln!(out, "#Unigraph\nNAME {}\n{}", g.name, g.nodes.len() + shift);
        let succ = |n: usize| -> Vec<usize> {
            let mut s: Vec<usize> = g.edges.iter().filter(|e| e.from == n).map(|e| index[e.to]).collect();
            if extra_end && n == g.end {
                s.push(1);
            }
            s
        };
        let mut lines: Vec<(usize, String)> = order
            .iter()
            .map(|&n| {
                let s = succ(n);
                let mut line = format!(
                    "\"{}\" {} 0 {}",
                    content_text(&g.nodes[n], n == g.end && !extra_end),
                    index[n] * 100,
                    s.len()
                );
                for t in s {
                    let _ = write!(line, " {t}");
                }
                (index[n], line)
            })
            .collect();
        if extra_end {
            lines.push((1, "\"\" 100 0 0".to_string()));
        }
        lines.sort_by_key(|l| l.0);
        for (_, l) in lines {
            out.push_str(&l);
            out.push('\n');
        }
    }
    out
}

fn line_error(line: usize, message: impl Into<String>) -> GrammarError {
    FormatError::Line {
        line,
        message: message.into(),
    }
    .into()
}

fn parse_content(text: &str, line: usize) -> Result<(NodeContent, Option<String>), GrammarError> {
    let (content, output) = match unescaped(text, '/').first() {
        Some(&i) => (&text[..i], Some(unescape(&text[i + 1..]))),
        None => (text, None),
    };
    if content.is_empty() {
        return Ok((NodeContent::Epsilon, output));
    }
    let mut items = Vec::new();
    let mut start = 0;
    for cut in unescaped(content, '+').into_iter().chain([content.len()]) {
        items.push(&content[start..cut]);
        start = cut + 1;
    }
    let mut masks = Vec::new();
    let mut result = None;
    for item in &items {
        if *item == "<E>" {
            result = Some(NodeContent::Epsilon);
        } else if let Some(name) = item.strip_prefix(':') {
            result = Some(NodeContent::Call(unescape(name)));
        } else if item.starts_with('<') && unescaped(item, '>').last() == Some(&(item.len() - 1)) {
            let inner = &item[1..item.len() - 1];
            masks.push(
                inner
                    .parse::<LexicalMask>()
                    .map_err(|e| line_error(line, format!("bad mask `{inner}`: {e}")))?,
            );
        } else if item.is_empty() {
            return Err(line_error(line, "empty box item"));
        } else {
            masks.push(LexicalMask::form(&unescape(item)));
        }
    }
    match (result, masks.is_empty(), items.len()) {
        (Some(c), true, 1) => Ok((c, output)),
        (None, false, _) => Ok((NodeContent::Masks(masks), output)),
        _ => Err(line_error(line, "a box mixing calls, <E> and masks is not supported")),
    }
}

/// Reads graphs in the text format.
pub fn grf_to_graphs(text: &str) -> Result<GrammarSet, GrammarError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();
    let mut pos = 0;
    let mut axiom = None;
    if let Some((_, l)) = lines.first() {
        if let Some(a) = l.strip_prefix("AXIOM ") {
            axiom = Some(a.trim().to_string());
            pos = 1;
        }
    }
    let mut graphs = Vec::new();
    while pos < lines.len() {
        let (ln, header) = lines[pos];
        if header.trim() != "#Unigraph" {
            return Err(line_error(ln, "expected #Unigraph"));
        }
        let (ln, name_line) = *lines.get(pos + 1).ok_or_else(|| line_error(ln, "missing NAME"))?;
        let name = name_line
            .strip_prefix("NAME ")
            .ok_or_else(|| line_error(ln, "expected NAME"))?
            .trim()
            .to_string();
        let (ln, count_line) = *lines.get(pos + 2).ok_or_else(|| line_error(ln, "missing box count"))?;
        let count: usize = count_line
            .trim()
            .parse()
            .map_err(|_| line_error(ln, "bad box count"))?;
        if count < 2 {
            return Err(line_error(ln, "a graph needs a start and an end box"));
        }
        let mut nodes = Vec::new();
        let mut edges = Vec::new();
        for k in 0..count {
            let (ln, l) = *lines
                .get(pos + 3 + k)
                .ok_or_else(|| line_error(ln, format!("missing box {k}")))?;
            let body = l.trim_start();
            let rest = body.strip_prefix('"').ok_or_else(|| line_error(ln, "box content must be quoted"))?;
            let close = *unescaped(rest, '"').first().ok_or_else(|| line_error(ln, "unterminated box content"))?;
            let (content, output) = parse_content(&rest[..close], ln)?;
            let nums: Vec<i64> = rest[close + 1..]
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| line_error(ln, format!("bad number `{t}`"))))
                .collect::<Result<_, _>>()?;
            let n = *nums.get(2).ok_or_else(|| line_error(ln, "missing successor count"))? as usize;
            if nums.len() != 3 + n {
                return Err(line_error(ln, "successor count does not match"));
            }
            for &s in &nums[3..] {
                if s < 0 || s as usize >= count {
                    return Err(line_error(ln, format!("successor {s} out of range")));
                }
                edges.push(GraphEdge {
                    from: k,
                    to: s as usize,
                    weight: 0,
                });
            }
            nodes.push(GraphNode {
                id: k.to_string(),
                content,
                output,
            });
        }
        graphs.push(GrammarGraph {
            name,
            nodes,
            edges,
            start: 0,
            end: 1,
        });
        pos += 3 + count;
    }
    let axiom = match axiom {
        Some(a) => a,
        None => graphs.first().map(|g| g.name.clone()).ok_or_else(|| line_error(1, "no graph"))?,
    };
    let set = GrammarSet { axiom, graphs };
    set.validate()?;
    Ok(set)
}
