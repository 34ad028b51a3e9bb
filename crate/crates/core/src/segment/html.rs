//! Lenient HTML scanning: tags become markup atoms, text runs are decoded
//! and tokenized with offsets into the original source.

use super::{tokenize_run, Atom, IdCounter};

const BLOCK_TAGS: &[&str] = &[
    "address", "article", "aside", "blockquote", "body", "br", "center", "dd", "div", "dl", "dt",
    "figcaption", "figure", "footer", "form", "h1", "h2", "h3", "h4", "h5", "h6", "head", "header",
    "hr", "html", "li", "main", "nav", "ol", "p", "pre", "section", "table", "tbody", "td", "tfoot",
    "th", "thead", "title", "tr", "ul", "script", "style",
];

fn tag_name(raw: &str) -> String {
    raw.trim_start_matches('<')
        .trim_start_matches('/')
        .chars()
        .take_while(|c| c.is_ascii_alphanumeric())
        .collect::<String>()
        .to_ascii_lowercase()
}

fn decode_entity(name: &str) -> Option<char> {
    if let Some(num) = name.strip_prefix('#') {
        let code = match num.strip_prefix(['x', 'X']) {
            Some(hex) => u32::from_str_radix(hex, 16).ok()?,
            None => num.parse().ok()?,
        };
        return char::from_u32(code);
    }
    Some(match name {
        "amp" => '&',
        "lt" => '<',
        "gt" => '>',
        "quot" => '"',
        "apos" => '\'',
        "nbsp" => '\u{a0}',
        _ => return None,
    })
}

/// Finds the end (exclusive) of the tag starting at `start`, honouring
/// quoted attribute values. Returns `None` for an unterminated tag.
fn tag_end(src: &str, start: usize) -> Option<usize> {
    if src[start..].starts_with("<!--") {
        return src[start + 4..].find("-->").map(|i| start + 4 + i + 3);
    }
    let mut quote = None;
    for (i, c) in src[start + 1..].char_indices() {
        match (quote, c) {
            (Some(q), c) if c == q => quote = None,
            (Some(_), _) => {}
            (None, '"' | '\'') => quote = Some(c),
            (None, '>') => return Some(start + 1 + i + 1),
            _ => {}
        }
    }
    None
}

fn starts_tag(rest: &str) -> bool {
    let mut chars = rest.chars();
    chars.next() == Some('<')
        && chars
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || matches!(c, '/' | '!' | '?'))
}

pub(super) fn atoms(src: &str, ids: &mut IdCounter) -> Vec<Atom> {
    let mut out = Vec::new();
    let mut text: Vec<(usize, char)> = Vec::new();
    let mut pos = 0;
    let flush = |text: &mut Vec<(usize, char)>, end: usize, ids: &mut IdCounter, out: &mut Vec<Atom>| {
        if !text.is_empty() {
            tokenize_run(text, end, ids, out);
            text.clear();
        }
    };
    while pos < src.len() {
        let rest = &src[pos..];
        if starts_tag(rest) {
            flush(&mut text, pos, ids, &mut out);
            let Some(mut end) = tag_end(src, pos) else {
                out.push(Atom::Markup {
                    raw: rest.to_string(),
                    block: false,
                });
                return out;
            };
            let name = tag_name(&src[pos..end]);
            let opening = !src[pos..].starts_with("</");
            if opening && (name == "script" || name == "style") {
                let close = format!("</{name}");
                if let Some(i) = src[end..].to_ascii_lowercase().find(&close) {
                    let close_start = end + i;
                    end = tag_end(src, close_start).unwrap_or(src.len());
                } else {
                    end = src.len();
                }
            }
            out.push(Atom::Markup {
                raw: src[pos..end].to_string(),
                block: BLOCK_TAGS.contains(&name.as_str()),
            });
            pos = end;
            continue;
        }
        let c = rest.chars().next().unwrap();
        if c == '&' {
            if let Some(semi) = rest[1..].find(';').filter(|&i| i <= 10) {
                if let Some(decoded) = decode_entity(&rest[1..1 + semi]) {
                    text.push((pos, decoded));
                    pos += semi + 2;
                    continue;
                }
            }
        }
        text.push((pos, c));
        pos += c.len_utf8();
    }
    flush(&mut text, pos, ids, &mut out);
    out
}
