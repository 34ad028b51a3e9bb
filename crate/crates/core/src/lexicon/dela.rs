//! Line-oriented DELA format: `form,lemma.POS+trait+trait:code:code`.
//!
//! `,`, `.`, `+`, `:` and `\` are structural; a backslash escapes them
//! inside fields. An empty lemma stands for the inflected form itself.

use super::{LexiconEntry, LexiconError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelaDiagnostic {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParsedDela {
    pub entries: Vec<LexiconEntry>,
    /// Faulty lines skipped in lenient mode.
    pub diagnostics: Vec<DelaDiagnostic>,
}

/// Parses DELA lines. In strict mode the first faulty line is an error;
/// otherwise faulty lines are skipped and reported.
pub fn parse_dela(text: &str, strict: bool) -> Result<ParsedDela, LexiconError> {
    let mut out = ParsedDela::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            continue;
        }
        match parse_line(line) {
            Ok(e) => out.entries.push(e),
            Err(message) if strict => return Err(LexiconError::Dela { line: i + 1, message }),
            Err(message) => out.diagnostics.push(DelaDiagnostic { line: i + 1, message }),
        }
    }
    Ok(out)
}

/// Splits at the first unescaped character of `stops`, unescaping the
/// consumed field.
fn field<'a>(s: &'a str, stops: &[char]) -> Result<(String, Option<char>, &'a str), String> {
    let mut out = String::new();
    let mut chars = s.char_indices();
    while let Some((i, c)) = chars.next() {
        if c == '\\' {
            match chars.next() {
                Some((_, n)) => out.push(n),
                None => return Err("backslash at end of line".into()),
            }
        } else if stops.contains(&c) {
            return Ok((out, Some(c), &s[i + c.len_utf8()..]));
        } else {
            out.push(c);
        }
    }
    Ok((out, None, ""))
}

fn parse_line(line: &str) -> Result<LexiconEntry, String> {
    let (form, sep, rest) = field(line, &[','])?;
    if sep.is_none() {
        return Err("missing `,` after the inflected form".into());
    }
    if form.is_empty() {
        return Err("empty inflected form".into());
    }
    let (lemma, sep, rest) = field(rest, &['.'])?;
    if sep.is_none() {
        return Err("missing `.` before the part of speech".into());
    }
    let lemma = if lemma.is_empty() { form.clone() } else { lemma };
    let (pos, mut sep, mut rest) = field(rest, &['+', ':'])?;
    if pos.is_empty() {
        return Err("empty part of speech".into());
    }
    let mut entry = LexiconEntry {
        form,
        lemma,
        pos,
        traits: Vec::new(),
        codes: Vec::new(),
    };
    while let Some(kind) = sep {
        let (value, next, tail) = field(rest, &['+', ':'])?;
        if value.is_empty() {
            return Err(format!("empty field after `{kind}`"));
        }
        match kind {
            '+' if !entry.codes.is_empty() => {
                return Err(format!("trait `{value}` after an inflectional code"))
            }
            '+' => entry.traits.push(value),
            _ => entry.codes.push(value),
        }
        sep = next;
        rest = tail;
    }
    Ok(entry)
}

fn escape_into(out: &mut String, s: &str, structural: &[char]) {
    for c in s.chars() {
        if c == '\\' || structural.contains(&c) {
            out.push('\\');
        }
        out.push(c);
    }
}

pub fn write_dela(entries: &[LexiconEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        escape_into(&mut out, &e.form, &[',', '.']);
        out.push(',');
        escape_into(&mut out, &e.lemma, &['.']);
        out.push('.');
        escape_into(&mut out, &e.pos, &['+', ':']);
        for t in &e.traits {
            out.push('+');
            escape_into(&mut out, t, &['+', ':']);
        }
        for c in &e.codes {
            out.push(':');
            escape_into(&mut out, c, &['+', ':']);
        }
        out.push('\n');
    }
    out
}
