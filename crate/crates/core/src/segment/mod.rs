//! Segmentation of raw text into paragraphs, sentences and typed tokens.
//!
//! Token rules follow Unicode general categories: a word is a letter
//! followed by letters and combining marks, a number is a run of decimal
//! digits, and every punctuation or symbol character is a token of its own.
//! Hyphens and apostrophes never join words; multi-token words are
//! reassembled later by dictionary lookup.
//!
//! A sentence ends after `.`, `!`, `?` or `…` when the next token is preceded
//! by whitespace and is a capitalised word, a number or an opening
//! punctuation mark, or when the terminator is the last token of its
//! paragraph. Paragraphs are separated by blank lines in plain text and by
//! block-level tags in HTML.

pub(crate) mod document;
mod html;

use unicode_general_category::{get_general_category, GeneralCategory};
use unicode_script::{Script, UnicodeScript};

pub use document::{read_seg, write_seg};

use crate::model::{CaseClass, PunctRole, Token, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceFormat {
    Plain,
    Html,
}

impl SourceFormat {
    pub fn code(self) -> &'static str {
        match self {
            SourceFormat::Plain => "txt",
            SourceFormat::Html => "html",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentedText {
    pub format: SourceFormat,
    pub items: Vec<DocItem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DocItem {
    Paragraph(Paragraph),
    Space(String),
    Markup(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Paragraph {
    pub id: String,
    pub items: Vec<ParItem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParItem {
    Sentence(Sentence),
    Space(String),
    Markup(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub id: String,
    pub nodes: Vec<Node>,
}

/// Content of a sentence: tokens interleaved with the whitespace and inline
/// markup found between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Token(Token),
    Space(String),
    Markup(String),
}

impl SegmentedText {
    pub fn empty(format: SourceFormat) -> Self {
        Self {
            format,
            items: Vec::new(),
        }
    }

    pub fn paragraphs(&self) -> impl Iterator<Item = &Paragraph> {
        self.items.iter().filter_map(|i| match i {
            DocItem::Paragraph(p) => Some(p),
            _ => None,
        })
    }

    pub fn sentences(&self) -> impl Iterator<Item = &Sentence> {
        self.paragraphs().flat_map(Paragraph::sentences)
    }

    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.sentences().flat_map(Sentence::tokens)
    }

    /// Reassembles the text: token surfaces, whitespace and markup in
    /// document order. For plain input this is the original source.
    pub fn source_text(&self) -> String {
        let mut out = String::new();
        for item in &self.items {
            match item {
                DocItem::Paragraph(p) => p.write_text(&mut out),
                DocItem::Space(s) | DocItem::Markup(s) => out.push_str(s),
            }
        }
        out
    }
}

impl SegmentedText {
    /// Byte range of every token in [`SegmentedText::source_text`], in
    /// document order.
    pub fn token_offsets(&self) -> Vec<(usize, usize)> {
        let mut offsets = Vec::new();
        let mut at = 0;
        for item in &self.items {
            match item {
                DocItem::Paragraph(p) => {
                    for pi in &p.items {
                        match pi {
                            ParItem::Sentence(s) => {
                                for n in &s.nodes {
                                    match n {
                                        Node::Token(t) => {
                                            offsets.push((at, at + t.surface.len()));
                                            at += t.surface.len();
                                        }
                                        Node::Space(x) | Node::Markup(x) => at += x.len(),
                                    }
                                }
                            }
                            ParItem::Space(x) | ParItem::Markup(x) => at += x.len(),
                        }
                    }
                }
                DocItem::Space(x) | DocItem::Markup(x) => at += x.len(),
            }
        }
        offsets
    }
}

impl Paragraph {
    pub fn sentences(&self) -> impl Iterator<Item = &Sentence> {
        self.items.iter().filter_map(|i| match i {
            ParItem::Sentence(s) => Some(s),
            _ => None,
        })
    }

    fn write_text(&self, out: &mut String) {
        for item in &self.items {
            match item {
                ParItem::Sentence(s) => s.write_text(out),
                ParItem::Space(s) | ParItem::Markup(s) => out.push_str(s),
            }
        }
    }
}

impl Sentence {
    pub fn tokens(&self) -> impl Iterator<Item = &Token> {
        self.nodes.iter().filter_map(|n| match n {
            Node::Token(t) => Some(t),
            _ => None,
        })
    }

    pub fn token_count(&self) -> usize {
        self.tokens().count()
    }

    fn write_text(&self, out: &mut String) {
        for n in &self.nodes {
            match n {
                Node::Token(t) => out.push_str(&t.surface),
                Node::Space(s) | Node::Markup(s) => out.push_str(s),
            }
        }
    }

    /// For every token boundary `1..n`, whether whitespace separates token
    /// `i - 1` from token `i` (markup is transparent).
    pub fn gaps(&self) -> Vec<bool> {
        let mut gaps = Vec::new();
        let mut seen_token = false;
        let mut space = false;
        for n in &self.nodes {
            match n {
                Node::Token(_) => {
                    if seen_token {
                        gaps.push(space);
                    }
                    seen_token = true;
                    space = false;
                }
                Node::Space(_) => space = true,
                Node::Markup(_) => {}
            }
        }
        gaps
    }

    /// Text from the start of token `from` to the end of token `to - 1`,
    /// including the whitespace in between; markup is left out.
    pub fn text_between(&self, from: usize, to: usize) -> String {
        let mut out = String::new();
        let mut idx = 0;
        for n in &self.nodes {
            match n {
                Node::Token(t) => {
                    if idx >= from && idx < to {
                        out.push_str(&t.surface);
                    }
                    idx += 1;
                }
                Node::Space(s) if idx > from && idx < to => out.push_str(s),
                _ => {}
            }
        }
        out
    }
}

/// Segments `source`. Plain input is reproduced exactly by
/// [`SegmentedText::source_text`].
pub fn segment(source: &str, format: SourceFormat) -> SegmentedText {
    let mut ids = IdCounter::default();
    let atoms = match format {
        SourceFormat::Plain => {
            let mut atoms = Vec::new();
            let chars: Vec<(usize, char)> = source.char_indices().collect();
            tokenize_run(&chars, source.len(), &mut ids, &mut atoms);
            atoms
        }
        SourceFormat::Html => html::atoms(source, &mut ids),
    };
    assemble(atoms, format, &mut ids)
}

/// Segments raw bytes, rejecting invalid UTF-8.
pub fn segment_bytes(source: &[u8], format: SourceFormat) -> Result<SegmentedText, std::str::Utf8Error> {
    Ok(segment(std::str::from_utf8(source)?, format))
}

#[derive(Default)]
struct IdCounter {
    token: usize,
    sentence: usize,
    paragraph: usize,
}

impl IdCounter {
    fn token(&mut self) -> String {
        self.token += 1;
        format!("t{}", self.token)
    }
}

enum Atom {
    Token(Token),
    Space(String),
    Markup { raw: String, block: bool },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum CharClass {
    Space,
    Letter,
    Mark,
    Digit,
    Punct,
    Other,
}

fn classify(c: char) -> CharClass {
    use GeneralCategory::*;
    if c.is_whitespace() {
        return CharClass::Space;
    }
    match get_general_category(c) {
        UppercaseLetter | LowercaseLetter | TitlecaseLetter | ModifierLetter | OtherLetter => {
            CharClass::Letter
        }
        NonspacingMark | SpacingMark | EnclosingMark => CharClass::Mark,
        DecimalNumber => CharClass::Digit,
        ConnectorPunctuation | DashPunctuation | OpenPunctuation | ClosePunctuation
        | InitialPunctuation | FinalPunctuation | OtherPunctuation => CharClass::Punct,
        _ => CharClass::Other,
    }
}

fn punct_role(c: char) -> PunctRole {
    match get_general_category(c) {
        GeneralCategory::OpenPunctuation | GeneralCategory::InitialPunctuation => PunctRole::Opening,
        GeneralCategory::ClosePunctuation | GeneralCategory::FinalPunctuation => PunctRole::Closing,
        _ => PunctRole::Neutral,
    }
}

fn alphabet(word: &str) -> String {
    let script = word
        .chars()
        .map(|c| c.script())
        .find(|s| !matches!(s, Script::Common | Script::Inherited | Script::Unknown))
        .unwrap_or(Script::Common);
    script.full_name().to_lowercase()
}

/// Tokenizes a run of characters given with their source byte offsets;
/// `end` is the source offset just past the run.
fn tokenize_run(chars: &[(usize, char)], end: usize, ids: &mut IdCounter, out: &mut Vec<Atom>) {
    let offset_at = |i: usize| chars.get(i).map_or(end, |&(o, _)| o);
    let mut i = 0;
    while i < chars.len() {
        let class = classify(chars[i].1);
        let start = i;
        i += 1;
        match class {
            CharClass::Space => {
                while i < chars.len() && classify(chars[i].1) == CharClass::Space {
                    i += 1;
                }
            }
            CharClass::Letter => {
                while i < chars.len() && matches!(classify(chars[i].1), CharClass::Letter | CharClass::Mark) {
                    i += 1;
                }
            }
            CharClass::Digit => {
                while i < chars.len() && classify(chars[i].1) == CharClass::Digit {
                    i += 1;
                }
            }
            CharClass::Mark | CharClass::Punct | CharClass::Other => {
                // A stray mark stays attached to nothing; keep it with any
                // following marks as one symbol.
                if class == CharClass::Mark {
                    while i < chars.len() && classify(chars[i].1) == CharClass::Mark {
                        i += 1;
                    }
                }
            }
        }
        let text: String = chars[start..i].iter().map(|&(_, c)| c).collect();
        if class == CharClass::Space {
            out.push(Atom::Space(text));
            continue;
        }
        let first = chars[start].1;
        let (kind, alphabet, case_class, punct) = match class {
            CharClass::Letter => (
                TokenKind::Word,
                Some(alphabet(&text)),
                CaseClass::of_word(&text),
                PunctRole::NotApplicable,
            ),
            CharClass::Digit => (TokenKind::Numeric, None, CaseClass::NotApplicable, PunctRole::NotApplicable),
            CharClass::Punct => (TokenKind::Punctuation, None, CaseClass::NotApplicable, punct_role(first)),
            _ => (TokenKind::Symbol, None, CaseClass::NotApplicable, PunctRole::NotApplicable),
        };
        out.push(Atom::Token(Token {
            id: ids.token(),
            surface: text,
            kind,
            alphabet,
            case_class,
            punct_role: punct,
            span: (offset_at(start), offset_at(i)),
        }));
    }
}

fn is_terminator(t: &Token) -> bool {
    t.kind == TokenKind::Punctuation && matches!(t.surface.as_str(), "." | "!" | "?" | "…")
}

fn opens_sentence(t: &Token) -> bool {
    match t.kind {
        TokenKind::Word => t.starts_uppercase(),
        TokenKind::Numeric => true,
        TokenKind::Punctuation => t.punct_role == PunctRole::Opening,
        TokenKind::Symbol => false,
    }
}

fn is_separator(atom: &Atom, format: SourceFormat) -> bool {
    match (atom, format) {
        (Atom::Space(s), SourceFormat::Plain) => s.matches('\n').count() >= 2,
        (Atom::Markup { block, .. }, SourceFormat::Html) => *block,
        _ => false,
    }
}

fn to_doc_item(atom: Atom) -> DocItem {
    match atom {
        Atom::Space(s) => DocItem::Space(s),
        Atom::Markup { raw, .. } => DocItem::Markup(raw),
        Atom::Token(_) => unreachable!("tokens only live in paragraphs"),
    }
}

fn assemble(atoms: Vec<Atom>, format: SourceFormat, ids: &mut IdCounter) -> SegmentedText {
    let mut items = Vec::new();
    let mut chunk: Vec<Atom> = Vec::new();
    for atom in atoms {
        if is_separator(&atom, format) {
            flush_chunk(std::mem::take(&mut chunk), ids, &mut items);
            items.push(to_doc_item(atom));
        } else {
            chunk.push(atom);
        }
    }
    flush_chunk(chunk, ids, &mut items);
    SegmentedText { format, items }
}

fn flush_chunk(chunk: Vec<Atom>, ids: &mut IdCounter, items: &mut Vec<DocItem>) {
    let first_tok = chunk.iter().position(|a| matches!(a, Atom::Token(_)));
    let Some(first_tok) = first_tok else {
        items.extend(chunk.into_iter().map(to_doc_item));
        return;
    };
    let last_tok = chunk.iter().rposition(|a| matches!(a, Atom::Token(_))).unwrap();

    // Sentence ends: indices (into chunk) of tokens closing a sentence.
    let mut ends = Vec::new();
    for (i, atom) in chunk.iter().enumerate().take(last_tok + 1) {
        let Atom::Token(t) = atom else { continue };
        if !is_terminator(t) {
            continue;
        }
        if i == last_tok {
            ends.push(i);
            continue;
        }
        let mut spaced = false;
        for next in &chunk[i + 1..] {
            match next {
                Atom::Space(_) => spaced = true,
                Atom::Markup { .. } => {}
                Atom::Token(n) => {
                    if spaced && opens_sentence(n) {
                        ends.push(i);
                    }
                    break;
                }
            }
        }
    }
    if ends.last() != Some(&last_tok) {
        ends.push(last_tok);
    }

    ids.paragraph += 1;
    let mut par = Paragraph {
        id: ids.paragraph.to_string(),
        items: Vec::new(),
    };
    let atoms = chunk.into_iter().enumerate();
    let mut trailing = Vec::new();
    let mut ends = ends.into_iter().peekable();
    let mut sentence: Option<Sentence> = None;
    for (i, atom) in atoms {
        if i < first_tok {
            items.push(to_doc_item(atom));
            continue;
        }
        if i > last_tok {
            trailing.push(to_doc_item(atom));
            continue;
        }
        match (atom, sentence.as_mut()) {
            (Atom::Token(t), None) => {
                let id = format!("s{}", ids.sentence);
                ids.sentence += 1;
                sentence = Some(Sentence {
                    id,
                    nodes: vec![Node::Token(t)],
                });
            }
            (Atom::Token(t), Some(s)) => s.nodes.push(Node::Token(t)),
            (Atom::Space(sp), Some(s)) => s.nodes.push(Node::Space(sp)),
            (Atom::Markup { raw, .. }, Some(s)) => s.nodes.push(Node::Markup(raw)),
            (Atom::Space(sp), None) => par.items.push(ParItem::Space(sp)),
            (Atom::Markup { raw, .. }, None) => par.items.push(ParItem::Markup(raw)),
        }
        if ends.peek() == Some(&i) {
            ends.next();
            par.items.push(ParItem::Sentence(sentence.take().unwrap()));
        }
    }
    debug_assert!(sentence.is_none());
    items.push(DocItem::Paragraph(par));
    items.extend(trailing);
}
