//! The segmented-text document:
//!
//! ```xml
//! <?xml version="1.0"?>
//! <document original_format="txt"><par id="1"><tu id="s0"><token type="word"
//! id="t1" alph="latin" case="capit">La</token> <token ...>police</token>...</tu></par>
//! </document>
//! ```
//!
//! Whitespace between tokens, sentences and paragraphs is kept as character
//! data so that plain text is recoverable byte for byte. HTML markup is kept
//! in `<markup>` elements. Token byte spans are implied by the running text
//! for plain documents and written as `span="start-end"` for HTML ones.

use std::collections::HashSet;
use std::fmt::Write as _;

use roxmltree::Node as XmlNode;

use super::{DocItem, Node, ParItem, Paragraph, SegmentedText, Sentence, SourceFormat};
use crate::error::FormatError;
use crate::model::{CaseClass, PunctRole, Token, TokenKind};
use crate::xml;

pub fn write_seg(text: &SegmentedText) -> String {
    let mut out = String::from("<?xml version=\"1.0\"?>\n");
    let _ = write!(out, "<document original_format=\"{}\">", text.format.code());
    let with_span = text.format == SourceFormat::Html;
    for item in &text.items {
        match item {
            DocItem::Paragraph(p) => {
                let _ = write!(out, "<par id=\"{}\">", xml::escape_attr(&p.id));
                for pi in &p.items {
                    match pi {
                        ParItem::Sentence(s) => write_sentence(&mut out, s, with_span),
                        ParItem::Space(sp) => out.push_str(&xml::escape(sp)),
                        ParItem::Markup(m) => write_markup(&mut out, m),
                    }
                }
                out.push_str("</par>");
            }
            DocItem::Space(sp) => out.push_str(&xml::escape(sp)),
            DocItem::Markup(m) => write_markup(&mut out, m),
        }
    }
    out.push_str("</document>\n");
    out
}

fn write_markup(out: &mut String, raw: &str) {
    let _ = write!(out, "<markup>{}</markup>", xml::escape(raw));
}

fn write_sentence(out: &mut String, s: &Sentence, with_span: bool) {
    let _ = write!(out, "<tu id=\"{}\">", xml::escape_attr(&s.id));
    for n in &s.nodes {
        match n {
            Node::Token(t) => write_token(out, t, with_span),
            Node::Space(sp) => out.push_str(&xml::escape(sp)),
            Node::Markup(m) => write_markup(out, m),
        }
    }
    out.push_str("</tu>");
}

/// Writes one `<token>` element.
pub(crate) fn write_token(out: &mut String, t: &Token, with_span: bool) {
    let _ = write!(
        out,
        "<token type=\"{}\" id=\"{}\"",
        t.kind.as_str(),
        xml::escape_attr(&t.id)
    );
    if let Some(a) = &t.alphabet {
        let _ = write!(out, " alph=\"{}\"", xml::escape_attr(a));
    }
    let case = match (t.kind, t.case_class) {
        (TokenKind::Word, CaseClass::NotApplicable) => Some("none"),
        (_, c) => c.code(),
    };
    if let Some(c) = case {
        let _ = write!(out, " case=\"{c}\"");
    }
    if let Some(p) = t.punct_role.code() {
        let _ = write!(out, " punct=\"{p}\"");
    }
    if with_span {
        let _ = write!(out, " span=\"{}-{}\"", t.span.0, t.span.1);
    }
    let _ = write!(out, ">{}</token>", xml::escape(&t.surface));
}

/// Reads a `<token>` element. `offset` is the byte offset implied by the
/// running text, used when the element has no `span` attribute.
pub(crate) fn read_token(node: XmlNode<'_, '_>, offset: usize) -> Result<Token, FormatError> {
    let kind_raw = xml::req_attr(node, "type")?;
    let kind = TokenKind::from_name(kind_raw)
        .ok_or_else(|| xml::malformed(node, format!("unknown token type `{kind_raw}`")))?;
    let id = xml::req_attr(node, "id")?.to_string();
    let surface = xml::text_of(node);
    if surface.is_empty() {
        return Err(xml::malformed(node, format!("token `{id}` is empty")));
    }
    let alphabet = node.attribute("alph").map(str::to_string);
    let case_class = match node.attribute("case") {
        Some(c) => CaseClass::from_code(c)
            .ok_or_else(|| xml::malformed(node, format!("unknown case class `{c}`")))?,
        None if kind == TokenKind::Word => CaseClass::Lower,
        None => CaseClass::NotApplicable,
    };
    let punct_role = match (node.attribute("punct"), kind) {
        (Some("open"), _) => PunctRole::Opening,
        (Some("close"), _) => PunctRole::Closing,
        (Some(p), _) => return Err(xml::malformed(node, format!("unknown punctuation role `{p}`"))),
        (None, TokenKind::Punctuation) => PunctRole::Neutral,
        (None, _) => PunctRole::NotApplicable,
    };
    if kind == TokenKind::Word && alphabet.is_none() {
        return Err(xml::malformed(node, format!("word token `{id}` has no alphabet")));
    }
    let span = match node.attribute("span") {
        Some(raw) => {
            let parsed = raw
                .split_once('-')
                .and_then(|(a, b)| Some((a.parse().ok()?, b.parse().ok()?)));
            match parsed {
                Some((a, b)) if b > a => (a, b),
                _ => return Err(xml::malformed(node, format!("bad span `{raw}`"))),
            }
        }
        None => (offset, offset + surface.len()),
    };
    Ok(Token {
        id,
        surface,
        kind,
        alphabet,
        case_class,
        punct_role,
        span,
    })
}

struct Reader {
    offset: usize,
    token_ids: HashSet<String>,
    other_ids: HashSet<String>,
}

impl Reader {
    fn space(&mut self, node: XmlNode<'_, '_>) -> Result<String, FormatError> {
        let s = node.text().unwrap_or_default().to_string();
        if !s.chars().all(char::is_whitespace) {
            return Err(xml::malformed(node, "text outside of a token"));
        }
        self.offset += s.len();
        Ok(s)
    }

    fn markup(&mut self, node: XmlNode<'_, '_>) -> String {
        let s = xml::text_of(node);
        self.offset += s.len();
        s
    }

    fn unique(&mut self, node: XmlNode<'_, '_>, id: &str, token: bool) -> Result<(), FormatError> {
        let set = if token { &mut self.token_ids } else { &mut self.other_ids };
        if !set.insert(id.to_string()) {
            return Err(xml::malformed(node, format!("duplicate id `{id}`")));
        }
        Ok(())
    }

    fn sentence(&mut self, node: XmlNode<'_, '_>) -> Result<Sentence, FormatError> {
        let id = xml::req_attr(node, "id")?.to_string();
        self.unique(node, &format!("s:{id}"), false)?;
        let mut nodes = Vec::new();
        for c in node.children() {
            if c.is_text() {
                nodes.push(Node::Space(self.space(c)?));
            } else if c.has_tag_name("token") {
                let t = read_token(c, self.offset)?;
                self.unique(c, &t.id, true)?;
                self.offset += t.surface.len();
                nodes.push(Node::Token(t));
            } else if c.has_tag_name("markup") {
                nodes.push(Node::Markup(self.markup(c)));
            } else if c.is_element() {
                return Err(xml::malformed(c, format!("unexpected <{}> in <tu>", c.tag_name().name())));
            }
        }
        if !nodes.iter().any(|n| matches!(n, Node::Token(_))) {
            return Err(xml::malformed(node, format!("sentence `{id}` has no token")));
        }
        Ok(Sentence { id, nodes })
    }

    fn paragraph(&mut self, node: XmlNode<'_, '_>) -> Result<Paragraph, FormatError> {
        let id = xml::req_attr(node, "id")?.to_string();
        self.unique(node, &format!("p:{id}"), false)?;
        let mut items = Vec::new();
        for c in node.children() {
            if c.is_text() {
                items.push(ParItem::Space(self.space(c)?));
            } else if c.has_tag_name("tu") {
                items.push(ParItem::Sentence(self.sentence(c)?));
            } else if c.has_tag_name("markup") {
                items.push(ParItem::Markup(self.markup(c)));
            } else if c.is_element() {
                return Err(xml::malformed(c, format!("unexpected <{}> in <par>", c.tag_name().name())));
            }
        }
        Ok(Paragraph { id, items })
    }
}

pub fn read_seg(document: &str) -> Result<SegmentedText, FormatError> {
    let doc = xml::parse(document)?;
    let root = xml::expect_root(&doc, "document")?;
    let format = match root.attribute("original_format").unwrap_or("txt") {
        "txt" => SourceFormat::Plain,
        "html" => SourceFormat::Html,
        other => return Err(xml::malformed(root, format!("unknown original_format `{other}`"))),
    };
    let mut r = Reader {
        offset: 0,
        token_ids: HashSet::new(),
        other_ids: HashSet::new(),
    };
    let mut items = Vec::new();
    for c in root.children() {
        if c.is_text() {
            items.push(DocItem::Space(r.space(c)?));
        } else if c.has_tag_name("par") {
            items.push(DocItem::Paragraph(r.paragraph(c)?));
        } else if c.has_tag_name("markup") {
            items.push(DocItem::Markup(r.markup(c)));
        } else if c.is_element() {
            return Err(xml::malformed(c, format!("unexpected <{}> in <document>", c.tag_name().name())));
        }
    }
    Ok(SegmentedText { format, items })
}
