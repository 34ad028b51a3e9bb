//! Small helpers shared by the XML readers and writers.

use roxmltree::Node;

use crate::error::FormatError;

/// Escapes text content and attribute values.
pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\r' => out.push_str("&#13;"),
            _ => out.push(c),
        }
    }
    out
}

/// Escapes an attribute value; newlines and tabs are kept as character
/// references so that attribute-value normalization does not eat them.
pub fn escape_attr(s: &str) -> String {
    let mut out = escape(s);
    if out.contains(['\n', '\t']) {
        out = out.replace('\n', "&#10;").replace('\t', "&#9;");
    }
    out
}

pub fn parse(text: &str) -> Result<roxmltree::Document<'_>, FormatError> {
    roxmltree::Document::parse(text).map_err(|e| FormatError::Xml(e.to_string()))
}

pub fn location(node: Node<'_, '_>) -> (u32, u32) {
    let pos = node.document().text_pos_at(node.range().start);
    (pos.row, pos.col)
}

pub fn malformed(node: Node<'_, '_>, msg: impl Into<String>) -> FormatError {
    let (line, column) = location(node);
    FormatError::Malformed {
        line,
        column,
        message: msg.into(),
    }
}

pub fn req_attr<'a>(node: Node<'a, '_>, name: &str) -> Result<&'a str, FormatError> {
    node.attribute(name)
        .ok_or_else(|| malformed(node, format!("<{}> lacks attribute `{name}`", node.tag_name().name())))
}

pub fn num_attr<T: std::str::FromStr>(node: Node<'_, '_>, name: &str) -> Result<T, FormatError> {
    let raw = req_attr(node, name)?;
    raw.parse()
        .map_err(|_| malformed(node, format!("attribute `{name}` is not a number: {raw:?}")))
}

pub fn elements<'a, 'i>(node: Node<'a, 'i>) -> impl Iterator<Item = Node<'a, 'i>> {
    node.children().filter(|n| n.is_element())
}

pub fn child<'a, 'i>(node: Node<'a, 'i>, name: &str) -> Option<Node<'a, 'i>> {
    elements(node).find(|n| n.has_tag_name(name))
}

/// Concatenated text of a node's descendants.
pub fn text_of(node: Node<'_, '_>) -> String {
    node.descendants()
        .filter(|n| n.is_text())
        .filter_map(|n| n.text())
        .collect()
}

pub fn expect_root<'a, 'i>(
    doc: &'a roxmltree::Document<'i>,
    name: &str,
) -> Result<Node<'a, 'i>, FormatError> {
    let root = doc.root_element();
    if root.has_tag_name(name) {
        Ok(root)
    } else {
        Err(malformed(
            root,
            format!("expected root element <{name}>, found <{}>", root.tag_name().name()),
        ))
    }
}
