//! Declarative tagset: attribute types with their value domains and the
//! attribute inventory of every part of speech.
//!
//! Document layout:
//!
//! ```xml
//! <tagset>
//!   <attrtype name='gender' type='enum'>
//!     <value name='masculine' alias='m'/>
//!     <value name='feminine' alias='f'/>
//!   </attrtype>
//!   <attrtype name='subcat' type='enum'>
//!     <value name='human' trait='hum'/>
//!   </attrtype>
//!   <attrtype name='antepos' type='bool'>
//!     <true alias='g'/>
//!   </attrtype>
//!   <pos name='adj' cutename='A'>
//!     <attribute name='antepos' type='antepos' default='false' shortcut='yes'/>
//!   </pos>
//! </tagset>
//! ```
//!
//! `alias` is the one-character code used in DELA inflectional codes
//! (`:mp`); `trait` is the name used after `+` in DELA lines. Boolean types
//! always have the two values `true` and `false`.

use std::collections::HashMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::error::FormatError;
use crate::xml;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TagsetError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{line}:{column}: duplicate {what} `{name}`")]
    Duplicate {
        what: &'static str,
        name: String,
        line: u32,
        column: u32,
    },
    #[error("{line}:{column}: attribute `{attribute}` refers to undeclared type `{type_ref}`")]
    UnresolvedType {
        attribute: String,
        type_ref: String,
        line: u32,
        column: u32,
    },
    #[error("{line}:{column}: default `{value}` is not a value of type `{type_ref}`")]
    BadDefault {
        value: String,
        type_ref: String,
        line: u32,
        column: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttrKind {
    Bool,
    Enum,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttrValue {
    pub name: String,
    pub alias: Option<char>,
    pub dela_trait: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttrType {
    pub name: String,
    pub kind: AttrKind,
    pub values: Vec<AttrValue>,
}

impl AttrType {
    pub fn value(&self, name: &str) -> Option<&AttrValue> {
        self.values.iter().find(|v| v.name == name)
    }

    pub fn by_alias(&self, alias: char) -> Option<&AttrValue> {
        self.values.iter().find(|v| v.alias == Some(alias))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttrDecl {
    pub name: String,
    pub type_ref: String,
    pub default: Option<String>,
    pub shortcut: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosDef {
    pub name: String,
    pub cutename: Option<String>,
    pub attributes: Vec<AttrDecl>,
}

impl PosDef {
    pub fn attribute(&self, name: &str) -> Option<&AttrDecl> {
        self.attributes.iter().find(|a| a.name == name)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Tagset {
    types: Vec<AttrType>,
    pos: Vec<PosDef>,
    type_index: HashMap<String, usize>,
    pos_index: HashMap<String, usize>,
    cute_index: HashMap<String, usize>,
}

impl PartialEq for Tagset {
    fn eq(&self, other: &Self) -> bool {
        self.types == other.types && self.pos == other.pos
    }
}

impl Eq for Tagset {}

impl Tagset {
    pub fn attr_types(&self) -> &[AttrType] {
        &self.types
    }

    pub fn pos_defs(&self) -> &[PosDef] {
        &self.pos
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty() && self.types.is_empty()
    }

    pub fn attr_type(&self, name: &str) -> Option<&AttrType> {
        self.type_index.get(name).map(|&i| &self.types[i])
    }

    pub fn pos(&self, name: &str) -> Option<&PosDef> {
        self.pos_index.get(name).map(|&i| &self.pos[i])
    }

    /// Resolves a part of speech by full name or cutename.
    pub fn pos_by_any(&self, name: &str) -> Option<&PosDef> {
        self.pos(name)
            .or_else(|| self.cute_index.get(name).map(|&i| &self.pos[i]))
    }

    /// Type of attribute `attr` as declared for `pos`.
    pub fn attr_type_for(&self, pos: &str, attr: &str) -> Option<&AttrType> {
        let decl = self.pos(pos)?.attribute(attr)?;
        self.attr_type(&decl.type_ref)
    }

    /// Default value of `attr` under `pos`, if one is declared.
    pub fn default_for(&self, pos: &str, attr: &str) -> Option<&str> {
        self.pos(pos)?.attribute(attr)?.default.as_deref()
    }

    /// Builds a tagset from parts, checking the same invariants as the
    /// document reader (locations are reported as 0:0).
    pub fn new(types: Vec<AttrType>, pos: Vec<PosDef>) -> Result<Self, TagsetError> {
        let mut ts = Tagset::default();
        for t in types {
            ts.add_type(t, (0, 0))?;
        }
        for p in pos {
            ts.add_pos(p, (0, 0), &[])?;
        }
        Ok(ts)
    }

    fn add_type(&mut self, t: AttrType, loc: (u32, u32)) -> Result<(), TagsetError> {
        let dup = |what, name: &str| TagsetError::Duplicate {
            what,
            name: name.to_string(),
            line: loc.0,
            column: loc.1,
        };
        if self.type_index.contains_key(&t.name) {
            return Err(dup("attribute type", &t.name));
        }
        for (i, v) in t.values.iter().enumerate() {
            let earlier = &t.values[..i];
            if earlier.iter().any(|w| w.name == v.name) {
                return Err(dup("value", &v.name));
            }
            if let Some(a) = v.alias {
                if earlier.iter().any(|w| w.alias == Some(a)) {
                    return Err(dup("alias", &a.to_string()));
                }
            }
        }
        self.type_index.insert(t.name.clone(), self.types.len());
        self.types.push(t);
        Ok(())
    }

    fn add_pos(
        &mut self,
        p: PosDef,
        loc: (u32, u32),
        attr_locs: &[(u32, u32)],
    ) -> Result<(), TagsetError> {
        let dup = |what, name: &str| TagsetError::Duplicate {
            what,
            name: name.to_string(),
            line: loc.0,
            column: loc.1,
        };
        if self.pos_index.contains_key(&p.name) {
            return Err(dup("part of speech", &p.name));
        }
        if let Some(c) = &p.cutename {
            if self.cute_index.contains_key(c) {
                return Err(dup("cutename", c));
            }
        }
        for (i, a) in p.attributes.iter().enumerate() {
            let (line, column) = attr_locs.get(i).copied().unwrap_or(loc);
            if p.attributes[..i].iter().any(|b| b.name == a.name) {
                return Err(TagsetError::Duplicate {
                    what: "attribute",
                    name: a.name.clone(),
                    line,
                    column,
                });
            }
            let Some(ty) = self.attr_type(&a.type_ref) else {
                return Err(TagsetError::UnresolvedType {
                    attribute: a.name.clone(),
                    type_ref: a.type_ref.clone(),
                    line,
                    column,
                });
            };
            if let Some(d) = &a.default {
                if ty.value(d).is_none() {
                    return Err(TagsetError::BadDefault {
                        value: d.clone(),
                        type_ref: a.type_ref.clone(),
                        line,
                        column,
                    });
                }
            }
        }
        if let Some(c) = &p.cutename {
            self.cute_index.insert(c.clone(), self.pos.len());
        }
        self.pos_index.insert(p.name.clone(), self.pos.len());
        self.pos.push(p);
        Ok(())
    }

    /// Reads a tagset document.
    pub fn parse(document: &str) -> Result<Self, TagsetError> {
        let doc = xml::parse(document)?;
        let root = xml::expect_root(&doc, "tagset")?;
        let mut ts = Tagset::default();
        // Types first so that POS declarations may precede the types they use.
        for node in xml::elements(root).filter(|n| n.has_tag_name("attrtype")) {
            let name = xml::req_attr(node, "name")?.to_string();
            let kind = match node.attribute("type").unwrap_or("enum") {
                "bool" => AttrKind::Bool,
                "enum" => AttrKind::Enum,
                other => {
                    return Err(xml::malformed(node, format!("unknown attribute kind `{other}`")).into())
                }
            };
            let mut values = Vec::new();
            if kind == AttrKind::Bool {
                for v in ["true", "false"] {
                    values.push(AttrValue {
                        name: v.to_string(),
                        alias: None,
                        dela_trait: None,
                    });
                }
            }
            for vnode in xml::elements(node) {
                let tag = vnode.tag_name().name();
                let alias = match vnode.attribute("alias") {
                    None => None,
                    Some(a) => {
                        let mut chars = a.chars();
                        match (chars.next(), chars.next()) {
                            (Some(c), None) => Some(c),
                            _ => {
                                return Err(xml::malformed(
                                    vnode,
                                    format!("alias `{a}` must be a single character"),
                                )
                                .into())
                            }
                        }
                    }
                };
                let dela_trait = vnode.attribute("trait").map(str::to_string);
                match (kind, tag) {
                    (AttrKind::Bool, "true" | "false") => {
                        let slot = values.iter_mut().find(|v| v.name == tag).unwrap();
                        slot.alias = alias;
                        slot.dela_trait = dela_trait;
                    }
                    (AttrKind::Enum, "value") => values.push(AttrValue {
                        name: xml::req_attr(vnode, "name")?.to_string(),
                        alias,
                        dela_trait,
                    }),
                    _ => {
                        return Err(xml::malformed(
                            vnode,
                            format!("unexpected <{tag}> in attribute type `{name}`"),
                        )
                        .into())
                    }
                }
            }
            ts.add_type(AttrType { name, kind, values }, xml::location(node))?;
        }
        for node in xml::elements(root) {
            match node.tag_name().name() {
                "attrtype" => {}
                "pos" => {
                    let name = xml::req_attr(node, "name")?.to_string();
                    let cutename = node.attribute("cutename").map(str::to_string);
                    let mut attributes = Vec::new();
                    let mut locs = Vec::new();
                    for anode in xml::elements(node) {
                        if !anode.has_tag_name("attribute") {
                            return Err(xml::malformed(
                                anode,
                                format!("unexpected <{}> in pos `{name}`", anode.tag_name().name()),
                            )
                            .into());
                        }
                        let aname = xml::req_attr(anode, "name")?.to_string();
                        attributes.push(AttrDecl {
                            type_ref: anode.attribute("type").unwrap_or(&aname).to_string(),
                            name: aname,
                            default: anode.attribute("default").map(str::to_string),
                            shortcut: matches!(anode.attribute("shortcut"), Some("yes" | "true")),
                        });
                        locs.push(xml::location(anode));
                    }
                    ts.add_pos(
                        PosDef {
                            name,
                            cutename,
                            attributes,
                        },
                        xml::location(node),
                        &locs,
                    )?;
                }
                other => {
                    return Err(xml::malformed(node, format!("unexpected <{other}> in tagset")).into())
                }
            }
        }
        Ok(ts)
    }

    /// Canonical document form; [`Tagset::parse`] of the result yields an
    /// equal tagset.
    pub fn to_document(&self) -> String {
        let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<tagset>\n");
        for t in &self.types {
            let kind = match t.kind {
                AttrKind::Bool => "bool",
                AttrKind::Enum => "enum",
            };
            let _ = writeln!(out, "  <attrtype name=\"{}\" type=\"{kind}\">", xml::escape_attr(&t.name));
            for v in &t.values {
                if t.kind == AttrKind::Bool && v.alias.is_none() && v.dela_trait.is_none() {
                    continue;
                }
                let tag = if t.kind == AttrKind::Bool { v.name.as_str() } else { "value" };
                out.push_str("    <");
                out.push_str(tag);
                if t.kind == AttrKind::Enum {
                    let _ = write!(out, " name=\"{}\"", xml::escape_attr(&v.name));
                }
                if let Some(a) = v.alias {
                    let _ = write!(out, " alias=\"{}\"", xml::escape_attr(&a.to_string()));
                }
                if let Some(tr) = &v.dela_trait {
                    let _ = write!(out, " trait=\"{}\"", xml::escape_attr(tr));
                }
                out.push_str("/>\n");
            }
            out.push_str("  </attrtype>\n");
        }
        for p in &self.pos {
            let _ = write!(out, "  <pos name=\"{}\"", xml::escape_attr(&p.name));
            if let Some(c) = &p.cutename {
                let _ = write!(out, " cutename=\"{}\"", xml::escape_attr(c));
            }
            out.push_str(">\n");
            for a in &p.attributes {
                let _ = write!(
                    out,
                    "    <attribute name=\"{}\" type=\"{}\"",
                    xml::escape_attr(&a.name),
                    xml::escape_attr(&a.type_ref)
                );
                if let Some(d) = &a.default {
                    let _ = write!(out, " default=\"{}\"", xml::escape_attr(d));
                }
                if a.shortcut {
                    out.push_str(" shortcut=\"yes\"");
                }
                out.push_str("/>\n");
            }
            out.push_str("  </pos>\n");
        }
        out.push_str("</tagset>\n");
        out
    }

    /// Stable 64-bit fingerprint of the canonical document, stored in
    /// binary indexes to detect tagset mismatches.
    pub fn fingerprint(&self) -> u64 {
        let digest = Sha256::digest(self.to_document().as_bytes());
        let mut b = [0u8; 8];
        b.copy_from_slice(&digest[..8]);
        u64::from_le_bytes(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const FIG3: &str = r#"<tagset>
<attrtype name='postpos' type='bool'/>
<attrtype name='antepos' type='bool'>
  <true alias='g'/>
</attrtype>
<attrtype name='gender' type='enum'>
  <value name='masculine' alias='m'/>
  <value name='feminine' alias='f'/>
</attrtype>
<attrtype name='number' type='enum'>
  <value name='singular' alias='s'/>
  <value name='plural' alias='p'/>
</attrtype>
<pos name='adj' cutename='A'>
  <attribute name='postpos' type='postpos' default='false' shortcut='yes'/>
  <attribute name='antepos' type='antepos' default='false' shortcut='yes'/>
  <attribute name='gender' type='gender' shortcut='yes'/>
  <attribute name='number' type='number' shortcut='yes'/>
</pos>
</tagset>"#;

    #[test]
    fn reads_adjective_declaration() {
        let ts = Tagset::parse(FIG3).unwrap();
        assert_eq!(ts.pos_defs().len(), 1);
        let adj = ts.pos_by_any("A").unwrap();
        assert_eq!(adj.name, "adj");
        assert_eq!(adj.cutename.as_deref(), Some("A"));
        assert_eq!(adj.attributes.len(), 4);
        assert!(adj.attributes.iter().all(|a| a.shortcut));
        assert_eq!(ts.default_for("adj", "antepos"), Some("false"));
        assert_eq!(ts.default_for("adj", "gender"), None);
        let antepos = ts.attr_type("antepos").unwrap();
        assert_eq!(antepos.by_alias('g').unwrap().name, "true");
    }

    #[test]
    fn root_only_document_is_empty() {
        let ts = Tagset::parse("<tagset/>").unwrap();
        assert!(ts.is_empty());
        assert!(ts.pos_defs().is_empty());
    }

    #[test]
    fn canonical_document_round_trips() {
        let ts = Tagset::parse(FIG3).unwrap();
        let again = Tagset::parse(&ts.to_document()).unwrap();
        assert_eq!(ts, again);
        assert_eq!(ts.fingerprint(), again.fingerprint());
    }

    #[test]
    fn duplicate_pos_reported_with_location() {
        let doc = "<tagset>\n<pos name='n'/>\n<pos name='n'/>\n</tagset>";
        match Tagset::parse(doc) {
            Err(TagsetError::Duplicate { what, name, line, .. }) => {
                assert_eq!(what, "part of speech");
                assert_eq!(name, "n");
                assert_eq!(line, 3);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn duplicate_alias_rejected() {
        let doc = "<tagset><attrtype name='g'><value name='a' alias='x'/><value name='b' alias='x'/></attrtype></tagset>";
        assert!(matches!(
            Tagset::parse(doc),
            Err(TagsetError::Duplicate { what: "alias", .. })
        ));
    }

    #[test]
    fn unresolved_type_reported_with_location() {
        let doc = "<tagset>\n<pos name='n'>\n  <attribute name='gender'/>\n</pos>\n</tagset>";
        match Tagset::parse(doc) {
            Err(TagsetError::UnresolvedType {
                attribute, line, column, ..
            }) => {
                assert_eq!(attribute, "gender");
                assert_eq!((line, column), (3, 3));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_document_is_an_error() {
        assert!(matches!(
            Tagset::parse("<tagset><pos name='x'></tagset>"),
            Err(TagsetError::Format(FormatError::Xml(_)))
        ));
        assert!(matches!(
            Tagset::parse("<other/>"),
            Err(TagsetError::Format(FormatError::Malformed { .. }))
        ));
    }

    #[test]
    fn thirteen_categories_eighteen_features() {
        let mut doc = String::from("<tagset>");
        for i in 0..18 {
            doc.push_str(&format!(
                "<attrtype name='f{i}'><value name='a' alias='a'/><value name='b' alias='b'/></attrtype>"
            ));
        }
        for p in 0..13 {
            doc.push_str(&format!("<pos name='p{p}' cutename='P{p}'>"));
            for i in 0..18 {
                doc.push_str(&format!("<attribute name='f{i}'/>"));
            }
            doc.push_str("</pos>");
        }
        doc.push_str("</tagset>");
        let ts = Tagset::parse(&doc).unwrap();
        assert_eq!(ts.pos_defs().len(), 13);
        assert_eq!(ts.attr_types().len(), 18);
        assert!(ts.pos_defs().iter().all(|p| p.attributes.len() == 18));
    }
}
