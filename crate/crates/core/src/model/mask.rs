use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::{LexicalAnalysis, Tagset};

/// A set of words described by constraints on form, lemma, part of speech
/// and features.
///
/// Textual syntax: `*` is the universal word mask; otherwise an optional
/// leading `!` (negation) followed by `;`-separated constraints
/// `pos=V`, `form=V`, `lemma=V` or `attribute=value`. A bare `V` is short
/// for `pos=V`. A backslash escapes the next character.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LexicalMask {
    pub pos: Option<String>,
    pub form: Option<String>,
    pub lemma: Option<String>,
    pub features: Vec<(String, String)>,
    pub negated: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MaskParseError {
    #[error("empty mask expression")]
    Empty,
    #[error("empty constraint in mask `{0}`")]
    EmptyConstraint(String),
    #[error("`{key}` constrained twice in mask `{mask}`")]
    Repeated { key: String, mask: String },
    #[error("dangling escape at end of mask `{0}`")]
    DanglingEscape(String),
}

impl LexicalMask {
    pub fn universal() -> Self {
        Self::default()
    }

    pub fn pos(pos: &str) -> Self {
        Self {
            pos: Some(pos.to_string()),
            ..Self::default()
        }
    }

    pub fn form(form: &str) -> Self {
        Self {
            form: Some(form.to_string()),
            ..Self::default()
        }
    }

    pub fn lemma(lemma: &str) -> Self {
        Self {
            lemma: Some(lemma.to_string()),
            ..Self::default()
        }
    }

    pub fn with_feature(mut self, name: &str, value: &str) -> Self {
        self.features.push((name.to_string(), value.to_string()));
        self
    }

    pub fn negate(mut self) -> Self {
        self.negated = !self.negated;
        self
    }

    pub fn is_universal(&self) -> bool {
        !self.negated
            && self.pos.is_none()
            && self.form.is_none()
            && self.lemma.is_none()
            && self.features.is_empty()
    }

    /// True when the only constraint is a literal form.
    pub fn is_form_only(&self) -> bool {
        self.form.is_some() && self.pos.is_none() && self.lemma.is_none() && self.features.is_empty()
    }

    /// The mask that selects exactly the readings sharing `a`'s part of
    /// speech and features.
    pub fn from_analysis(a: &LexicalAnalysis) -> Self {
        Self {
            pos: Some(a.pos.clone()),
            features: a
                .features
                .iter()
                .map(|f| (f.name.clone(), f.value.clone()))
                .collect(),
            ..Self::default()
        }
    }

    /// Tests the mask against an analysis. With a tagset, absent attributes
    /// take their part-of-speech default, a part of speech may be given by
    /// cutename and a value by its one-character alias.
    pub fn matches(&self, a: &LexicalAnalysis, tagset: Option<&Tagset>) -> bool {
        self.constraints_hold(a, tagset) != self.negated
    }

    fn constraints_hold(&self, a: &LexicalAnalysis, tagset: Option<&Tagset>) -> bool {
        if let Some(p) = self.pos.as_deref() {
            let same = p == a.pos || tagset.and_then(|ts| ts.pos_by_any(p)).is_some_and(|d| d.name == a.pos);
            if !same {
                return false;
            }
        }
        if self.form.as_deref().is_some_and(|f| f != a.form) {
            return false;
        }
        if self.lemma.as_deref().is_some_and(|l| l != a.lemma) {
            return false;
        }
        self.features.iter().all(|(name, want)| {
            let have = a
                .feature(name)
                .or_else(|| tagset.and_then(|ts| ts.default_for(&a.pos, name)));
            let Some(have) = have else { return false };
            have == want || tagset.is_some_and(|ts| resolves_alias(ts, &a.pos, name, want, have))
        })
    }

    /// Tests the mask against a token that has no analysis (an unknown
    /// word or an inserted output mark): only the universal mask and
    /// form-only masks apply.
    pub fn matches_surface(&self, surface: &str) -> bool {
        self.is_universal() || (!self.negated && self.is_form_only() && self.form.as_deref() == Some(surface))
    }

    /// Reports constraints that name symbols the tagset does not declare.
    pub fn undeclared_symbols(&self, tagset: &Tagset) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(p) = &self.pos {
            if tagset.pos(p).is_none() {
                out.push(format!("part of speech `{p}`"));
            }
        }
        for (name, value) in &self.features {
            match tagset.attr_types().iter().find(|t| t.name == *name).or_else(|| {
                tagset
                    .pos_defs()
                    .iter()
                    .find_map(|p| p.attribute(name))
                    .and_then(|d| tagset.attr_type(&d.type_ref))
            }) {
                None => out.push(format!("attribute `{name}`")),
                Some(t) if t.value(value).is_none() => {
                    out.push(format!("value `{value}` of `{name}`"))
                }
                Some(_) => {}
            }
        }
        out
    }
}

/// Splits on unescaped `sep`, keeping escapes in the pieces.
fn split_unescaped(s: &str, sep: char) -> Result<Vec<String>, ()> {
    let mut pieces = vec![String::new()];
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        let cur = pieces.last_mut().unwrap();
        if c == '\\' {
            cur.push(c);
            cur.push(chars.next().ok_or(())?);
        } else if c == sep {
            pieces.push(String::new());
        } else {
            cur.push(c);
        }
    }
    Ok(pieces)
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

/// Escapes a literal for use inside a mask expression.
pub(crate) fn escape_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        if matches!(c, '\\' | ';' | '=' | '|' | '!' | '*' | '<' | '>' | '+' | '/' | ':' | '"') {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

/// Whether `want` is the single-character alias of value `have`.
fn resolves_alias(ts: &Tagset, pos: &str, attr: &str, want: &str, have: &str) -> bool {
    let mut chars = want.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => ts
            .attr_type_for(pos, attr)
            .and_then(|t| t.by_alias(c))
            .is_some_and(|v| v.name == have),
        _ => false,
    }
}

impl FromStr for LexicalMask {
    type Err = MaskParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim();
        if text.is_empty() {
            return Err(MaskParseError::Empty);
        }
        if text == "*" {
            return Ok(Self::universal());
        }
        let (negated, body) = match text.strip_prefix('!') {
            Some(rest) => (true, rest.trim_start()),
            None => (false, text),
        };
        if body == "*" {
            // Matches nothing.
            return Ok(LexicalMask {
                negated: true,
                ..Self::default()
            });
        }
        let pieces =
            split_unescaped(body, ';').map_err(|_| MaskParseError::DanglingEscape(s.to_string()))?;
        let mut mask = LexicalMask {
            negated,
            ..Self::default()
        };
        for piece in pieces {
            let piece = piece.trim();
            if piece.is_empty() {
                return Err(MaskParseError::EmptyConstraint(s.to_string()));
            }
            let kv = split_unescaped(piece, '=')
                .map_err(|_| MaskParseError::DanglingEscape(s.to_string()))?;
            let (key, value) = match kv.as_slice() {
                [v] => ("pos".to_string(), unescape(v)),
                [k, v] => (unescape(k.trim()), unescape(v)),
                _ => return Err(MaskParseError::EmptyConstraint(s.to_string())),
            };
            if key.is_empty() || value.is_empty() {
                return Err(MaskParseError::EmptyConstraint(s.to_string()));
            }
            let repeated = || MaskParseError::Repeated {
                key: key.clone(),
                mask: s.to_string(),
            };
            let slot = match key.as_str() {
                "pos" => &mut mask.pos,
                "form" => &mut mask.form,
                "lemma" => &mut mask.lemma,
                _ => {
                    if mask.features.iter().any(|(n, _)| *n == key) {
                        return Err(repeated());
                    }
                    mask.features.push((key.clone(), value));
                    continue;
                }
            };
            if slot.is_some() {
                return Err(repeated());
            }
            *slot = Some(value);
        }
        Ok(mask)
    }
}

impl fmt::Display for LexicalMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_universal() {
            return f.write_str("*");
        }
        if self.negated {
            f.write_str("!")?;
        }
        let mut parts = Vec::new();
        if let Some(p) = &self.pos {
            parts.push(format!("pos={}", escape_literal(p)));
        }
        if let Some(v) = &self.form {
            parts.push(format!("form={}", escape_literal(v)));
        }
        if let Some(v) = &self.lemma {
            parts.push(format!("lemma={}", escape_literal(v)));
        }
        for (n, v) in &self.features {
            parts.push(format!("{}={}", escape_literal(n), escape_literal(v)));
        }
        if parts.is_empty() {
            return f.write_str("*");
        }
        f.write_str(&parts.join(";"))
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn proces_verbaux() -> LexicalAnalysis {
        LexicalAnalysis::new("procès-verbaux", "procès-verbal", "noun")
            .with("proper", "false")
            .with("gender", "m")
            .with("number", "p")
    }

    #[test]
    fn pos_mask_matches_noun() {
        assert!(LexicalMask::pos("noun").matches(&proces_verbaux(), None));
    }

    #[test]
    fn universal_matches_anything() {
        assert!(LexicalMask::universal().matches(&proces_verbaux(), None));
        assert!(LexicalMask::universal().matches(&LexicalAnalysis::new("", "", "x"), None));
    }

    #[test]
    fn feature_conjunction_fails_on_number() {
        let m = LexicalMask::pos("noun").with_feature("number", "s");
        assert!(!m.matches(&proces_verbaux(), None));
        assert!(m.clone().negate().matches(&proces_verbaux(), None));
    }

    #[test]
    fn literals_are_exact() {
        assert!(!LexicalMask::form("proces-verbaux").matches(&proces_verbaux(), None));
        assert!(!LexicalMask::lemma("Procès-verbal").matches(&proces_verbaux(), None));
        assert!(LexicalMask::lemma("procès-verbal").matches(&proces_verbaux(), None));
    }

    #[test]
    fn defaults_fill_absent_features() {
        let ts = Tagset::parse(
            "<tagset><attrtype name='antepos' type='bool'/>
             <pos name='adj'><attribute name='antepos' default='false'/></pos></tagset>",
        )
        .unwrap();
        let a = LexicalAnalysis::new("grand", "grand", "adj");
        let m = LexicalMask::pos("adj").with_feature("antepos", "false");
        assert!(m.matches(&a, Some(&ts)));
        assert!(!m.matches(&a, None));
        let explicit = a.clone().with("antepos", "true");
        assert!(!m.matches(&explicit, Some(&ts)));
    }

    #[test]
    fn surface_matching_for_unknown_tokens() {
        assert!(LexicalMask::universal().matches_surface("xyz"));
        assert!(LexicalMask::form("xyz").matches_surface("xyz"));
        assert!(!LexicalMask::form("xyz").negate().matches_surface("abc"));
        assert!(!LexicalMask::pos("noun").matches_surface("xyz"));
    }

    #[test]
    fn parses_textual_syntax() {
        let m: LexicalMask = "noun;number=p".parse().unwrap();
        assert_eq!(m, LexicalMask::pos("noun").with_feature("number", "p"));
        let m: LexicalMask = "!form=a\\;b".parse().unwrap();
        assert_eq!(m, LexicalMask::form("a;b").negate());
        assert_eq!("*".parse::<LexicalMask>().unwrap(), LexicalMask::universal());
        assert!("".parse::<LexicalMask>().is_err());
        assert!("pos=a;pos=b".parse::<LexicalMask>().is_err());
        assert!("a;;b".parse::<LexicalMask>().is_err());
        let none: LexicalMask = "!*".parse().unwrap();
        assert!(!none.matches(&proces_verbaux(), None));
        assert_eq!(none.to_string(), "!*");
        assert!("form=x\\".parse::<LexicalMask>().is_err());
    }

    #[test]
    fn reports_undeclared_symbols() {
        let ts = Tagset::parse(
            "<tagset><attrtype name='number'><value name='p'/></attrtype>
             <pos name='noun'><attribute name='number'/></pos></tagset>",
        )
        .unwrap();
        assert!(LexicalMask::pos("noun").with_feature("number", "p").undeclared_symbols(&ts).is_empty());
        assert_eq!(
            LexicalMask::pos("verb").with_feature("number", "s").undeclared_symbols(&ts).len(),
            2
        );
    }

    fn literal() -> impl Strategy<Value = String> {
        "[a-zé;=|!*\\\\<>+/: ]{1,6}".prop_filter("not blank", |s| !s.trim().is_empty() && s.trim() == s)
    }

    fn arb_mask() -> impl Strategy<Value = LexicalMask> {
        (
            proptest::option::of(literal()),
            proptest::option::of(literal()),
            proptest::option::of(literal()),
            proptest::collection::btree_map("[a-z]{1,4}", literal(), 0..3),
            any::<bool>(),
        )
            .prop_map(|(pos, form, lemma, feats, negated)| LexicalMask {
                pos,
                form,
                lemma,
                features: feats
                    .into_iter()
                    .filter(|(k, _)| !matches!(k.as_str(), "pos" | "form" | "lemma"))
                    .collect(),
                negated,
            })
    }

    fn arb_analysis() -> impl Strategy<Value = LexicalAnalysis> {
        (
            "[ab]",
            "[ab]",
            "[nv]",
            proptest::collection::btree_map("[xy]", "[pq]", 0..2),
        )
            .prop_map(|(form, lemma, pos, feats)| LexicalAnalysis {
                form,
                lemma,
                pos,
                features: feats.into_iter().map(|(n, v)| super::super::Feature::new(n, v)).collect(),
            })
    }

    fn small_mask() -> impl Strategy<Value = LexicalMask> {
        (
            proptest::option::of("[nv]"),
            proptest::option::of("[ab]"),
            proptest::collection::btree_map("[xy]", "[pq]", 0..2),
            any::<bool>(),
        )
            .prop_map(|(pos, form, feats, negated)| LexicalMask {
                pos,
                form,
                lemma: None,
                features: feats.into_iter().collect(),
                negated,
            })
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(m in arb_mask()) {
            let text = m.to_string();
            prop_assert_eq!(text.parse::<LexicalMask>().unwrap(), m);
        }

        #[test]
        fn negation_inverts(m in small_mask(), a in arb_analysis()) {
            let neg = m.clone().negate();
            prop_assert_eq!(neg.matches(&a, None), !m.matches(&a, None));
        }

        #[test]
        fn own_mask_matches(a in arb_analysis()) {
            prop_assert!(LexicalMask::from_analysis(&a).matches(&a, None));
        }
    }
}
