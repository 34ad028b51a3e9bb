//! Dictionary XML: one `<entry>` per (lemma, part of speech, traits) with
//! the semantic features at entry level and one `<inflected>` block per
//! inflectional code.
//!
//! ```xml
//! <dictionary>
//! <entry>
//!   <lemma>appelé du contingent</lemma>
//!   <pos name="noun"/>
//!   <feat name="subcat" value="human"/>
//!   <inflected>
//!     <form>appelés du contingent</form>
//!     <feat name="gender" value="masculine"/>
//!     <feat name="number" value="plural"/>
//!   </inflected>
//! </entry>
//! </dictionary>
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::model::{Feature, Tagset};
use crate::xml;

use super::expand::AliasResolver;
use super::{LexiconEntry, LexiconError};

fn write_feat(out: &mut String, indent: &str, f: &Feature) {
    let _ = writeln!(
        out,
        "{indent}<feat name=\"{}\" value=\"{}\"/>",
        xml::escape_attr(&f.name),
        xml::escape_attr(&f.value)
    );
}

pub fn dela_to_xml(entries: &[LexiconEntry], tagset: Option<&Tagset>) -> Result<String, LexiconError> {
    let r = AliasResolver::new(tagset);
    let mut groups: Vec<(&LexiconEntry, Vec<&LexiconEntry>)> = Vec::new();
    let mut index: HashMap<(&str, &str, &[String]), usize> = HashMap::new();
    for e in entries {
        let key = (e.lemma.as_str(), e.pos.as_str(), e.traits.as_slice());
        match index.get(&key) {
            Some(&i) => groups[i].1.push(e),
            None => {
                index.insert(key, groups.len());
                groups.push((e, vec![e]));
            }
        }
    }

    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<dictionary>\n");
    for (head, members) in groups {
        out.push_str("<entry>\n");
        let _ = writeln!(out, "  <lemma>{}</lemma>", xml::escape(&head.lemma));
        let _ = writeln!(out, "  <pos name=\"{}\"/>", xml::escape_attr(&r.pos_name(&head.pos)?));
        for t in &head.traits {
            write_feat(&mut out, "  ", &r.trait_feature(&head.pos, t)?);
        }
        for e in members {
            let codes: Vec<Option<&str>> = if e.codes.is_empty() {
                vec![None]
            } else {
                e.codes.iter().map(|c| Some(c.as_str())).collect()
            };
            for code in codes {
                out.push_str("  <inflected>\n");
                let _ = writeln!(out, "    <form>{}</form>", xml::escape(&e.form));
                if let Some(code) = code {
                    for f in r.code_features(&e.pos, code)? {
                        write_feat(&mut out, "    ", &f);
                    }
                }
                out.push_str("  </inflected>\n");
            }
        }
        out.push_str("</entry>\n");
    }
    out.push_str("</dictionary>\n");
    Ok(out)
}

fn read_feat(node: roxmltree::Node<'_, '_>) -> Result<Feature, LexiconError> {
    Ok(Feature::new(xml::req_attr(node, "name")?, xml::req_attr(node, "value")?))
}

/// Converts dictionary XML back to DELA lines. Consecutive `<inflected>`
/// blocks of the same form become one line with several codes.
pub fn xml_to_dela(document: &str, tagset: Option<&Tagset>) -> Result<Vec<LexiconEntry>, LexiconError> {
    let r = AliasResolver::new(tagset);
    let doc = xml::parse(document)?;
    let root = xml::expect_root(&doc, "dictionary")?;
    let mut out = Vec::new();
    for entry in xml::elements(root) {
        if !entry.has_tag_name("entry") {
            return Err(xml::malformed(entry, "expected <entry>").into());
        }
        let lemma = xml::child(entry, "lemma").ok_or_else(|| xml::malformed(entry, "missing <lemma>"))?;
        let lemma = xml::text_of(lemma);
        let pos_node = xml::child(entry, "pos").ok_or_else(|| xml::malformed(entry, "missing <pos>"))?;
        let pos = r.dela_pos(xml::req_attr(pos_node, "name")?)?;
        let mut traits = Vec::new();
        for f in xml::elements(entry).filter(|n| n.has_tag_name("feat")) {
            traits.push(r.feature_trait(&pos, &read_feat(f)?)?);
        }
        let first = out.len();
        for infl in xml::elements(entry).filter(|n| n.has_tag_name("inflected")) {
            let form = xml::child(infl, "form").ok_or_else(|| xml::malformed(infl, "missing <form>"))?;
            let form = xml::text_of(form);
            let feats = xml::elements(infl)
                .filter(|n| n.has_tag_name("feat"))
                .map(read_feat)
                .collect::<Result<Vec<_>, _>>()?;
            let code = r.features_code(&pos, &feats)?;
            let same_form = out[first..]
                .last()
                .is_some_and(|e: &LexiconEntry| e.form == form && !e.codes.is_empty() && !code.is_empty());
            if same_form {
                out.last_mut().expect("checked").codes.push(code);
                continue;
            }
            out.push(LexiconEntry {
                form,
                lemma: lemma.clone(),
                pos: pos.clone(),
                traits: traits.clone(),
                codes: if code.is_empty() { Vec::new() } else { vec![code] },
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::fixtures::FR_TAGSET;
    use crate::lexicon::{parse_dela, write_dela};

    const LINE: &str = "appelés du contingent,appelé du contingent.N+hum:mp\n";

    #[test]
    fn compound_entry_structure() {
        let ts = Tagset::parse(FR_TAGSET).unwrap();
        let entries = parse_dela(LINE, true).unwrap().entries;
        let doc = dela_to_xml(&entries, Some(&ts)).unwrap();
        let parsed = roxmltree::Document::parse(&doc).unwrap();
        let entry = parsed.root_element().first_element_child().unwrap();
        let names: Vec<_> = xml::elements(entry).map(|n| n.tag_name().name()).collect();
        assert_eq!(names, ["lemma", "pos", "feat", "inflected"]);
        assert_eq!(xml::text_of(xml::child(entry, "lemma").unwrap()), "appelé du contingent");
        assert_eq!(xml::child(entry, "pos").unwrap().attribute("name"), Some("noun"));
        let feat = xml::child(entry, "feat").unwrap();
        assert_eq!(feat.attribute("name"), Some("subcat"));
        assert_eq!(feat.attribute("value"), Some("human"));
        let infl = xml::child(entry, "inflected").unwrap();
        assert_eq!(xml::text_of(xml::child(infl, "form").unwrap()), "appelés du contingent");
        let feats: Vec<_> = xml::elements(infl)
            .filter(|n| n.has_tag_name("feat"))
            .map(|n| (n.attribute("name").unwrap(), n.attribute("value").unwrap()))
            .collect();
        assert_eq!(feats, [("gender", "masculine"), ("number", "plural")]);

        let back = xml_to_dela(&doc, Some(&ts)).unwrap();
        assert_eq!(write_dela(&back), LINE);
    }

    #[test]
    fn groups_forms_of_one_lemma() {
        let ts = Tagset::parse(FR_TAGSET).unwrap();
        let text = "chat,.N+conc:ms\nchats,chat.N+conc:mp\nchatte,chat.N+conc:fs\nvite,.ADV\n";
        let entries = parse_dela(text, true).unwrap().entries;
        let doc = dela_to_xml(&entries, Some(&ts)).unwrap();
        assert_eq!(doc.matches("<entry>").count(), 2);
        let back = xml_to_dela(&doc, Some(&ts)).unwrap();
        assert_eq!(back, entries);
    }

    #[test]
    fn opaque_symbols_without_tagset() {
        let entries = parse_dela("mange,manger.V+t:P1s:P3s\n", true).unwrap().entries;
        let doc = dela_to_xml(&entries, None).unwrap();
        assert_eq!(xml_to_dela(&doc, None).unwrap(), entries);
    }

    #[test]
    fn malformed_documents() {
        assert!(matches!(xml_to_dela("<dictionary><entry>", None), Err(LexiconError::Format(_))));
        assert!(xml_to_dela("<dictionary><entry><pos name='N'/></entry></dictionary>", None).is_err());
        assert!(xml_to_dela("<dictionary/>", None).unwrap().is_empty());
    }

    fn arb_entry() -> impl Strategy<Value = LexiconEntry> {
        let codes = proptest::collection::vec("[mf][sp]", 0..3);
        (
            "[a-zé]{1,6}( [a-z]{1,4})?",
            "[a-z]{1,6}",
            proptest::sample::select(vec!["N", "A", "DET"]),
            codes,
        )
            .prop_map(|(form, lemma, pos, codes)| LexiconEntry {
                form,
                lemma,
                pos: pos.into(),
                traits: Vec::new(),
                codes,
            })
    }

    proptest! {
        #[test]
        fn round_trip_preserves_line_set(entries in proptest::collection::vec(arb_entry(), 0..12)) {
            let ts = Tagset::parse(FR_TAGSET).unwrap();
            let mut uniq = Vec::new();
            for e in entries {
                if !uniq.iter().any(|u: &LexiconEntry| u.form == e.form && u.lemma == e.lemma && u.pos == e.pos) {
                    uniq.push(e);
                }
            }
            let doc = dela_to_xml(&uniq, Some(&ts)).unwrap();
            let mut back = xml_to_dela(&doc, Some(&ts)).unwrap();
            let mut want = uniq.clone();
            back.sort();
            want.sort();
            prop_assert_eq!(back, want);
        }
    }
}
