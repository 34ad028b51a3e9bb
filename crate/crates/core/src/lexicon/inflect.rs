//! Paradigm-based inflection: a paradigm removes its stem trigger from
//! the end of a lemma and appends one suffix per inflectional case.
//!
//! ```xml
//! <paradigms>
//!   <Paradigm code="4">
//!     <StemTrigger>y</StemTrigger>
//!     <Inflection caseId="inf"><Form>y</Form></Inflection>
//!     <Inflection caseId="prs_3s"><Form>ies</Form></Inflection>
//!   </Paradigm>
//!   <CaseMap>
//!     <Case id="prs_3s" code="P3s"/>
//!   </CaseMap>
//! </paradigms>
//! ```
//!
//! The case map turns case ids into DELA codes; an unmapped id is used as
//! the code itself. A document may also consist of a single `<Paradigm>`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::xml;

use super::{LexiconEntry, LexiconError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InflectionParadigm {
    pub code: String,
    pub stem_trigger: String,
    /// (case id, suffix) in declaration order.
    pub inflections: Vec<(String, String)>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParadigmSet {
    pub paradigms: BTreeMap<String, InflectionParadigm>,
    pub case_map: BTreeMap<String, String>,
}

impl ParadigmSet {
    pub fn code_for(&self, case_id: &str) -> String {
        self.case_map.get(case_id).cloned().unwrap_or_else(|| case_id.to_string())
    }
}

/// A lemma to inflect with the paradigm named by `paradigm`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaEntry {
    pub lemma: String,
    pub pos: String,
    pub traits: Vec<String>,
    pub paradigm: String,
}

impl LemmaEntry {
    /// Reads lemma lines, written in DELA syntax with the paradigm code in
    /// the code slot: `carry,.V:4`.
    pub fn parse_lines(text: &str) -> Result<Vec<LemmaEntry>, LexiconError> {
        let mut out = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let e = super::parse_dela(raw, true)
                .map_err(|err| match err {
                    LexiconError::Dela { message, .. } => LexiconError::Dela { line, message },
                    other => other,
                })?
                .entries
                .remove(0);
            let [paradigm] = <[String; 1]>::try_from(e.codes).map_err(|_| LexiconError::ParadigmCode { line })?;
            out.push(LemmaEntry {
                lemma: e.lemma,
                pos: e.pos,
                traits: e.traits,
                paradigm,
            });
        }
        Ok(out)
    }
}

fn parse_paradigm(node: roxmltree::Node<'_, '_>) -> Result<InflectionParadigm, LexiconError> {
    let code = xml::req_attr(node, "code")?.to_string();
    let stem_trigger = xml::child(node, "StemTrigger").map(xml::text_of).unwrap_or_default();
    let mut inflections = Vec::new();
    for infl in xml::elements(node).filter(|n| n.has_tag_name("Inflection")) {
        let case = xml::req_attr(infl, "caseId")?.to_string();
        let form = xml::child(infl, "Form").ok_or_else(|| xml::malformed(infl, "missing <Form>"))?;
        inflections.push((case, xml::text_of(form)));
    }
    Ok(InflectionParadigm {
        code,
        stem_trigger,
        inflections,
    })
}

pub fn read_paradigms(document: &str) -> Result<ParadigmSet, LexiconError> {
    let doc = xml::parse(document)?;
    let root = doc.root_element();
    let mut set = ParadigmSet::default();
    let mut add = |p: InflectionParadigm, node| {
        if set.paradigms.contains_key(&p.code) {
            return Err(LexiconError::Format(xml::malformed(node, format!("duplicate paradigm `{}`", p.code))));
        }
        set.paradigms.insert(p.code.clone(), p);
        Ok(())
    };
    if root.has_tag_name("Paradigm") {
        add(parse_paradigm(root)?, root)?;
        return Ok(set);
    }
    if !root.has_tag_name("paradigms") {
        return Err(xml::malformed(root, "expected <paradigms> or <Paradigm>").into());
    }
    let mut case_map = BTreeMap::new();
    for node in xml::elements(root) {
        match node.tag_name().name() {
            "Paradigm" => add(parse_paradigm(node)?, node)?,
            "CaseMap" => {
                for case in xml::elements(node) {
                    case_map.insert(
                        xml::req_attr(case, "id")?.to_string(),
                        xml::req_attr(case, "code")?.to_string(),
                    );
                }
            }
            other => return Err(xml::malformed(node, format!("unexpected <{other}>")).into()),
        }
    }
    set.case_map = case_map;
    Ok(set)
}

pub fn write_paradigms(set: &ParadigmSet) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<paradigms>\n");
    for p in set.paradigms.values() {
        let _ = writeln!(out, "  <Paradigm code=\"{}\">", xml::escape_attr(&p.code));
        let _ = writeln!(out, "    <StemTrigger>{}</StemTrigger>", xml::escape(&p.stem_trigger));
        for (case, suffix) in &p.inflections {
            let _ = writeln!(
                out,
                "    <Inflection caseId=\"{}\"><Form>{}</Form></Inflection>",
                xml::escape_attr(case),
                xml::escape(suffix)
            );
        }
        out.push_str("  </Paradigm>\n");
    }
    if !set.case_map.is_empty() {
        out.push_str("  <CaseMap>\n");
        for (id, code) in &set.case_map {
            let _ = writeln!(
                out,
                "    <Case id=\"{}\" code=\"{}\"/>",
                xml::escape_attr(id),
                xml::escape_attr(code)
            );
        }
        out.push_str("  </CaseMap>\n");
    }
    out.push_str("</paradigms>\n");
    out
}

/// Inflects every lemma. The cases of one lemma that yield the same form
/// become one entry carrying each case's code, in paradigm order.
pub fn inflect(lemmas: &[LemmaEntry], paradigms: &ParadigmSet) -> Result<Vec<LexiconEntry>, LexiconError> {
    let mut out = Vec::new();
    for l in lemmas {
        let p = paradigms
            .paradigms
            .get(&l.paradigm)
            .ok_or_else(|| LexiconError::UnknownParadigm(l.paradigm.clone()))?;
        let stem = l.lemma.strip_suffix(p.stem_trigger.as_str()).ok_or_else(|| LexiconError::StemTrigger {
            lemma: l.lemma.clone(),
            trigger: p.stem_trigger.clone(),
            paradigm: p.code.clone(),
        })?;
        let first = out.len();
        for (case, suffix) in &p.inflections {
            let form = format!("{stem}{suffix}");
            let code = paradigms.code_for(case);
            let existing = out[first..].iter_mut().find(|e: &&mut LexiconEntry| e.form == form);
            match existing {
                Some(e) => {
                    if !e.codes.contains(&code) {
                        e.codes.push(code);
                    }
                }
                None => out.push(LexiconEntry {
                    form,
                    lemma: l.lemma.clone(),
                    pos: l.pos.clone(),
                    traits: l.traits.clone(),
                    codes: vec![code],
                }),
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const PARADIGM_4: &str = r#"<Paradigm code="4">
  <StemTrigger>y</StemTrigger>
  <Inflection caseId="inf"><Form>y</Form></Inflection>
  <Inflection caseId="prs_1s"><Form>y</Form></Inflection>
  <Inflection caseId="prs_2s"><Form>y</Form></Inflection>
  <Inflection caseId="prs_3s"><Form>ies</Form></Inflection>
  <Inflection caseId="prs_p"><Form>y</Form></Inflection>
  <Inflection caseId="prt"><Form>ied</Form></Inflection>
  <Inflection caseId="imp"><Form>y</Form></Inflection>
  <Inflection caseId="ppt"><Form>ied</Form></Inflection>
  <Inflection caseId="ppr"><Form>ying</Form></Inflection>
</Paradigm>"#;

    fn forms(lemma: &str) -> Vec<(String, Vec<String>)> {
        let set = read_paradigms(PARADIGM_4).unwrap();
        let lemmas = LemmaEntry::parse_lines(&format!("{lemma},.V:4")).unwrap();
        inflect(&lemmas, &set)
            .unwrap()
            .into_iter()
            .map(|e| (e.form, e.codes))
            .collect()
    }

    fn expect(pairs: &[(&str, &[&str])]) -> Vec<(String, Vec<String>)> {
        pairs
            .iter()
            .map(|(f, c)| (f.to_string(), c.iter().map(|s| s.to_string()).collect()))
            .collect()
    }

    #[test]
    fn carry_and_deny() {
        assert_eq!(
            forms("carry"),
            expect(&[
                ("carry", &["inf", "prs_1s", "prs_2s", "prs_p", "imp"]),
                ("carries", &["prs_3s"]),
                ("carried", &["prt", "ppt"]),
                ("carrying", &["ppr"]),
            ])
        );
        assert_eq!(
            forms("deny"),
            expect(&[
                ("deny", &["inf", "prs_1s", "prs_2s", "prs_p", "imp"]),
                ("denies", &["prs_3s"]),
                ("denied", &["prt", "ppt"]),
                ("denying", &["ppr"]),
            ])
        );
    }

    #[test]
    fn case_map_and_errors() {
        let doc = format!(
            "<paradigms>{}<CaseMap><Case id='prs_3s' code='P3s'/></CaseMap></paradigms>",
            PARADIGM_4
        );
        let set = read_paradigms(&doc).unwrap();
        let l = LemmaEntry::parse_lines("carry,.V:4").unwrap();
        let out = inflect(&l, &set).unwrap();
        assert_eq!(out[1].codes, ["P3s"]);
        assert_eq!(read_paradigms(&write_paradigms(&set)).unwrap(), set);

        let bad = LemmaEntry::parse_lines("walk,.V:4").unwrap();
        assert!(matches!(inflect(&bad, &set), Err(LexiconError::StemTrigger { .. })));
        let unknown = LemmaEntry::parse_lines("walk,.V:9").unwrap();
        assert!(matches!(inflect(&unknown, &set), Err(LexiconError::UnknownParadigm(_))));
        assert!(matches!(
            LemmaEntry::parse_lines("a,.V\nb,.V:1:2"),
            Err(LexiconError::ParadigmCode { line: 1 })
        ));
    }

    #[test]
    fn empty_trigger() {
        let doc = r#"<Paradigm code="s"><StemTrigger/><Inflection caseId="sg"><Form/></Inflection><Inflection caseId="pl"><Form>s</Form></Inflection></Paradigm>"#;
        let set = read_paradigms(doc).unwrap();
        let out = inflect(&LemmaEntry::parse_lines("chat,.N:s").unwrap(), &set).unwrap();
        let f: Vec<_> = out.iter().map(|e| e.form.as_str()).collect();
        assert_eq!(f, ["chat", "chats"]);
    }
}
