//! XML interchange format of tagged texts.
//!
//! ```xml
//! <fsa tagset="0">
//! <stats words="8" unknown="6" unknown_capitalized="1"/>
//! <sentence id="s0" final="2">
//!  <tokens>
//!   <token type="word" id="t1" alph="latin" case="capit" span="0-2">La</token>
//!  </tokens>
//!  <q id="0" pos="0" tok="0">
//!   <tr to="1">
//!    <lex>
//!     <form>La</form>
//!     <lem>le</lem>
//!     <pos v="det"/>
//!     <f n="gender" v="feminine"/>
//!    </lex>
//!   </tr>
//!   <tr to="1"><unknown>La</unknown></tr>
//!   <tr to="1"><mark>ADV</mark></tr>
//!  </q>
//! </sentence>
//! </fsa>
//! ```
//!
//! `pos` is the byte offset of the state's boundary in the source text and
//! `tok` the number of sentence tokens before it.

use std::fmt::Write as _;

use roxmltree::Node;

use crate::error::FormatError;
use crate::model::{Feature, LexicalAnalysis};
use crate::segment::document::{read_token, write_token};
use crate::xml;

use super::{Label, SentenceAutomaton, State, TagError, TaggedText, Transition, UnknownStats};

pub fn write_fsa(tagged: &TaggedText) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(out, "<fsa tagset=\"{:016x}\">", tagged.tagset_hash);
    let st = tagged.stats;
    let _ = writeln!(
        out,
        "<stats words=\"{}\" unknown=\"{}\" unknown_capitalized=\"{}\"/>",
        st.total, st.unknown, st.unknown_capitalized
    );
    for s in &tagged.sentences {
        let _ = writeln!(
            out,
            "<sentence id=\"{}\" final=\"{}\">",
            xml::escape_attr(&s.id),
            s.final_state
        );
        out.push_str(" <tokens>\n");
        for t in tagged.sentence_tokens(s) {
            out.push_str("  ");
            write_token(&mut out, t, true);
            out.push('\n');
        }
        out.push_str(" </tokens>\n");
        let outgoing = s.outgoing();
        for (id, q) in s.states.iter().enumerate() {
            let _ = writeln!(out, "  <q id=\"{id}\" pos=\"{}\" tok=\"{}\">", q.byte_pos, q.token_pos);
            for &ti in &outgoing[id] {
                write_transition(&mut out, &s.transitions[ti]);
            }
            out.push_str("  </q>\n");
        }
        out.push_str("</sentence>\n");
    }
    out.push_str("</fsa>\n");
    out
}

fn write_transition(out: &mut String, t: &Transition) {
    match &t.label {
        Label::Analysis(a) => {
            let _ = writeln!(out, "   <tr to=\"{}\">", t.to);
            out.push_str("    <lex>\n");
            let _ = writeln!(out, "     <form>{}</form>", xml::escape(&a.form));
            let _ = writeln!(out, "     <lem>{}</lem>", xml::escape(&a.lemma));
            let _ = writeln!(out, "     <pos v=\"{}\"/>", xml::escape_attr(&a.pos));
            for f in &a.features {
                let _ = writeln!(
                    out,
                    "     <f n=\"{}\" v=\"{}\"/>",
                    xml::escape_attr(&f.name),
                    xml::escape_attr(&f.value)
                );
            }
            out.push_str("    </lex>\n   </tr>\n");
        }
        Label::Unknown(s) => {
            let _ = writeln!(out, "   <tr to=\"{}\"><unknown>{}</unknown></tr>", t.to, xml::escape(s));
        }
        Label::Mark(s) => {
            let _ = writeln!(out, "   <tr to=\"{}\"><mark>{}</mark></tr>", t.to, xml::escape(s));
        }
    }
}

fn read_lex(node: Node<'_, '_>) -> Result<LexicalAnalysis, FormatError> {
    let text = |name: &str| {
        xml::child(node, name)
            .map(xml::text_of)
            .ok_or_else(|| xml::malformed(node, format!("<lex> without <{name}>")))
    };
    let pos = xml::child(node, "pos").ok_or_else(|| xml::malformed(node, "<lex> without <pos>"))?;
    let mut a = LexicalAnalysis::new(text("form")?, text("lem")?, xml::req_attr(pos, "v")?);
    for f in xml::elements(node) {
        match f.tag_name().name() {
            "form" | "lem" | "pos" => {}
            "f" => a
                .features
                .push(Feature::new(xml::req_attr(f, "n")?, xml::req_attr(f, "v")?)),
            other => return Err(xml::malformed(f, format!("unexpected <{other}> in <lex>"))),
        }
    }
    Ok(a)
}

fn read_sentence(node: Node<'_, '_>, tagged: &mut TaggedText) -> Result<SentenceAutomaton, TagError> {
    let id = xml::req_attr(node, "id")?.to_string();
    let final_state: usize = xml::num_attr(node, "final")?;
    let first_token = tagged.tokens.len();
    let mut states = Vec::new();
    let mut pending = Vec::new();
    for child in xml::elements(node) {
        match child.tag_name().name() {
            "tokens" => {
                for t in xml::elements(child) {
                    tagged.tokens.push(read_token(t, 0)?);
                }
            }
            "q" => {
                let q: usize = xml::num_attr(child, "id")?;
                if q != states.len() {
                    return Err(xml::malformed(child, format!("expected state {}, found {q}", states.len())).into());
                }
                states.push(State {
                    byte_pos: xml::num_attr(child, "pos")?,
                    token_pos: xml::num_attr(child, "tok")?,
                });
                for tr in xml::elements(child) {
                    if !tr.has_tag_name("tr") {
                        return Err(xml::malformed(tr, "expected <tr>").into());
                    }
                    let to: usize = xml::num_attr(tr, "to")?;
                    let body = tr.first_element_child().ok_or_else(|| xml::malformed(tr, "empty <tr>"))?;
                    let label = match body.tag_name().name() {
                        "lex" => Label::Analysis(read_lex(body)?),
                        "unknown" => Label::Unknown(xml::text_of(body)),
                        "mark" => Label::Mark(xml::text_of(body)),
                        other => return Err(xml::malformed(body, format!("unexpected <{other}>")).into()),
                    };
                    pending.push((tr, Transition { from: q, to, label }));
                }
            }
            other => return Err(xml::malformed(child, format!("unexpected <{other}>")).into()),
        }
    }
    let mut transitions = Vec::with_capacity(pending.len());
    for (tr, t) in pending {
        if t.to >= states.len() {
            return Err(xml::malformed(tr, format!("transition to missing state {}", t.to)).into());
        }
        transitions.push(t);
    }
    if final_state >= states.len() {
        return Err(xml::malformed(node, format!("final state {final_state} is missing")).into());
    }
    Ok(SentenceAutomaton {
        id,
        first_token,
        token_count: tagged.tokens.len() - first_token,
        states,
        transitions,
        final_state,
    })
}

pub fn read_fsa(document: &str) -> Result<TaggedText, TagError> {
    let doc = xml::parse(document)?;
    let root = xml::expect_root(&doc, "fsa")?;
    let hash = root.attribute("tagset").unwrap_or("0");
    let tagset_hash =
        u64::from_str_radix(hash, 16).map_err(|_| xml::malformed(root, format!("bad tagset hash `{hash}`")))?;
    let mut tagged = TaggedText {
        tagset_hash,
        ..Default::default()
    };
    let mut stats = None;
    for node in xml::elements(root) {
        match node.tag_name().name() {
            "stats" => {
                stats = Some(UnknownStats {
                    total: xml::num_attr(node, "words")?,
                    unknown: xml::num_attr(node, "unknown")?,
                    unknown_capitalized: xml::num_attr(node, "unknown_capitalized")?,
                })
            }
            "sentence" => {
                let s = read_sentence(node, &mut tagged)?;
                tagged.sentences.push(s);
            }
            other => return Err(xml::malformed(node, format!("unexpected <{other}>")).into()),
        }
    }
    match stats {
        Some(s) => tagged.stats = s,
        None => tagged.recount(),
    }
    Ok(tagged)
}
