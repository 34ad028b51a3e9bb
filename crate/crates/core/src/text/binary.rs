//! Compact binary form of tagged texts.
//!
//! Little-endian; counts and indices are LEB128 varints, strings are
//! length-prefixed UTF-8:
//!
//! ```text
//! magic "OLXTXT01" | version u16 | tagset hash u64
//! stats: words, unknown, unknown capitalised
//! tokens: count, then (id, surface, kind u8, alphabet or "", case u8, punct u8, start, end)*
//! sentences: count, then per sentence:
//!   id, first token, token count, final state
//!   states: count, then (token position, byte position)*
//!   transitions: count, then (from, to, tag u8, payload)*
//! ```
//!
//! Label tags: 0 analysis (form, lemma, pos, feature count, (name, value)*),
//! 1 unknown (surface), 2 mark (text).

use crate::binio::{ByteReader, ByteWriter};
use crate::error::FormatError;
use crate::model::{CaseClass, Feature, LexicalAnalysis, PunctRole, Token, TokenKind};

use super::{Label, SentenceAutomaton, State, TagError, TaggedText, Transition, UnknownStats};

const MAGIC: &[u8; 8] = b"OLXTXT01";
const VERSION: u16 = 1;

const KINDS: [TokenKind; 4] = [TokenKind::Word, TokenKind::Numeric, TokenKind::Punctuation, TokenKind::Symbol];
const CASES: [CaseClass; 5] = [
    CaseClass::Lower,
    CaseClass::Capitalized,
    CaseClass::Upper,
    CaseClass::Mixed,
    CaseClass::NotApplicable,
];
const PUNCTS: [PunctRole; 4] = [PunctRole::Opening, PunctRole::Closing, PunctRole::Neutral, PunctRole::NotApplicable];

fn code_of<T: PartialEq>(table: &[T], v: &T) -> u8 {
    table.iter().position(|x| x == v).expect("every variant is listed") as u8
}

fn from_code<T: Copy>(table: &[T], c: u8, what: &str) -> Result<T, FormatError> {
    table
        .get(c as usize)
        .copied()
        .ok_or_else(|| FormatError::Binary(format!("invalid {what} code {c}")))
}

pub fn write_binary(tagged: &TaggedText) -> Vec<u8> {
    let mut w = ByteWriter::new();
    w.bytes(MAGIC);
    w.u16(VERSION);
    w.u64(tagged.tagset_hash);
    for n in [tagged.stats.total, tagged.stats.unknown, tagged.stats.unknown_capitalized] {
        w.varint(n as u64);
    }
    w.varint(tagged.tokens.len() as u64);
    for t in &tagged.tokens {
        w.str(&t.id);
        w.str(&t.surface);
        w.u8(code_of(&KINDS, &t.kind));
        w.str(t.alphabet.as_deref().unwrap_or(""));
        w.u8(code_of(&CASES, &t.case_class));
        w.u8(code_of(&PUNCTS, &t.punct_role));
        w.varint(t.span.0 as u64);
        w.varint(t.span.1 as u64);
    }
    w.varint(tagged.sentences.len() as u64);
    for s in &tagged.sentences {
        w.str(&s.id);
        w.varint(s.first_token as u64);
        w.varint(s.token_count as u64);
        w.varint(s.final_state as u64);
        w.varint(s.states.len() as u64);
        for q in &s.states {
            w.varint(q.token_pos as u64);
            w.varint(q.byte_pos as u64);
        }
        w.varint(s.transitions.len() as u64);
        for t in &s.transitions {
            w.varint(t.from as u64);
            w.varint(t.to as u64);
            match &t.label {
                Label::Analysis(a) => {
                    w.u8(0);
                    w.str(&a.form);
                    w.str(&a.lemma);
                    w.str(&a.pos);
                    w.varint(a.features.len() as u64);
                    for f in &a.features {
                        w.str(&f.name);
                        w.str(&f.value);
                    }
                }
                Label::Unknown(s) => {
                    w.u8(1);
                    w.str(s);
                }
                Label::Mark(s) => {
                    w.u8(2);
                    w.str(s);
                }
            }
        }
    }
    w.into_inner()
}

pub fn read_binary(data: &[u8]) -> Result<TaggedText, TagError> {
    let mut r = ByteReader::new(data);
    if r.take(MAGIC.len())? != MAGIC {
        return Err(FormatError::BadMagic { expected: "OLXTXT01" }.into());
    }
    let version = r.u16()?;
    if version != VERSION {
        return Err(FormatError::UnsupportedVersion(version).into());
    }
    let tagset_hash = r.u64()?;
    let stats = UnknownStats {
        total: r.usize()?,
        unknown: r.usize()?,
        unknown_capitalized: r.usize()?,
    };
    let n = r.usize()?;
    let mut tokens = Vec::new();
    for _ in 0..n {
        let id = r.str()?;
        let surface = r.str()?;
        let kind = from_code(&KINDS, r.u8()?, "token type")?;
        let alphabet = Some(r.str()?).filter(|a| !a.is_empty());
        let case_class = from_code(&CASES, r.u8()?, "case")?;
        let punct_role = from_code(&PUNCTS, r.u8()?, "punctuation")?;
        let span = (r.usize()?, r.usize()?);
        tokens.push(Token {
            id,
            surface,
            kind,
            alphabet,
            case_class,
            punct_role,
            span,
        });
    }
    let n = r.usize()?;
    let mut sentences = Vec::new();
    for _ in 0..n {
        let id = r.str()?;
        let first_token = r.usize()?;
        let token_count = r.usize()?;
        let final_state = r.usize()?;
        let ns = r.usize()?;
        let mut states = Vec::new();
        for _ in 0..ns {
            states.push(State {
                token_pos: r.usize()?,
                byte_pos: r.usize()?,
            });
        }
        let nt = r.usize()?;
        let mut transitions = Vec::new();
        for _ in 0..nt {
            let from = r.usize()?;
            let to = r.usize()?;
            if from >= ns || to >= ns {
                return Err(FormatError::Binary(format!("transition {from}->{to} out of range")).into());
            }
            let label = match r.u8()? {
                0 => {
                    let mut a = LexicalAnalysis::new(r.str()?, r.str()?, r.str()?);
                    let nf = r.usize()?;
                    for _ in 0..nf {
                        a.features.push(Feature::new(r.str()?, r.str()?));
                    }
                    Label::Analysis(a)
                }
                1 => Label::Unknown(r.str()?),
                2 => Label::Mark(r.str()?),
                c => return Err(FormatError::Binary(format!("invalid label tag {c}")).into()),
            };
            transitions.push(Transition { from, to, label });
        }
        if final_state >= ns || first_token + token_count > tokens.len() {
            return Err(FormatError::Binary(format!("sentence `{id}` is inconsistent")).into());
        }
        sentences.push(SentenceAutomaton {
            id,
            first_token,
            token_count,
            states,
            transitions,
            final_state,
        });
    }
    if !r.is_empty() {
        return Err(FormatError::Binary("trailing data".into()).into());
    }
    Ok(TaggedText {
        tagset_hash,
        tokens,
        sentences,
        stats,
    })
}
