//! Electronic dictionaries: DELA text, dictionary XML, paradigm-based
//! inflection, minimal-automaton indexes and prioritised lookup.

mod dawg;
mod dela;
mod dicxml;
mod expand;
mod index;
mod inflect;

use thiserror::Error;

pub use dawg::Dawg;
pub use dela::{parse_dela, write_dela, DelaDiagnostic, ParsedDela};
pub use dicxml::{dela_to_xml, xml_to_dela};
pub use expand::{expand_entry, AliasResolver};
pub use index::{
    build_index, lookup_multi, Cursor, IndexStats, IndexedLexicon, LookupOptions,
};
pub use inflect::{inflect, read_paradigms, write_paradigms, InflectionParadigm, LemmaEntry, ParadigmSet};

use crate::error::FormatError;

/// One line of a DELA dictionary.
///
/// Without a tagset the part of speech, traits and codes are opaque
/// strings; [`expand_entry`] resolves them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LexiconEntry {
    pub form: String,
    pub lemma: String,
    pub pos: String,
    /// Semantic traits written after `+`.
    pub traits: Vec<String>,
    /// Inflectional codes written after `:`; each is a string of one-char
    /// value aliases.
    pub codes: Vec<String>,
}

impl LexiconEntry {
    pub fn new(form: &str, lemma: &str, pos: &str) -> Self {
        Self {
            form: form.to_string(),
            lemma: lemma.to_string(),
            pos: pos.to_string(),
            traits: Vec::new(),
            codes: Vec::new(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LexiconError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("line {line}: {message}")]
    Dela { line: usize, message: String },
    #[error("unknown part of speech `{0}`")]
    UnknownPos(String),
    #[error("`{symbol}` does not name a value of any attribute of `{pos}`")]
    UnresolvableAlias { pos: String, symbol: String },
    #[error("lemma `{lemma}` does not end with `{trigger}`, the stem trigger of paradigm {paradigm}")]
    StemTrigger {
        lemma: String,
        trigger: String,
        paradigm: String,
    },
    #[error("unknown paradigm `{0}`")]
    UnknownParadigm(String),
    #[error("lemma line {line} must carry exactly one paradigm code")]
    ParadigmCode { line: usize },
    #[error("lexicon `{name}` was built with a different tagset")]
    TagsetMismatch { name: String },
}
