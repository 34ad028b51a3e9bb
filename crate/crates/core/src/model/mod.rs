//! Data model shared by every stage: tagsets, lexical analyses, lexical
//! masks and tokens.

mod analysis;
mod mask;
mod tagset;
mod token;

pub use analysis::{validate_analysis, Diagnostic, Feature, LexicalAnalysis};
pub use mask::{LexicalMask, MaskParseError};
pub use tagset::{AttrDecl, AttrKind, AttrType, AttrValue, PosDef, Tagset, TagsetError};
pub use token::{CaseClass, PunctRole, Token, TokenKind};
